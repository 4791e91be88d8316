#include "heterocut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heterocut/errors.hpp"

namespace heterocut {

Rotation Rotation::about_x(double angle) {
  Rotation r;
  r.m = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
  return r;
}

Rotation Rotation::about_y(double angle) {
  Rotation r;
  r.m = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix();
  return r;
}

Rotation Rotation::about_z(double angle) {
  Rotation r;
  r.m = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return r;
}

bool is_rotation(const Rotation& r, double tol) {
  const Eigen::Matrix3d gram = r.m * r.m.transpose();
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.m.determinant() - 1.0) <= tol;
}

CommonLineTable::CommonLineTable(int n)
    : n_(n),
      cx_(static_cast<std::size_t>(n) * n, 0.0),
      cy_(static_cast<std::size_t>(n) * n, 0.0),
      valid_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 0) throw std::invalid_argument("CommonLineTable: negative size");
}

CommonLine CommonLineTable::line(int i, int j) const {
  return CommonLine{Eigen::Vector2d(cx_[idx(i, j)], cy_[idx(i, j)])};
}

void CommonLineTable::set_pair(int i, int j, const CommonLine& cij, const CommonLine& cji) {
  if (i == j) throw std::invalid_argument("CommonLineTable: diagonal entry");
  cx_[idx(i, j)] = cij.c.x();
  cy_[idx(i, j)] = cij.c.y();
  cx_[idx(j, i)] = cji.c.x();
  cy_[idx(j, i)] = cji.c.y();
  valid_[idx(i, j)] = 1;
  valid_[idx(j, i)] = 1;
}

void CommonLineTable::set_invalid(int i, int j) {
  valid_[idx(i, j)] = 0;
  valid_[idx(j, i)] = 0;
  cx_[idx(i, j)] = cy_[idx(i, j)] = 0.0;
  cx_[idx(j, i)] = cy_[idx(j, i)] = 0.0;
}

CommonLineTable CommonLineTable::subtable(std::span<const int> indices) const {
  CommonLineTable sub(static_cast<int>(indices.size()));
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      const int i = indices[a], j = indices[b];
      if (valid(i, j)) sub.set_pair(static_cast<int>(a), static_cast<int>(b), line(i, j), line(j, i));
    }
  }
  return sub;
}

std::int64_t CommonLineTable::valid_pair_count() const {
  std::int64_t count = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (valid(i, j)) ++count;
  return count;
}

Rotation sample_uniform_rotation(SeedStream& stream) {
  double w, x, y, z, norm2;
  do {
    w = stream.gaussian();
    x = stream.gaussian();
    y = stream.gaussian();
    z = stream.gaussian();
    norm2 = w * w + x * x + y * y + z * z;
  } while (norm2 == 0.0);
  const double s = 1.0 / std::sqrt(norm2);
  Rotation r;
  r.m = Eigen::Quaterniond(w * s, x * s, y * s, z * s).toRotationMatrix();
  return r;
}

namespace {

Eigen::Vector3d common_axis(const Rotation& ri, const Rotation& rj, double* norm_out) {
  Eigen::Vector3d q = ri.m.col(2).cross(rj.m.col(2));
  *norm_out = q.norm();
  return q;
}

}  // namespace

std::optional<std::pair<CommonLine, CommonLine>> try_common_line_pair(const Rotation& ri,
                                                                      const Rotation& rj) {
  double norm = 0.0;
  Eigen::Vector3d q = common_axis(ri, rj, &norm);
  if (norm < kDegeneracyThreshold) return std::nullopt;
  q /= norm;
  const Eigen::Vector3d qi = ri.m.transpose() * q;
  const Eigen::Vector3d qj = rj.m.transpose() * q;
  return std::make_pair(CommonLine{qi.head<2>()}, CommonLine{qj.head<2>()});
}

std::pair<CommonLine, CommonLine> common_line_pair(const Rotation& ri, const Rotation& rj) {
  auto lines = try_common_line_pair(ri, rj);
  if (!lines) throw DegeneratePair("common_line_pair: viewing directions coincide");
  return *lines;
}

Eigen::Vector3d lift(const CommonLine& c) { return Eigen::Vector3d(c.c.x(), c.c.y(), 0.0); }

double angular_distance(const CommonLine& a, const CommonLine& b) {
  return std::acos(std::clamp(a.c.dot(b.c), -1.0, 1.0));
}

double rotation_distance(const Rotation& a, const Rotation& b) {
  const Eigen::Matrix3d d = a.m - b.m;
  return d.jacobiSvd().singularValues()(0);
}

Rotation perturb_rotation(const Rotation& r, double eps, SeedStream& stream) {
  if (eps < 0.0) throw std::invalid_argument("perturb_rotation: negative eps");
  if (eps == 0.0) return r;
  // Uniform axis on S^2.
  const double z = stream.uniform(-1.0, 1.0);
  const double phi = stream.uniform(0.0, 2.0 * M_PI);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Eigen::Vector3d axis(s * std::cos(phi), s * std::sin(phi), z);
  // ||R - R exp(theta K)|| = 2 sin(theta/2); invert for the target distance.
  const double dist = std::min(2.0, eps * stream.next_double());
  const double theta = 2.0 * std::asin(dist / 2.0);
  Rotation out;
  out.m = r.m * Eigen::AngleAxisd(theta, axis).toRotationMatrix();
  return out;
}

CommonLineTable exact_common_lines(std::span<const Rotation> rotations) {
  const int n = static_cast<int>(rotations.size());
  CommonLineTable table(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (auto lines = try_common_line_pair(rotations[i], rotations[j]))
        table.set_pair(i, j, lines->first, lines->second);
      else
        table.set_invalid(i, j);
    }
  }
  return table;
}

}  // namespace heterocut
