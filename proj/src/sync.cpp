#include "heterocut/sync.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heterocut/errors.hpp"

namespace heterocut {

namespace {

constexpr double kResidualFloor = 1e-8;  // IRLS weight clamp

using Frame = Eigen::Matrix<double, 3, 2>;  // first two columns of a rotation

// Nearest matrix with orthonormal columns (polar factor of a 3x2 matrix).
Frame stiefel_project(const Frame& m) {
  const Eigen::JacobiSVD<Frame> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU().leftCols<2>() * svd.matrixV().transpose();
}

Rotation complete_rotation(const Frame& a) {
  Rotation r;
  r.m.col(0) = a.col(0);
  r.m.col(1) = a.col(1);
  r.m.col(2) = a.col(0).cross(a.col(1));
  return r;
}

double pair_residual(const Frame& ai, const Eigen::Vector2d& cij, const Frame& aj,
                     const Eigen::Vector2d& cji) {
  return (ai * cij - aj * cji).norm();
}

double objective(const std::vector<Frame>& frames, const CommonLineTable& t) {
  const int n = t.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t.valid(i, j))
        total += pair_residual(frames[i], t.line(i, j).c, frames[j], t.line(j, i).c);
  return total;
}

std::vector<Frame> spectral_init(const CommonLineTable& t) {
  const int n = t.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !t.valid(i, j)) continue;
      s.block<2, 2>(2 * i, 2 * j) = t.line(i, j).c * t.line(j, i).c.transpose();
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  // Rows of the 3 x 2n stack: eigenvectors of the three largest eigenvalues.
  Eigen::MatrixXd v(3, 2 * n);
  for (int r = 0; r < 3; ++r) v.row(r) = eig.eigenvectors().col(2 * n - 1 - r).transpose();

  std::vector<Frame> frames(n);
  for (int i = 0; i < n; ++i) frames[i] = stiefel_project(v.block<3, 2>(0, 2 * i));
  return frames;
}

}  // namespace

bool pair_graph_connected(const CommonLineTable& table) {
  const int n = table.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && table.valid(i, j)) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

SyncResult lud_rotations(const CommonLineTable& table, const LudOptions& opts) {
  const int n = table.size();
  if (n < 3) throw TooFewImages("lud_rotations: need at least 3 images");
  if (!pair_graph_connected(table))
    throw DisconnectedPairs("lud_rotations: valid-pair graph is disconnected");

  std::vector<Frame> frames = spectral_init(table);
  double obj = objective(frames, table);

  int sweeps = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // Weighted least-squares sweep with the current IRLS weights. Each image
    // frame moves to the Procrustes optimum of
    //   sum_j u_ij || A_i c_ij - A_j c_ji ||^2
    // given the other frames, which cannot increase the weighted objective.
    std::vector<Frame> next = frames;
    for (int i = 0; i < n; ++i) {
      Frame m = Frame::Zero();
      for (int j = 0; j < n; ++j) {
        if (i == j || !table.valid(i, j)) continue;
        const Eigen::Vector2d cij = table.line(i, j).c;
        const Eigen::Vector2d cji = table.line(j, i).c;
        const double r = pair_residual(next[i], cij, next[j], cji);
        const double u = 1.0 / std::max(r, kResidualFloor);
        m += u * (next[j] * cji) * cij.transpose();
      }
      if (m.squaredNorm() > 0.0) next[i] = stiefel_project(m);
    }
    ++sweeps;

    const double next_obj = objective(next, table);
    if (next_obj > obj) break;  // rolled back: keep `frames`
    const double change = obj - next_obj;
    frames = std::move(next);
    obj = next_obj;
    if (change <= opts.tol * std::max(obj, 1e-300)) break;
    if (obj <= 1e-12 * static_cast<double>(table.valid_pair_count())) break;
  }

  SyncResult result;
  result.rotations.reserve(n);
  for (const Frame& a : frames) result.rotations.push_back(complete_rotation(a));
  result.residual = obj;
  result.iterations = sweeps;
  return result;
}

std::pair<std::vector<Rotation>, double> align_rotations(std::span<const Rotation> estimated,
                                                         std::span<const Rotation> truth) {
  if (estimated.size() != truth.size())
    throw std::invalid_argument("align_rotations: length mismatch");
  if (estimated.empty()) return {{}, 0.0};

  const Eigen::Matrix3d j_flip = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
  std::vector<Rotation> best;
  double best_error = std::numeric_limits<double>::infinity();

  for (int branch = 0; branch < 2; ++branch) {
    std::vector<Rotation> adjusted(estimated.begin(), estimated.end());
    if (branch == 1)
      for (Rotation& r : adjusted) r.m = j_flip * r.m * j_flip;

    Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < adjusted.size(); ++i) cross += truth[i].m * adjusted[i].m.transpose();
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d q = svd.matrixU() * svd.matrixV().transpose();
    if (q.determinant() < 0.0) {
      Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
      flip(2, 2) = -1.0;
      q = svd.matrixU() * flip * svd.matrixV().transpose();
    }

    double error = 0.0;
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
      adjusted[i].m = q * adjusted[i].m;
      error += rotation_distance(adjusted[i], truth[i]);
    }
    error /= static_cast<double>(adjusted.size());

    if (error < best_error) {
      best_error = error;
      best = std::move(adjusted);
    }
  }
  return {std::move(best), best_error};
}

}  // namespace heterocut
