#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "heterocut/rng.hpp"

namespace heterocut {

/// Element of SO(3). Column 0 and 1 span the image plane; column 2 is the
/// viewing direction.
struct Rotation {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

  static Rotation identity() { return Rotation{}; }
  static Rotation about_x(double angle);
  static Rotation about_y(double angle);
  static Rotation about_z(double angle);

  Eigen::Vector3d view_direction() const { return m.col(2); }
};

bool is_rotation(const Rotation& r, double tol = 1e-12);

/// Unit direction in an image's Fourier plane.
struct CommonLine {
  Eigen::Vector2d c = Eigen::Vector2d::UnitX();
};

/// Symmetric table of detected common lines between all image pairs, with a
/// validity mask for degenerate or missing pairs. Storage is one ordered-pair
/// slot per (i, j); validity is always symmetric and the diagonal invalid.
class CommonLineTable {
 public:
  CommonLineTable() = default;
  explicit CommonLineTable(int n);

  int size() const { return n_; }

  bool valid(int i, int j) const { return valid_[idx(i, j)] != 0; }
  CommonLine line(int i, int j) const;

  /// Stores c_ij at (i,j) and c_ji at (j,i) and marks the pair valid.
  void set_pair(int i, int j, const CommonLine& cij, const CommonLine& cji);
  void set_invalid(int i, int j);

  /// Table restricted to the given (sorted, distinct) image indices.
  CommonLineTable subtable(std::span<const int> indices) const;

  std::int64_t valid_pair_count() const;

  // Raw row access for kernel consumers.
  const double* cx_row(int i) const { return cx_.data() + static_cast<std::size_t>(i) * n_; }
  const double* cy_row(int i) const { return cy_.data() + static_cast<std::size_t>(i) * n_; }
  const std::uint8_t* valid_row(int i) const { return valid_.data() + static_cast<std::size_t>(i) * n_; }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<double> cx_, cy_;
  std::vector<std::uint8_t> valid_;
};

/// Threshold on ||r3_i x r3_j|| below which a pair of viewing directions is
/// treated as coincident. Such pairs carry no common-line information and are
/// marked invalid wherever tables are built.
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Haar-uniform rotation (random unit quaternion).
Rotation sample_uniform_rotation(SeedStream& stream);

/// Common-line directions of a pair of rotations: the normalized cross
/// product of the two viewing directions projected into each image frame.
/// Depends only on the relative orientation, so the result is unchanged when
/// both rotations are premultiplied by any global rotation. Note the argument
/// order fixes the axis sign: swapping (ri, rj) negates both directions.
/// Throws DegeneratePair when the viewing directions (anti-)coincide.
std::pair<CommonLine, CommonLine> common_line_pair(const Rotation& ri, const Rotation& rj);
std::optional<std::pair<CommonLine, CommonLine>> try_common_line_pair(const Rotation& ri,
                                                                      const Rotation& rj);

/// Zero-padded embedding of a plane direction into R^3.
Eigen::Vector3d lift(const CommonLine& c);

/// Angle between two plane directions, in [0, pi].
double angular_distance(const CommonLine& a, const CommonLine& b);

/// Spectral norm of the difference of two rotations.
double rotation_distance(const Rotation& a, const Rotation& b);

/// Rotation within spectral distance eps of r: r composed with a rotation by
/// a random angle about a random axis, the angle chosen so the distance is
/// eps scaled by a uniform [0,1] draw.
Rotation perturb_rotation(const Rotation& r, double eps, SeedStream& stream);

/// Exhaustive table of common lines for known rotations; degenerate pairs are
/// marked invalid.
CommonLineTable exact_common_lines(std::span<const Rotation> rotations);

}  // namespace heterocut
