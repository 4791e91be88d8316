#include <cmath>
#include <cstring>

#include "heterocut/kernels.hpp"

namespace heterocut::kernels {

namespace {

void lifted_line_row_scalar(const double* cx, const double* cy,
                            const std::uint8_t* valid, const double u[3],
                            const double v[3], double* bx, double* by,
                            double* bz, int n) {
  for (int j = 0; j < n; ++j) {
    if (valid[j]) {
      bx[j] = cx[j] * u[0] + cy[j] * v[0];
      by[j] = cx[j] * u[1] + cy[j] * v[1];
      bz[j] = cx[j] * u[2] + cy[j] * v[2];
    } else {
      bx[j] = 0.0;
      by[j] = 0.0;
      bz[j] = 0.0;
    }
  }
}

void pair_distance3_scalar(const double* ax, const double* ay, const double* az,
                           const double* bx, const double* by, const double* bz,
                           double* out, int n) {
  for (int j = 0; j < n; ++j) {
    const double dx = ax[j] - bx[j];
    const double dy = ay[j] - by[j];
    const double dz = az[j] - bz[j];
    out[j] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

void class_sums_scalar(const double* w, const std::int32_t* labels, int n,
                       int num_classes, double* sums) {
  for (int c = 0; c < num_classes; ++c) sums[c] = 0.0;
  for (int j = 0; j < n; ++j) sums[labels[j]] += w[j];
}

double sum_scalar(const double* x, int n) {
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += x[j];
  return acc;
}

void add_inplace_scalar(double* dst, const double* src, int n) {
  for (int j = 0; j < n; ++j) dst[j] += src[j];
}

void sub_inplace_scalar(double* dst, const double* src, int n) {
  for (int j = 0; j < n; ++j) dst[j] -= src[j];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",
                       lifted_line_row_scalar,
                       pair_distance3_scalar,
                       class_sums_scalar,
                       sum_scalar,
                       add_inplace_scalar,
                       sub_inplace_scalar};
  return ops;
}

}  // namespace heterocut::kernels
