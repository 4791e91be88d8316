#pragma once

#include <cstdint>

namespace heterocut::kernels {

/// Data-parallel inner loops with scalar reference implementations and an
/// AVX2 variant selected at runtime. Element-wise kernels (lifted_line_row,
/// pair_distance3, add/sub) are bit-identical across variants; reductions
/// (sum, class_sums) differ only in accumulation order.
struct Ops {
  const char* name;

  /// b_j = cx[j]*u + cy[j]*v for valid[j] != 0, else (0,0,0).
  /// u, v are 3-vectors (the in-plane axes of one rotation).
  void (*lifted_line_row)(const double* cx, const double* cy,
                          const std::uint8_t* valid, const double u[3],
                          const double v[3], double* bx, double* by, double* bz,
                          int n);

  /// out[j] = || (ax,ay,az)[j] - (bx,by,bz)[j] ||.
  void (*pair_distance3)(const double* ax, const double* ay, const double* az,
                         const double* bx, const double* by, const double* bz,
                         double* out, int n);

  /// sums[c] = sum of w[j] over j with labels[j] == c, for c in [0, num_classes).
  void (*class_sums)(const double* w, const std::int32_t* labels, int n,
                     int num_classes, double* sums);

  double (*sum)(const double* x, int n);

  void (*add_inplace)(double* dst, const double* src, int n);
  void (*sub_inplace)(double* dst, const double* src, int n);
};

const Ops& scalar_ops();

/// AVX2 variant, or nullptr when unsupported by the build or the CPU.
const Ops* avx2_ops();

/// Selected once per process: HETEROCUT_KERNELS=scalar|avx2 overrides the
/// default (AVX2 when available).
const Ops& active_ops();

}  // namespace heterocut::kernels
