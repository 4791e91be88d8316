// AVX2 variants. Multiplies and adds are kept separate (no FMA) so the
// element-wise kernels are bit-identical to the scalar reference; reductions
// agree only up to accumulation order.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "heterocut/kernels.hpp"

namespace heterocut::kernels {

namespace {

inline __m256d valid_mask(const std::uint8_t* valid, int j) {
  return _mm256_castsi256_pd(_mm256_setr_epi64x(
      valid[j] ? -1 : 0, valid[j + 1] ? -1 : 0, valid[j + 2] ? -1 : 0,
      valid[j + 3] ? -1 : 0));
}

void lifted_line_row_avx2(const double* cx, const double* cy,
                          const std::uint8_t* valid, const double u[3],
                          const double v[3], double* bx, double* by, double* bz,
                          int n) {
  const __m256d ux = _mm256_set1_pd(u[0]), uy = _mm256_set1_pd(u[1]),
                uz = _mm256_set1_pd(u[2]);
  const __m256d vx = _mm256_set1_pd(v[0]), vy = _mm256_set1_pd(v[1]),
                vz = _mm256_set1_pd(v[2]);
  int j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(cx + j);
    const __m256d b = _mm256_loadu_pd(cy + j);
    const __m256d mask = valid_mask(valid, j);
    _mm256_storeu_pd(bx + j,
                     _mm256_and_pd(mask, _mm256_add_pd(_mm256_mul_pd(a, ux),
                                                       _mm256_mul_pd(b, vx))));
    _mm256_storeu_pd(by + j,
                     _mm256_and_pd(mask, _mm256_add_pd(_mm256_mul_pd(a, uy),
                                                       _mm256_mul_pd(b, vy))));
    _mm256_storeu_pd(bz + j,
                     _mm256_and_pd(mask, _mm256_add_pd(_mm256_mul_pd(a, uz),
                                                       _mm256_mul_pd(b, vz))));
  }
  for (; j < n; ++j) {
    if (valid[j]) {
      bx[j] = cx[j] * u[0] + cy[j] * v[0];
      by[j] = cx[j] * u[1] + cy[j] * v[1];
      bz[j] = cx[j] * u[2] + cy[j] * v[2];
    } else {
      bx[j] = by[j] = bz[j] = 0.0;
    }
  }
}

void pair_distance3_avx2(const double* ax, const double* ay, const double* az,
                         const double* bx, const double* by, const double* bz,
                         double* out, int n) {
  int j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax + j), _mm256_loadu_pd(bx + j));
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay + j), _mm256_loadu_pd(by + j));
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(az + j), _mm256_loadu_pd(bz + j));
    const __m256d s = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
        _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(s));
  }
  for (; j < n; ++j) {
    const double dx = ax[j] - bx[j];
    const double dy = ay[j] - by[j];
    const double dz = az[j] - bz[j];
    out[j] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

inline double hsum(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void class_sums_avx2(const double* w, const std::int32_t* labels, int n,
                     int num_classes, double* sums) {
  for (int c = 0; c < num_classes; ++c) {
    const __m128i cc = _mm_set1_epi32(c);
    __m256d acc = _mm256_setzero_pd();
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m128i lab = _mm_loadu_si128(reinterpret_cast<const __m128i*>(labels + j));
      const __m256d mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(lab, cc)));
      acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + j)));
    }
    double tail = 0.0;
    for (; j < n; ++j)
      if (labels[j] == c) tail += w[j];
    sums[c] = hsum(acc) + tail;
  }
}

double sum_avx2(const double* x, int n) {
  __m256d acc = _mm256_setzero_pd();
  int j = 0;
  for (; j + 4 <= n; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + j));
  double tail = 0.0;
  for (; j < n; ++j) tail += x[j];
  return hsum(acc) + tail;
}

void add_inplace_avx2(double* dst, const double* src, int n) {
  int j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(dst + j, _mm256_add_pd(_mm256_loadu_pd(dst + j),
                                            _mm256_loadu_pd(src + j)));
  for (; j < n; ++j) dst[j] += src[j];
}

void sub_inplace_avx2(double* dst, const double* src, int n) {
  int j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(dst + j, _mm256_sub_pd(_mm256_loadu_pd(dst + j),
                                            _mm256_loadu_pd(src + j)));
  for (; j < n; ++j) dst[j] -= src[j];
}

}  // namespace

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Ops ops{"avx2",
                       lifted_line_row_avx2,
                       pair_distance3_avx2,
                       class_sums_avx2,
                       sum_avx2,
                       add_inplace_avx2,
                       sub_inplace_avx2};
  return &ops;
}

}  // namespace heterocut::kernels

#else

#include "heterocut/kernels.hpp"

namespace heterocut::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace heterocut::kernels

#endif
