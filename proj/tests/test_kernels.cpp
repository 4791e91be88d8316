#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "heterocut/kernels.hpp"
#include "heterocut/rng.hpp"

using namespace heterocut;

namespace {

struct RandomInputs {
  std::vector<double> cx, cy, ax, ay, az, bx, by, bz, w;
  std::vector<std::uint8_t> valid;
  std::vector<std::int32_t> labels;
  double u[3], v[3];

  explicit RandomInputs(int n, int k, std::uint64_t seed) {
    SeedStream s(seed);
    auto fill = [&](std::vector<double>& vec) {
      vec.resize(n);
      for (double& x : vec) x = s.uniform(-2.0, 2.0);
    };
    fill(cx);
    fill(cy);
    fill(ax);
    fill(ay);
    fill(az);
    fill(bx);
    fill(by);
    fill(bz);
    fill(w);
    valid.resize(n);
    for (auto& flag : valid) flag = s.next_double() < 0.8 ? 1 : 0;
    labels.resize(n);
    for (auto& l : labels) l = static_cast<std::int32_t>(s.uniform_int(0, k - 1));
    for (double& x : u) x = s.uniform(-1.0, 1.0);
    for (double& x : v) x = s.uniform(-1.0, 1.0);
  }
};

}  // namespace

TEST_CASE("scalar kernels match direct computation") {
  const int n = 37;
  RandomInputs in(n, 3, 77);
  const auto& ops = kernels::scalar_ops();

  std::vector<double> bx(n), by(n), bz(n);
  ops.lifted_line_row(in.cx.data(), in.cy.data(), in.valid.data(), in.u, in.v, bx.data(),
                      by.data(), bz.data(), n);
  for (int j = 0; j < n; ++j) {
    if (in.valid[j]) {
      CHECK(bx[j] == in.cx[j] * in.u[0] + in.cy[j] * in.v[0]);
      CHECK(bz[j] == in.cx[j] * in.u[2] + in.cy[j] * in.v[2]);
    } else {
      CHECK(bx[j] == 0.0);
      CHECK(by[j] == 0.0);
      CHECK(bz[j] == 0.0);
    }
  }

  std::vector<double> dist(n);
  ops.pair_distance3(in.ax.data(), in.ay.data(), in.az.data(), in.bx.data(), in.by.data(),
                     in.bz.data(), dist.data(), n);
  for (int j = 0; j < n; ++j) {
    const double dx = in.ax[j] - in.bx[j], dy = in.ay[j] - in.by[j], dz = in.az[j] - in.bz[j];
    CHECK(dist[j] == std::sqrt(dx * dx + dy * dy + dz * dz));
  }

  std::vector<double> sums(3);
  ops.class_sums(in.w.data(), in.labels.data(), n, 3, sums.data());
  double check = 0.0;
  for (int j = 0; j < n; ++j)
    if (in.labels[j] == 1) check += in.w[j];
  CHECK(sums[1] == doctest::Approx(check).epsilon(1e-14));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const kernels::Ops* avx2 = kernels::avx2_ops();
  if (!avx2) return;  // platform without AVX2
  const auto& scalar = kernels::scalar_ops();

  for (const int n : {1, 3, 4, 17, 64, 257}) {
    RandomInputs in(n, 4, 1000 + n);

    std::vector<double> sx(n), sy(n), sz(n), vx(n), vy(n), vz(n);
    scalar.lifted_line_row(in.cx.data(), in.cy.data(), in.valid.data(), in.u, in.v, sx.data(),
                           sy.data(), sz.data(), n);
    avx2->lifted_line_row(in.cx.data(), in.cy.data(), in.valid.data(), in.u, in.v, vx.data(),
                          vy.data(), vz.data(), n);
    for (int j = 0; j < n; ++j) {
      CHECK(sx[j] == vx[j]);  // element-wise kernels are bit-identical
      CHECK(sy[j] == vy[j]);
      CHECK(sz[j] == vz[j]);
    }

    std::vector<double> ds(n), dv(n);
    scalar.pair_distance3(in.ax.data(), in.ay.data(), in.az.data(), in.bx.data(), in.by.data(),
                          in.bz.data(), ds.data(), n);
    avx2->pair_distance3(in.ax.data(), in.ay.data(), in.az.data(), in.bx.data(), in.by.data(),
                         in.bz.data(), dv.data(), n);
    for (int j = 0; j < n; ++j) CHECK(ds[j] == dv[j]);

    std::vector<double> sums_s(4), sums_v(4);
    scalar.class_sums(in.w.data(), in.labels.data(), n, 4, sums_s.data());
    avx2->class_sums(in.w.data(), in.labels.data(), n, 4, sums_v.data());
    for (int c = 0; c < 4; ++c)
      CHECK(sums_s[c] == doctest::Approx(sums_v[c]).epsilon(1e-12));

    CHECK(scalar.sum(in.w.data(), n) == doctest::Approx(avx2->sum(in.w.data(), n)).epsilon(1e-12));

    std::vector<double> add_s = in.ax, add_v = in.ax;
    scalar.add_inplace(add_s.data(), in.w.data(), n);
    avx2->add_inplace(add_v.data(), in.w.data(), n);
    for (int j = 0; j < n; ++j) CHECK(add_s[j] == add_v[j]);

    std::vector<double> sub_s = in.ax, sub_v = in.ax;
    scalar.sub_inplace(sub_s.data(), in.w.data(), n);
    avx2->sub_inplace(sub_v.data(), in.w.data(), n);
    for (int j = 0; j < n; ++j) CHECK(sub_s[j] == sub_v[j]);
  }
}

TEST_CASE("active_ops returns a usable variant") {
  const auto& ops = kernels::active_ops();
  CHECK(ops.name != nullptr);
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(ops.sum(x.data(), 5) == doctest::Approx(15.0));
}
