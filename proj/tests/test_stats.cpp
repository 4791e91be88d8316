#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "heterocut/graph.hpp"
#include "heterocut/sim.hpp"
#include "heterocut/stats.hpp"

using namespace heterocut;

TEST_CASE("sphere pair distances follow the r/2 density") {
  SeedStream s(14);
  const EmpiricalDistribution dist = sphere_pair_distance_samples(1000000, s);

  for (const double x : dist.samples) {
    CHECK(x >= 0.0);
    CHECK(x <= 2.0);
  }
  CHECK(std::abs(dist.mean() - 4.0 / 3.0) < 0.01);

  double mass = 0.0;
  for (const double m : dist.bin_mass) mass += m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  // Histogram against the exact per-bin mass (r_hi^2 - r_lo^2) / 4.
  for (std::size_t b = 0; b < dist.bin_mass.size(); ++b) {
    const double lo = dist.bin_edges[b], hi = dist.bin_edges[b + 1];
    const double exact = (hi * hi - lo * lo) / 4.0;
    CHECK(std::abs(dist.bin_mass[b] - exact) / exact < 0.03);
  }

  const double ks = ks_statistic(dist.samples, [](double r) { return r * r / 4.0; });
  CHECK(ks < 0.002);
}

TEST_CASE("sampling is deterministic per seed") {
  SeedStream a(9), b(9);
  const auto da = sphere_pair_distance_samples(1000, a);
  const auto db = sphere_pair_distance_samples(1000, b);
  CHECK(da.samples == db.samples);
}

TEST_CASE("gaussian max bound holds with high probability") {
  SeedStream s(2);
  const std::vector<double> mus(10000, 0.0);
  const std::vector<double> sigmas(10000, 1.0);
  const double rate = max_gaussian_bound_check(mus, sigmas, 1000, s);
  CHECK(rate <= 0.01);

  const std::vector<double> flat_sigma(10000, 0.0);
  std::vector<double> spread_mu(10000);
  for (int i = 0; i < 10000; ++i) spread_mu[i] = std::sin(i * 0.37);
  SeedStream s2(3);
  CHECK(max_gaussian_bound_check(spread_mu, flat_sigma, 200, s2) == 0.0);

  SeedStream s3(4);
  std::vector<double> mixed_mu(10000), mixed_sigma(10000);
  SeedStream gen(5);
  for (int i = 0; i < 10000; ++i) {
    mixed_mu[i] = gen.uniform(-2.0, 2.0);
    mixed_sigma[i] = gen.uniform(0.1, 1.5);
  }
  CHECK(max_gaussian_bound_check(mixed_mu, mixed_sigma, 500, s3) <= 0.05);
}

TEST_CASE("exceedance rate trends down as n grows") {
  const int trials = 500;
  const int seeds = 20;
  double rates[3] = {0.0, 0.0, 0.0};
  const int sizes[3] = {100, 1000, 10000};
  for (int which = 0; which < 3; ++which) {
    const std::vector<double> mus(sizes[which], 0.0);
    const std::vector<double> sigmas(sizes[which], 1.0);
    for (int seed = 0; seed < seeds; ++seed) {
      SeedStream s(7000 + 100 * which + seed);
      rates[which] += max_gaussian_bound_check(mus, sigmas, trials, s);
    }
    rates[which] /= seeds;
  }
  CHECK(rates[0] >= rates[1]);
  CHECK(rates[1] >= rates[2]);
}

TEST_CASE("cross-class edge weights match the sphere-pair law") {
  SimSpec spec;
  spec.class_sizes = {350, 350};
  spec.eps_line = 0.0;
  spec.p_correct = 1.0;
  spec.seed = 6;
  const Dataset data = simulate_dataset(spec);
  const WeightGraph w = build_weight_graph(data.truth_rotations, data.table);

  std::vector<double> cross;
  cross.reserve(100000);
  for (int i = 0; i < data.size() && cross.size() < 100000; ++i)
    for (int j = i + 1; j < data.size() && cross.size() < 100000; ++j)
      if (data.truth_partition.assign[i] != data.truth_partition.assign[j])
        cross.push_back(w.at(i, j));
  REQUIRE(cross.size() == 100000);

  SeedStream s(7);
  const EmpiricalDistribution sphere = sphere_pair_distance_samples(100000, s);
  CHECK(two_sample_ks(cross, sphere.samples) < 0.01);
}

TEST_CASE("ks statistics behave on known inputs") {
  // Uniform[0,1] samples against their own CDF.
  SeedStream s(8);
  std::vector<double> u(200000);
  for (double& x : u) x = s.next_double();
  CHECK(ks_statistic(u, [](double x) { return x; }) < 0.005);

  // Against a wrong CDF the statistic is large.
  CHECK(ks_statistic(u, [](double x) { return x * x; }) > 0.2);

  std::vector<double> v(200000);
  SeedStream s2(9);
  for (double& x : v) x = s2.next_double();
  CHECK(two_sample_ks(u, v) < 0.01);
}
