#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "heterocut/graph.hpp"
#include "heterocut/sim.hpp"

using namespace heterocut;

namespace {

// Scalar re-evaluation of the whole weight matrix through plain Eigen calls.
WeightGraph weight_oracle(const std::vector<Rotation>& rots, const CommonLineTable& t) {
  WeightGraph g(t.size());
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j)
      if (i != j && t.valid(i, j))
        g.at(i, j) = edge_weight(rots[i], t.line(i, j), rots[j], t.line(j, i));
  return g;
}

CommonLine random_line(SeedStream& s) {
  const double phi = s.uniform(0.0, 2.0 * M_PI);
  return CommonLine{Eigen::Vector2d(std::cos(phi), std::sin(phi))};
}

}  // namespace

TEST_CASE("edge_weight vanishes on consistent data") {
  SeedStream s(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Rotation ri = sample_uniform_rotation(s);
    const Rotation rj = sample_uniform_rotation(s);
    const auto [cij, cji] = common_line_pair(ri, rj);
    CHECK(edge_weight(ri, cij, rj, cji) < 1e-12);
  }
}

TEST_CASE("edge_weight of an eps-perturbed in-class pair stays below 4 eps") {
  SeedStream s(2);
  const double eps = 0.07;
  for (int trial = 0; trial < 200; ++trial) {
    const Rotation ri = sample_uniform_rotation(s);
    const Rotation rj = sample_uniform_rotation(s);
    const auto [cij, cji] = common_line_pair(ri, rj);
    const Rotation pi = perturb_rotation(ri, eps, s);
    const Rotation pj = perturb_rotation(rj, eps, s);
    const double a1 = s.uniform(-eps, eps), a2 = s.uniform(-eps, eps);
    const Eigen::Rotation2Dd rot1(a1), rot2(a2);
    const CommonLine jij{rot1 * cij.c};
    const CommonLine jji{rot2 * cji.c};
    CHECK(edge_weight(pi, jij, pj, jji) <= 4.0 * eps + 1e-12);
  }
}

TEST_CASE("edge_weight under true rotations and uniform lines has mean 4/3") {
  SeedStream s(3);
  const int n = 1000000;
  double mean = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const Rotation ri = sample_uniform_rotation(s);
    const Rotation rj = sample_uniform_rotation(s);
    mean += edge_weight(ri, random_line(s), rj, random_line(s));
  }
  mean /= n;
  CHECK(std::abs(mean - 4.0 / 3.0) < 0.01);
}

TEST_CASE("build_weight_graph handles consistent, invalid, and random tables") {
  SeedStream s(4);
  std::vector<Rotation> pair{sample_uniform_rotation(s), sample_uniform_rotation(s)};
  const CommonLineTable exact = exact_common_lines(pair);
  const WeightGraph consistent = build_weight_graph(pair, exact);
  CHECK(consistent.at(0, 0) == 0.0);
  CHECK(consistent.at(1, 1) == 0.0);
  CHECK(consistent.at(0, 1) < 1e-12);
  CHECK(consistent.at(1, 0) < 1e-12);

  CommonLineTable holed = exact;
  holed.set_invalid(0, 1);
  const WeightGraph zeroed = build_weight_graph(pair, holed);
  CHECK(zeroed.at(0, 1) == 0.0);

  std::vector<Rotation> rots;
  for (int i = 0; i < 10; ++i) rots.push_back(sample_uniform_rotation(s));
  CommonLineTable noisy(10);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      if ((i + j) % 7 == 0)
        noisy.set_invalid(i, j);
      else
        noisy.set_pair(i, j, random_line(s), random_line(s));
    }
  const WeightGraph fast = build_weight_graph(rots, noisy);
  const WeightGraph slow = weight_oracle(rots, noisy);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      CHECK(std::abs(fast.at(i, j) - slow.at(i, j)) < 1e-15);
      CHECK(fast.at(i, j) == fast.at(j, i));
      CHECK(fast.at(i, j) >= 0.0);
      CHECK(fast.at(i, j) <= 2.0);
    }

  CHECK_THROWS(build_weight_graph(std::vector<Rotation>(3), noisy));
}

TEST_CASE("cut_weight basics and the total-weight identity") {
  WeightGraph g(2);
  g.at(0, 1) = g.at(1, 0) = 3.0;
  Partition one_class(2, 2);
  CHECK(cut_weight(g, one_class) == 0.0);
  Partition split(2, 2);
  split.assign = {0, 1};
  CHECK(cut_weight(g, split) == doctest::Approx(3.0));

  SeedStream s(5);
  WeightGraph random_graph(9);
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      random_graph.at(i, j) = random_graph.at(j, i) = s.next_double();
  for (int trial = 0; trial < 20; ++trial) {
    Partition p(3, 9);
    for (auto& label : p.assign) label = static_cast<std::int32_t>(s.uniform_int(0, 2));
    const double cut = cut_weight(random_graph, p);
    const double within = within_class_weight(random_graph, p);
    CHECK(cut + within == doctest::Approx(total_weight(random_graph)).epsilon(1e-12));
  }
}

TEST_CASE("objective_F matches the cut complement and vanishes at the truth") {
  SimSpec spec;
  spec.class_sizes = {12, 10};
  spec.eps_line = 0.0;
  spec.p_correct = 1.0;
  spec.seed = 99;
  const Dataset clean = simulate_dataset(spec);
  CHECK(objective_F(clean.truth_rotations, clean.truth_partition, clean.table) < 1e-10);

  spec.eps_line = 0.3;
  spec.p_correct = 0.6;
  const Dataset noisy = simulate_dataset(spec);
  const WeightGraph w = build_weight_graph(noisy.truth_rotations, noisy.table);

  Partition single(1, noisy.size());
  CHECK(objective_F(noisy.truth_rotations, single, noisy.table) ==
        doctest::Approx(total_weight(w)).epsilon(1e-12));

  SeedStream s(6);
  for (int trial = 0; trial < 10; ++trial) {
    Partition p(2, noisy.size());
    for (auto& label : p.assign) label = static_cast<std::int32_t>(s.uniform_int(0, 1));
    const double f = objective_F(noisy.truth_rotations, p, noisy.table);
    CHECK(std::abs(f - (total_weight(w) - cut_weight(w, p))) < 1e-9);
  }
}

TEST_CASE("max cut and min objective coincide under fixed rotations") {
  SimSpec spec;
  spec.class_sizes = {5, 5};
  spec.eps_line = 0.1;
  spec.p_correct = 0.8;
  spec.seed = 17;
  const Dataset data = simulate_dataset(spec);
  const WeightGraph w = build_weight_graph(data.truth_rotations, data.table);

  double best_cut = -1.0, best_f = 1e300;
  int argmax_cut = -1, argmin_f = -1;
  for (int mask = 0; mask < (1 << 10); ++mask) {
    Partition p(2, 10);
    for (int i = 0; i < 10; ++i) p.assign[i] = (mask >> i) & 1;
    const double cut = cut_weight(w, p);
    const double f = objective_F(data.truth_rotations, p, data.table);
    if (cut > best_cut + 1e-12) {
      best_cut = cut;
      argmax_cut = mask;
    }
    if (f < best_f - 1e-12) {
      best_f = f;
      argmin_f = mask;
    }
  }
  CHECK(argmax_cut == argmin_f);
}

TEST_CASE("weight graph round-trips through CSV and binary") {
  SeedStream s(7);
  WeightGraph g(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) g.at(i, j) = g.at(j, i) = s.next_double();

  std::stringstream csv;
  save_weight_graph_csv(g, csv);
  const WeightGraph from_csv = load_weight_graph_csv(csv);
  REQUIRE(from_csv.n == 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(from_csv.at(i, j) == g.at(i, j));

  const std::string path = "/tmp/heterocut_test_graph.bin";
  save_weight_graph_binary(g, path);
  const WeightGraph from_bin = load_weight_graph_binary(path);
  REQUIRE(from_bin.n == 6);
  CHECK(from_bin.w == g.w);
}
