#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "heterocut/errors.hpp"
#include "heterocut/solvers.hpp"

using namespace heterocut;

namespace {

WeightGraph random_bipartite(int n1, int n2, SeedStream& s) {
  WeightGraph g(n1 + n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double w = 1.0 - s.next_double();  // (0, 1]
      g.at(i, n1 + j) = g.at(n1 + j, i) = w;
    }
  return g;
}

WeightGraph random_graph(int n, double density, SeedStream& s) {
  WeightGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (s.next_double() < density) g.at(i, j) = g.at(j, i) = 1.0 - s.next_double();
  return g;
}

double min_eigenvalue(const SdpSolution& sol) {
  Eigen::MatrixXd gram(sol.n, sol.n);
  for (int i = 0; i < sol.n; ++i)
    for (int j = 0; j < sol.n; ++j) gram(i, j) = sol.gram_at(i, j);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues()(0);
}

}  // namespace

TEST_CASE("gw separates a single edge") {
  WeightGraph g(2);
  g.at(0, 1) = g.at(1, 0) = 1.0;
  SeedStream s(1);
  const SdpSolution sol = maxcut_gw(g, 10, s);
  CHECK(sol.cut_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.cut.assign[0] != sol.cut.assign[1]);
}

TEST_CASE("gw is exact on bipartite graphs") {
  SeedStream s(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n1 = s.uniform_int(2, 7);
    const int n2 = s.uniform_int(2, 7);
    const WeightGraph g = random_bipartite(n1, n2, s);
    const double all_cross = total_weight(g);

    SeedStream solver_stream(1000 + trial);
    const SdpSolution sol = maxcut_gw(g, 100, solver_stream);
    CHECK(sol.cut_value == doctest::Approx(all_cross).epsilon(1e-9));
    const Partition brute = brute_force_maxkcut(g, 2);
    CHECK(sol.cut_value == doctest::Approx(cut_weight(g, brute)).epsilon(1e-9));

    // At the optimum the relaxation objective hits the rank-one bound
    // -2 * (sum of cross-block weights).
    CHECK(std::abs(sol.sdp_objective + 2.0 * all_cross) <= 1e-6 * 2.0 * all_cross);
  }
}

TEST_CASE("gw solution invariants hold on random graphs") {
  SeedStream s(3);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = s.uniform_int(4, 14);
    const WeightGraph g = random_graph(n, 0.7, s);
    SeedStream solver_stream(2000 + trial);
    const SdpSolution sol = maxcut_gw(g, 100, solver_stream);

    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(sol.gram_at(i, i) - 1.0) <= 1e-8);
      for (int j = 0; j < n; ++j) CHECK(std::abs(sol.gram_at(i, j)) <= 1.0 + 1e-8);
    }
    CHECK(min_eigenvalue(sol) >= -1e-8);

    // Rounded cuts never beat the relaxation bound.
    CHECK(sol.cut_value <= sol.sdp_cut_bound + 1e-7);

    const Partition brute = brute_force_maxkcut(g, 2);
    const double optimum = cut_weight(g, brute);
    CHECK(sol.cut_value >= 0.87 * optimum - 1e-9);
    CHECK(sol.cut_value <= optimum + 1e-9);
  }
}

TEST_CASE("gw rejects oversized and undersized instances") {
  WeightGraph tiny(1);
  SeedStream s(4);
  CHECK_THROWS_AS(maxcut_gw(tiny, 10, s), std::invalid_argument);
  WeightGraph big(1001);
  CHECK_THROWS_AS(maxcut_gw(big, 10, s), std::invalid_argument);
}

TEST_CASE("local search solves the weighted triangle") {
  // Edges (0,1)=3, (0,2)=1, (1,2)=1. Enumerating the three nontrivial splits
  // gives cuts 4, 4, and 2, so the optimum is 4.
  WeightGraph g(3);
  g.at(0, 1) = g.at(1, 0) = 3.0;
  g.at(0, 2) = g.at(2, 0) = 1.0;
  g.at(1, 2) = g.at(2, 1) = 1.0;
  double enumerated_best = 0.0;
  for (int mask = 1; mask < 4; ++mask) {
    Partition p(2, 3);
    for (int i = 0; i < 3; ++i) p.assign[i] = (mask >> i) & 1;
    enumerated_best = std::max(enumerated_best, cut_weight(g, p));
  }
  CHECK(enumerated_best == doctest::Approx(4.0));

  SeedStream s(5);
  const Partition found = maxkcut_local(g, 2, 8, s);
  CHECK(cut_weight(g, found) == doctest::Approx(4.0));
  CHECK(found.assign[0] != found.assign[1]);  // the weight-3 edge is cut
}

TEST_CASE("local search with k = n isolates every vertex") {
  SeedStream s(6);
  const WeightGraph g = random_graph(7, 1.0, s);
  SeedStream solver_stream(7);
  const Partition p = maxkcut_local(g, 7, 4, solver_stream);
  CHECK(cut_weight(g, p) == doctest::Approx(total_weight(g)).epsilon(1e-12));
}

TEST_CASE("local search finds the bipartite optimum almost always") {
  int hits = 0;
  for (int seed = 0; seed < 50; ++seed) {
    SeedStream s(9000 + seed);
    const int n1 = s.uniform_int(3, 7);
    const int n2 = s.uniform_int(3, 7);
    const WeightGraph g = random_bipartite(n1, n2, s);
    SeedStream solver_stream(100 + seed);
    const Partition p = maxkcut_local(g, 2, 8, solver_stream);
    if (std::abs(cut_weight(g, p) - total_weight(g)) < 1e-9) ++hits;
  }
  CHECK(hits >= 48);
}

TEST_CASE("local search move sequence is monotone") {
  SeedStream s(10);
  const WeightGraph g = random_graph(20, 0.8, s);
  SeedStream solver_stream(11);
  std::vector<double> moves;
  const Partition p = maxkcut_local(g, 3, 4, solver_stream, &moves);
  REQUIRE(moves.size() >= 2);
  for (std::size_t i = 1; i < moves.size(); ++i) CHECK(moves[i] >= moves[i - 1]);
  CHECK(std::abs(moves.back() - cut_weight(g, p)) < 1e-9);
}

TEST_CASE("cut values are invariant under class relabeling") {
  SeedStream s(12);
  const WeightGraph g = random_graph(12, 0.9, s);
  SeedStream solver_stream(13);
  const Partition p = maxkcut_local(g, 3, 4, solver_stream);
  Partition relabeled = p;
  for (auto& label : relabeled.assign) label = (label + 1) % 3;
  CHECK(cut_weight(g, p) == doctest::Approx(cut_weight(g, relabeled)).epsilon(1e-12));
}

TEST_CASE("brute force handles the small cases and dominates local search") {
  WeightGraph single(1);
  const Partition lone = brute_force_maxkcut(single, 2);
  CHECK(cut_weight(single, lone) == 0.0);

  WeightGraph pair(2);
  pair.at(0, 1) = pair.at(1, 0) = 5.0;
  CHECK(cut_weight(pair, brute_force_maxkcut(pair, 2)) == doctest::Approx(5.0));

  SeedStream s(14);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = s.uniform_int(5, 12);
    const int k = s.uniform_int(2, 3);
    const WeightGraph g = random_graph(n, 0.8, s);
    SeedStream solver_stream(500 + trial);
    const double local = cut_weight(g, maxkcut_local(g, k, 8, solver_stream));
    const double exact = cut_weight(g, brute_force_maxkcut(g, k));
    CHECK(exact >= local - 1e-9);
  }

  WeightGraph too_big(40);
  CHECK_THROWS_AS(brute_force_maxkcut(too_big, 4), InstanceTooLarge);
}

TEST_CASE("solvers are deterministic for a fixed seed") {
  SeedStream s(15);
  const WeightGraph g = random_graph(12, 0.7, s);
  SeedStream a(77), b(77);
  const SdpSolution sol_a = maxcut_gw(g, 50, a);
  const SdpSolution sol_b = maxcut_gw(g, 50, b);
  CHECK(sol_a.cut_value == sol_b.cut_value);
  CHECK(sol_a.cut.assign == sol_b.cut.assign);

  SeedStream c(78), d(78);
  CHECK(maxkcut_local(g, 3, 8, c).assign == maxkcut_local(g, 3, 8, d).assign);
}
