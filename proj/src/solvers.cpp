#include "heterocut/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heterocut/errors.hpp"
#include "heterocut/kernels.hpp"
#include "heterocut/parallel.hpp"

namespace heterocut {

namespace {

constexpr int kGwMaxVertices = 1000;
constexpr int kGwMaxSweeps = 5000;

double relaxation_objective(const Eigen::MatrixXd& v, const WeightGraph& g) {
  // trace(W V^T V) without forming the Gram matrix.
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      w(g.w.data(), g.n, g.n);
  const Eigen::MatrixXd wv = w * v.transpose();  // n x r
  return (v.transpose().cwiseProduct(wv)).sum();
}

}  // namespace

SdpSolution maxcut_gw(const WeightGraph& g, int rounding_trials, SeedStream& stream) {
  const int n = g.n;
  if (n < 2) throw std::invalid_argument("maxcut_gw: need at least 2 vertices");
  if (n > kGwMaxVertices) throw std::invalid_argument("maxcut_gw: n > 1000, use maxkcut_local");
  if (rounding_trials < 1) throw std::invalid_argument("maxcut_gw: rounding_trials < 1");

  const int rank = static_cast<int>(std::ceil(std::sqrt(2.0 * n)));
  Eigen::MatrixXd v(rank, n);
  {
    SeedStream init = stream.substream(0x696E6974);  // "init"
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd col(rank);
      double norm2;
      do {
        for (int r = 0; r < rank; ++r) col(r) = init.gaussian();
        norm2 = col.squaredNorm();
      } while (norm2 == 0.0);
      v.col(i) = col / std::sqrt(norm2);
    }
  }

  // Block-coordinate descent on trace(W V^T V): each column moves to the
  // antipode of its weighted neighborhood mean.
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      w(g.w.data(), n, n);
  double objective = relaxation_objective(v, g);
  const double scale = std::max(1.0, g.w.empty() ? 0.0 : 2.0 * total_weight(g));
  const double tol = 1e-12 * scale;
  int sweeps = 0;
  bool converged = false;
  int stall = 0;
  while (sweeps < kGwMaxSweeps) {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd z = v * w.row(i).transpose();
      const double norm = z.norm();
      if (norm > 1e-300) v.col(i) = -z / norm;
    }
    ++sweeps;
    const double next = relaxation_objective(v, g);
    if (objective - next <= tol) {
      if (++stall >= 2) {
        objective = next;
        converged = true;
        break;
      }
    } else {
      stall = 0;
    }
    objective = next;
  }
  if (!converged) throw SolverFailure("maxcut_gw: SDP solve did not reach tolerance");

  SdpSolution sol;
  sol.n = n;
  sol.sweeps = sweeps;
  sol.sdp_objective = objective;
  sol.sdp_cut_bound = total_weight(g) / 2.0 - objective / 4.0;
  sol.gram.resize(static_cast<std::size_t>(n) * n);
  {
    const Eigen::MatrixXd gram = v.transpose() * v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sol.gram[static_cast<std::size_t>(i) * n + j] = gram(i, j);
  }

  // Random-hyperplane rounding; best of `rounding_trials` cuts.
  SeedStream rounding = stream.substream(0x726F756E);  // "roun"
  Partition best(2, n);
  double best_value = -1.0;
  Eigen::VectorXd normal(rank);
  Partition candidate(2, n);
  for (int trial = 0; trial < rounding_trials; ++trial) {
    for (int r = 0; r < rank; ++r) normal(r) = rounding.gaussian();
    for (int i = 0; i < n; ++i) candidate.assign[i] = normal.dot(v.col(i)) >= 0.0 ? 0 : 1;
    const double value = cut_weight(g, candidate);
    if (value > best_value) {
      best_value = value;
      best = candidate;
    }
  }
  sol.cut = best;
  sol.cut_value = best_value;
  return sol;
}

namespace {

struct LocalSearchRun {
  Partition partition;
  double value = 0.0;
  std::vector<double> move_values;
};

LocalSearchRun local_search_once(const WeightGraph& g, int k, SeedStream rng,
                                 bool record_moves) {
  const int n = g.n;
  const auto& ops = kernels::active_ops();
  LocalSearchRun run;
  run.partition = Partition(k, n);
  auto& labels = run.partition.assign;
  for (int i = 0; i < n; ++i) labels[i] = static_cast<std::int32_t>(rng.uniform_int(0, k - 1));

  // sums(v, c) = total weight from v into class c, stored column-major so a
  // relabel updates two contiguous columns.
  std::vector<double> sums(static_cast<std::size_t>(n) * k);
  auto column = [&](int c) { return sums.data() + static_cast<std::size_t>(c) * n; };

  double cut = cut_weight(g, run.partition);
  if (record_moves) run.move_values.push_back(cut);

  constexpr int kMaxSweeps = 500;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    // Rebuilt each sweep; incremental column updates are trusted only within
    // a sweep.
    {
      std::vector<double> row_sums(k);
      for (int v = 0; v < n; ++v) {
        ops.class_sums(g.row(v), labels.data(), n, k, row_sums.data());
        for (int c = 0; c < k; ++c) column(c)[v] = row_sums[c];
      }
    }
    bool moved = false;
    for (int v = 0; v < n; ++v) {
      const int from = labels[v];
      for (int c = 0; c < k; ++c) {
        if (c == from) continue;
        const double gain = column(from)[v] - column(c)[v];
        if (gain > 0.0) {
          labels[v] = static_cast<std::int32_t>(c);
          ops.sub_inplace(column(from), g.row(v), n);
          ops.add_inplace(column(c), g.row(v), n);
          cut += gain;
          moved = true;
          if (record_moves) run.move_values.push_back(cut);
          break;
        }
      }
    }
    if (!moved) break;
  }
  run.value = cut_weight(g, run.partition);
  return run;
}

}  // namespace

Partition maxkcut_local(const WeightGraph& g, int k, int starts, SeedStream& stream,
                        std::vector<double>* move_values) {
  if (k < 2) throw std::invalid_argument("maxkcut_local: k < 2");
  if (starts < 1) throw std::invalid_argument("maxkcut_local: starts < 1");
  const std::uint64_t base = stream.next_u64();

  std::vector<LocalSearchRun> runs(starts);
  parallel_for(0, starts, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t s = lo; s < hi; ++s)
      runs[s] = local_search_once(g, k, SeedStream(derive_seed(base, static_cast<std::uint64_t>(s))),
                                  move_values != nullptr);
  });

  int best = 0;
  for (int s = 1; s < starts; ++s)
    if (runs[s].value > runs[best].value) best = s;
  if (move_values) *move_values = std::move(runs[best].move_values);
  return std::move(runs[best].partition);
}

Partition brute_force_maxkcut(const WeightGraph& g, int k) {
  const int n = g.n;
  if (k < 1) throw std::invalid_argument("brute_force_maxkcut: k < 1");
  if (n < 1) throw std::invalid_argument("brute_force_maxkcut: empty graph");
  double combos = 1.0;
  for (int i = 0; i < n; ++i) {
    combos *= k;
    if (combos > 1e7) throw InstanceTooLarge("brute_force_maxkcut: k^n > 1e7");
  }

  Partition current(k, n), best(k, n);
  double best_value = -1.0;
  while (true) {
    double value = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (current.assign[i] != current.assign[j]) value += g.at(i, j);
    if (value > best_value) {
      best_value = value;
      best = current;
    }
    int pos = n - 1;
    while (pos >= 0 && current.assign[pos] == k - 1) current.assign[pos--] = 0;
    if (pos < 0) break;
    ++current.assign[pos];
  }
  return best;
}

}  // namespace heterocut
