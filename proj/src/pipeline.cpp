#include "heterocut/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "heterocut/errors.hpp"
#include "heterocut/solvers.hpp"

#include <nlohmann/json.hpp>

namespace heterocut {

namespace {

constexpr double kStopTolerance = 1e-9;  // objective-unchanged test

void validate(const CommonLineTable& table, const PipelineConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("pipeline: k < 1");
  if (cfg.max_iters < 1) throw std::invalid_argument("pipeline: max_iters < 1");
  if (cfg.solver == CutSolver::gw && cfg.k != 2)
    throw std::invalid_argument("pipeline: the gw solver handles k == 2 only");
  if (cfg.solver == CutSolver::gw && table.size() > 1000)
    throw std::invalid_argument("pipeline: gw solver is capped at 1000 images");
  if (table.size() < 2 * cfg.k)
    std::cerr << "heterocut: warning: fewer than 2K images (" << table.size() << " for K="
               << cfg.k << ")\n";
}

Partition initial_partition(int n, const PipelineConfig& cfg) {
  Partition p(cfg.k, n);
  if (cfg.init == InitMode::random_balanced) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    SeedStream shuffle(derive_seed(cfg.seed, 0x73687566));  // "shuf"
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[shuffle.uniform_int(0, i)]);
    for (int pos = 0; pos < n; ++pos) p.assign[order[pos]] = pos % cfg.k;
  }
  return p;  // all_in_one: every image in class 0
}

}  // namespace

PipelineResult run_pipeline(const CommonLineTable& table, const PipelineConfig& cfg,
                            const std::vector<Rotation>* fixed_rotations) {
  validate(table, cfg);
  const int n = table.size();
  if (fixed_rotations && static_cast<int>(fixed_rotations->size()) != n)
    throw std::invalid_argument("pipeline: fixed_rotations size mismatch");

  PipelineResult result;
  std::vector<Rotation> rotations =
      fixed_rotations ? *fixed_rotations : std::vector<Rotation>(n, Rotation::identity());
  Partition partition = initial_partition(n, cfg);

  // Per-class objective values; their ordered sum is the pipeline objective,
  // so guard comparisons and the stored trace use identical numbers.
  std::vector<double> class_f(cfg.k, 0.0);
  std::vector<std::vector<int>> members(cfg.k);
  auto refresh_members = [&]() {
    for (int c = 0; c < cfg.k; ++c) members[c] = partition.members(c);
  };
  auto sum_class_f = [&]() {
    double total = 0.0;
    for (int c = 0; c < cfg.k; ++c) total += class_f[c];
    return total;
  };

  refresh_members();
  for (int c = 0; c < cfg.k; ++c) class_f[c] = class_objective(rotations, members[c], table);
  double f_current = sum_class_f();

  result.trace.push_back({PipelineState{rotations, partition, f_current, 0}, 0, 0.0});

  SeedStream cut_stream(derive_seed(cfg.seed, 0x6D617863));  // "maxc"

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    int reverts = 0;

    if (fixed_rotations) {
      rotations = *fixed_rotations;
      for (int c = 0; c < cfg.k; ++c) class_f[c] = class_objective(rotations, members[c], table);
    } else {
      for (int c = 0; c < cfg.k; ++c) {
        const std::vector<int>& idx = members[c];
        if (static_cast<int>(idx.size()) < 3) continue;
        SyncResult solved;
        try {
          solved = lud_rotations(table.subtable(idx), LudOptions{cfg.lud_max_iters, cfg.lud_tol});
        } catch (const DisconnectedPairs&) {
          ++reverts;
          continue;
        }
        std::vector<Rotation> candidate = rotations;
        for (std::size_t a = 0; a < idx.size(); ++a) candidate[idx[a]] = solved.rotations[a];
        const double f_new = class_objective(candidate, idx, table);
        if (f_new > class_f[c]) {
          ++reverts;  // keep previous rotations for this class
        } else {
          for (std::size_t a = 0; a < idx.size(); ++a) rotations[idx[a]] = candidate[idx[a]];
          class_f[c] = f_new;
        }
      }
    }

    const WeightGraph w = build_weight_graph(rotations, table);
    Partition candidate_cut = partition;
    if (cfg.k >= 2) {
      if (cfg.solver == CutSolver::gw) {
        SeedStream s = cut_stream.substream(static_cast<std::uint64_t>(iter));
        candidate_cut = maxcut_gw(w, cfg.rounding_trials, s).cut;
      } else {
        SeedStream s = cut_stream.substream(static_cast<std::uint64_t>(iter));
        candidate_cut = maxkcut_local(w, cfg.k, cfg.local_starts, s);
      }
    }

    std::vector<double> class_f_new(cfg.k, 0.0);
    std::vector<std::vector<int>> members_new(cfg.k);
    for (int c = 0; c < cfg.k; ++c) {
      members_new[c] = candidate_cut.members(c);
      class_f_new[c] = class_objective(rotations, members_new[c], table);
    }
    const double f_before_cut = sum_class_f();
    double f_after_cut = 0.0;
    for (int c = 0; c < cfg.k; ++c) f_after_cut += class_f_new[c];
    if (f_after_cut > f_before_cut) {
      ++reverts;  // keep previous partition
    } else {
      partition = std::move(candidate_cut);
      class_f = std::move(class_f_new);
      members = std::move(members_new);
    }

    const double f_iter = sum_class_f();
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
    result.trace.push_back({PipelineState{rotations, partition, f_iter, iter}, reverts, ms});

    if (std::abs(f_current - f_iter) <= kStopTolerance) {
      result.converged = true;
      f_current = f_iter;
      break;
    }
    f_current = f_iter;
  }

  result.state = result.trace.back().state;
  return result;
}

PrecisionReport precision(const Partition& estimated, const Partition& truth) {
  if (estimated.size() != truth.size())
    throw std::invalid_argument("precision: partition sizes differ");
  if (estimated.k != truth.k)
    throw std::invalid_argument("precision: class counts differ");
  const int k = estimated.k;
  if (k > 8) throw std::invalid_argument("precision: exhaustive matching is capped at K = 8");

  PrecisionReport report;
  report.confusion.assign(k, std::vector<std::int64_t>(k, 0));
  for (int i = 0; i < estimated.size(); ++i)
    ++report.confusion[estimated.assign[i]][truth.assign[i]];

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  std::int64_t best_agree = -1;
  do {
    std::int64_t agree = 0;
    for (int c = 0; c < k; ++c) agree += report.confusion[c][perm[c]];
    if (agree > best_agree) {
      best_agree = agree;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  report.matched_truth = best_perm;
  report.per_class.resize(k);
  const std::vector<int> sizes = estimated.class_sizes();
  report.min_precision = 1.0;
  for (int c = 0; c < k; ++c) {
    if (sizes[c] == 0) {
      report.per_class[c] = 0.0;
      report.has_empty_class = true;
    } else {
      report.per_class[c] =
          static_cast<double>(report.confusion[c][best_perm[c]]) / static_cast<double>(sizes[c]);
    }
    report.min_precision = std::min(report.min_precision, report.per_class[c]);
  }
  return report;
}

std::string trace_to_json(const std::vector<TraceEntry>& trace, bool include_timings) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const TraceEntry& entry : trace) {
    nlohmann::ordered_json row;
    row["iter"] = entry.state.iter;
    row["f"] = entry.state.f;
    row["class_sizes"] = entry.state.partition.class_sizes();
    row["reverts"] = entry.reverts;
    row["wall_time_ms"] = include_timings ? entry.wall_time_ms : 0.0;
    out.push_back(std::move(row));
  }
  return out.dump();
}

}  // namespace heterocut
