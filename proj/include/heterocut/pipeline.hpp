#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heterocut/graph.hpp"
#include "heterocut/sync.hpp"

namespace heterocut {

enum class CutSolver { gw, local };
enum class InitMode { all_in_one, random_balanced };

struct PipelineConfig {
  int k = 2;
  int max_iters = 8;
  CutSolver solver = CutSolver::local;
  int local_starts = 8;
  int rounding_trials = 100;
  double lud_tol = 1e-8;
  int lud_max_iters = 100;
  std::uint64_t seed = 0;
  InitMode init = InitMode::all_in_one;
};

struct PipelineState {
  std::vector<Rotation> rotations;
  Partition partition;
  double f = 0.0;
  int iter = 0;
};

struct TraceEntry {
  PipelineState state;
  int reverts = 0;  // rolled-back steps in this iteration (per-class + cut)
  double wall_time_ms = 0.0;
};

struct PipelineResult {
  PipelineState state;
  std::vector<TraceEntry> trace;  // entry 0 is the initial state
  bool converged = false;
};

/// Alternating minimization over rotations and partition:
///   per class, re-estimate rotations (LUD), rolling back any class whose
///   within-class objective got worse; rebuild the weight graph; re-partition
///   by max-K-cut, rolling back if the objective got worse; stop when the
///   objective is unchanged between iterations (1e-9) or at max_iters.
///
/// The objective trace is non-increasing by construction. Deterministic for a
/// fixed config, independent of worker-thread count.
///
/// `fixed_rotations`, when given, replaces the rotation-estimation step (used
/// to study the partition step under known rotations).
PipelineResult run_pipeline(const CommonLineTable& table, const PipelineConfig& cfg,
                            const std::vector<Rotation>* fixed_rotations = nullptr);

struct PrecisionReport {
  std::vector<double> per_class;            // precision of each estimated class
  double min_precision = 0.0;
  std::vector<std::vector<std::int64_t>> confusion;  // [estimated][true] counts
  std::vector<int> matched_truth;           // truth class matched to each estimated class
  bool has_empty_class = false;
};

/// Per-class precision under the best matching of estimated to true classes
/// (maximizing total agreement over label permutations). An empty estimated
/// class scores 0 and sets has_empty_class.
PrecisionReport precision(const Partition& estimated, const Partition& truth);

/// JSON lines for the trace: {iter, f, class_sizes, reverts, wall_time_ms}.
/// Wall time is zeroed unless include_timings is set, keeping the output
/// byte-reproducible.
std::string trace_to_json(const std::vector<TraceEntry>& trace, bool include_timings = false);

}  // namespace heterocut
