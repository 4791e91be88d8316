#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heterocut/geometry.hpp"
#include "heterocut/pipeline.hpp"

namespace heterocut {

/// Synthetic-dataset parameters. Noise is modeled at the common-line level:
/// an in-class pair gets the geometric common lines jittered in-plane by
/// angles uniform in [-eps_line, eps_line] with probability p_correct, and
/// two independent uniform directions otherwise; cross-class pairs always get
/// independent uniform directions.
struct SimSpec {
  std::vector<int> class_sizes;
  double eps_line = 0.0;
  double p_correct = 1.0;
  std::uint64_t seed = 0;
};

struct Dataset {
  CommonLineTable table;
  std::vector<Rotation> truth_rotations;
  Partition truth_partition;
  std::vector<std::uint8_t> correct_flag;  // per ordered pair slot (i*n+j), symmetric
  SimSpec spec;

  int size() const { return table.size(); }
  bool pair_correct(int i, int j) const {
    return correct_flag[static_cast<std::size_t>(i) * table.size() + j] != 0;
  }
};

/// Haar rotations per image, lines per the noise model. Every pair draws from
/// its own counter-based stream keyed by (seed, i, j), so generation can be
/// parallelized over rows with results independent of scheduling.
Dataset simulate_dataset(const SimSpec& spec);

/// Fraction of non-degenerate pairs whose detected lines both lie within
/// `threshold` (radians) of the geometric common lines of the true rotations.
double pct_correct_lines(const Dataset& data, double threshold);

/// 10 degrees, the reporting criterion for a "correctly detected" line.
inline constexpr double kCorrectLineThreshold = 0.17453292519943295;

struct SweepRow {
  SimSpec spec;
  PrecisionReport report;
  std::vector<int> estimated_class_sizes;
  double pct_correct = 0.0;
  std::vector<double> f_trace;
};

/// One pipeline run per spec; the pipeline seed is derived from both the
/// config seed and the spec seed.
std::vector<SweepRow> run_noise_sweep(std::span<const SimSpec> specs, const PipelineConfig& cfg);

/// CSV rows per estimated class:
/// class_id,correct_in_class_1,correct_in_class_2,class_size,precision,pct_correct_lines
/// `precision` is the run's minimum per-class precision and pct_correct_lines
/// is a percentage; both repeat on every row of a run.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

// Dataset file round-trip (little-endian binary).
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

// SimSpec JSON: {"class_sizes":[...],"eps_line":x,"p_correct":x,"seed":n}
SimSpec sim_spec_from_json_file(const std::string& path);
std::string sim_spec_to_json(const SimSpec& spec);

}  // namespace heterocut
