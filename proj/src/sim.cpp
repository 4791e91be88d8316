#include "heterocut/sim.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "heterocut/parallel.hpp"

#include <nlohmann/json.hpp>

namespace heterocut {

namespace {

constexpr std::uint64_t kRotationTag = 0x726F7461;  // "rota"
constexpr std::uint64_t kPairTag = 0x70616972;      // "pair"
constexpr char kDatasetMagic[8] = {'H', 'T', 'C', 'D', 'A', 'T', 'A', '1'};

void validate(const SimSpec& spec) {
  if (spec.class_sizes.empty()) throw std::invalid_argument("sim: no classes");
  for (const int s : spec.class_sizes)
    if (s < 0) throw std::invalid_argument("sim: negative class size");
  if (spec.p_correct < 0.0 || spec.p_correct > 1.0)
    throw std::invalid_argument("sim: p_correct outside [0,1]");
  if (spec.eps_line < 0.0) throw std::invalid_argument("sim: negative eps_line");
}

CommonLine uniform_line(CounterRng& rng) {
  const double phi = rng.uniform(0.0, 2.0 * M_PI);
  return CommonLine{Eigen::Vector2d(std::cos(phi), std::sin(phi))};
}

CommonLine rotate_in_plane(const CommonLine& c, double angle) {
  const double ca = std::cos(angle), sa = std::sin(angle);
  return CommonLine{Eigen::Vector2d(ca * c.c.x() - sa * c.c.y(), sa * c.c.x() + ca * c.c.y())};
}

}  // namespace

Dataset simulate_dataset(const SimSpec& spec) {
  validate(spec);
  const int k = static_cast<int>(spec.class_sizes.size());
  const int n = std::accumulate(spec.class_sizes.begin(), spec.class_sizes.end(), 0);

  Dataset data;
  data.spec = spec;
  data.table = CommonLineTable(n);
  data.truth_partition = Partition(k, n);
  data.correct_flag.assign(static_cast<std::size_t>(n) * n, 0);

  {
    int next = 0;
    for (int c = 0; c < k; ++c)
      for (int s = 0; s < spec.class_sizes[c]; ++s) data.truth_partition.assign[next++] = c;
  }

  data.truth_rotations.resize(n);
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      SeedStream s(derive_seed(spec.seed, kRotationTag, static_cast<std::uint64_t>(i)));
      data.truth_rotations[i] = sample_uniform_rotation(s);
    }
  });

  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      for (std::int64_t j = i + 1; j < n; ++j) {
        CounterRng rng(derive_seed(spec.seed, kPairTag,
                                   static_cast<std::uint64_t>(i) * n + static_cast<std::uint64_t>(j)));
        const bool same_class =
            data.truth_partition.assign[i] == data.truth_partition.assign[j];
        const bool correct = same_class && rng.next_double() < spec.p_correct;
        if (correct) {
          const auto lines = try_common_line_pair(data.truth_rotations[i], data.truth_rotations[j]);
          if (!lines) {
            data.table.set_invalid(static_cast<int>(i), static_cast<int>(j));
            continue;
          }
          const double a1 = rng.uniform(-spec.eps_line, spec.eps_line);
          const double a2 = rng.uniform(-spec.eps_line, spec.eps_line);
          const CommonLine cij = rotate_in_plane(lines->first, a1);
          const CommonLine cji = rotate_in_plane(lines->second, a2);
          // 1e-7 absorbs the acos conditioning error near zero angle.
          if (angular_distance(cij, lines->first) > spec.eps_line + 1e-7 ||
              angular_distance(cji, lines->second) > spec.eps_line + 1e-7)
            throw std::logic_error("sim: jittered line left the eps_line ball");
          data.table.set_pair(static_cast<int>(i), static_cast<int>(j), cij, cji);
          data.correct_flag[i * n + j] = 1;
          data.correct_flag[j * n + i] = 1;
        } else {
          CommonLine cij = uniform_line(rng);
          CommonLine cji = uniform_line(rng);
          data.table.set_pair(static_cast<int>(i), static_cast<int>(j), cij, cji);
        }
      }
    }
  });
  return data;
}

double pct_correct_lines(const Dataset& data, double threshold) {
  const int n = data.size();
  std::int64_t total = 0, correct = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!data.table.valid(i, j)) continue;
      const auto truth = try_common_line_pair(data.truth_rotations[i], data.truth_rotations[j]);
      if (!truth) continue;
      ++total;
      const double d1 = angular_distance(data.table.line(i, j), truth->first);
      const double d2 = angular_distance(data.table.line(j, i), truth->second);
      if (std::max(d1, d2) <= threshold) ++correct;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<SweepRow> run_noise_sweep(std::span<const SimSpec> specs, const PipelineConfig& cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(specs.size());
  for (const SimSpec& spec : specs) {
    const Dataset data = simulate_dataset(spec);
    PipelineConfig run_cfg = cfg;
    run_cfg.k = static_cast<int>(spec.class_sizes.size());
    run_cfg.seed = derive_seed(cfg.seed, spec.seed);
    const PipelineResult result = run_pipeline(data.table, run_cfg);

    SweepRow row;
    row.spec = spec;
    row.report = precision(result.state.partition, data.truth_partition);
    row.estimated_class_sizes = result.state.partition.class_sizes();
    row.pct_correct = pct_correct_lines(data, kCorrectLineThreshold);
    for (const TraceEntry& entry : result.trace) row.f_trace.push_back(entry.state.f);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "class_id,correct_in_class_1,correct_in_class_2,class_size,precision,pct_correct_lines\n";
  char buf[64];
  for (const SweepRow& row : rows) {
    const int k = static_cast<int>(row.estimated_class_sizes.size());
    for (int c = 0; c < k; ++c) {
      const auto& confusion = row.report.confusion[c];
      const std::int64_t in1 = confusion.size() > 0 ? confusion[0] : 0;
      const std::int64_t in2 = confusion.size() > 1 ? confusion[1] : 0;
      std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%d,%.6f,%.4f", c + 1,
                    static_cast<long long>(in1), static_cast<long long>(in2),
                    row.estimated_class_sizes[c], row.report.min_precision,
                    100.0 * row.pct_correct);
      out << buf << '\n';
    }
  }
}

namespace {

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_raw(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof value);
}

}  // namespace

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write(kDatasetMagic, sizeof kDatasetMagic);
  const std::uint64_t n = static_cast<std::uint64_t>(data.size());
  const std::uint64_t k = static_cast<std::uint64_t>(data.truth_partition.k);
  write_raw(out, n);
  write_raw(out, k);
  write_raw(out, data.spec.eps_line);
  write_raw(out, data.spec.p_correct);
  write_raw(out, data.spec.seed);
  const std::uint64_t num_sizes = data.spec.class_sizes.size();
  write_raw(out, num_sizes);
  for (const int s : data.spec.class_sizes) write_raw(out, static_cast<std::int64_t>(s));

  for (const Rotation& r : data.truth_rotations)
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) write_raw(out, r.m(row, col));
  for (const std::int32_t label : data.truth_partition.assign) write_raw(out, label);

  const int nn = static_cast<int>(n);
  for (int i = 0; i < nn; ++i) {
    for (int j = i + 1; j < nn; ++j) {
      const std::uint8_t valid = data.table.valid(i, j) ? 1 : 0;
      const std::uint8_t correct = data.pair_correct(i, j) ? 1 : 0;
      write_raw(out, valid);
      write_raw(out, correct);
      if (valid) {
        const CommonLine cij = data.table.line(i, j);
        const CommonLine cji = data.table.line(j, i);
        write_raw(out, cij.c.x());
        write_raw(out, cij.c.y());
        write_raw(out, cji.c.x());
        write_raw(out, cji.c.y());
      }
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kDatasetMagic, sizeof magic) != 0)
    throw std::runtime_error("not a heterocut dataset: " + path);

  std::uint64_t n = 0, k = 0, num_sizes = 0;
  Dataset data;
  read_raw(in, n);
  read_raw(in, k);
  read_raw(in, data.spec.eps_line);
  read_raw(in, data.spec.p_correct);
  read_raw(in, data.spec.seed);
  read_raw(in, num_sizes);
  data.spec.class_sizes.resize(num_sizes);
  for (std::uint64_t s = 0; s < num_sizes; ++s) {
    std::int64_t size = 0;
    read_raw(in, size);
    data.spec.class_sizes[s] = static_cast<int>(size);
  }

  const int nn = static_cast<int>(n);
  data.table = CommonLineTable(nn);
  data.truth_rotations.resize(nn);
  data.truth_partition = Partition(static_cast<int>(k), nn);
  data.correct_flag.assign(static_cast<std::size_t>(nn) * nn, 0);

  for (Rotation& r : data.truth_rotations)
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) read_raw(in, r.m(row, col));
  for (std::int32_t& label : data.truth_partition.assign) read_raw(in, label);

  for (int i = 0; i < nn; ++i) {
    for (int j = i + 1; j < nn; ++j) {
      std::uint8_t valid = 0, correct = 0;
      read_raw(in, valid);
      read_raw(in, correct);
      if (valid) {
        double x1, y1, x2, y2;
        read_raw(in, x1);
        read_raw(in, y1);
        read_raw(in, x2);
        read_raw(in, y2);
        data.table.set_pair(i, j, CommonLine{Eigen::Vector2d(x1, y1)},
                            CommonLine{Eigen::Vector2d(x2, y2)});
      } else {
        data.table.set_invalid(i, j);
      }
      if (correct) {
        data.correct_flag[static_cast<std::size_t>(i) * nn + j] = 1;
        data.correct_flag[static_cast<std::size_t>(j) * nn + i] = 1;
      }
    }
  }
  if (!in) throw std::runtime_error("truncated dataset: " + path);
  return data;
}

SimSpec sim_spec_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  SimSpec spec;
  spec.class_sizes = j.at("class_sizes").get<std::vector<int>>();
  spec.eps_line = j.value("eps_line", 0.0);
  spec.p_correct = j.value("p_correct", 1.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  validate(spec);
  return spec;
}

std::string sim_spec_to_json(const SimSpec& spec) {
  nlohmann::ordered_json j;
  j["class_sizes"] = spec.class_sizes;
  j["eps_line"] = spec.eps_line;
  j["p_correct"] = spec.p_correct;
  j["seed"] = spec.seed;
  return j.dump();
}

}  // namespace heterocut
