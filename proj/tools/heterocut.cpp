// Command-line driver: dataset simulation, pipeline runs, invariant checks,
// and the sampling-law report. All outputs are byte-reproducible for a fixed
// seed regardless of the worker-thread count.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "heterocut/errors.hpp"
#include "heterocut/graph.hpp"
#include "heterocut/kernels.hpp"
#include "heterocut/parallel.hpp"
#include "heterocut/pipeline.hpp"
#include "heterocut/sim.hpp"
#include "heterocut/solvers.hpp"
#include "heterocut/stats.hpp"
#include "heterocut/sync.hpp"

namespace {

using namespace heterocut;
using nlohmann::ordered_json;

PipelineConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  PipelineConfig cfg;
  cfg.k = j.value("k", 2);
  cfg.max_iters = j.value("max_iters", 8);
  const std::string solver = j.value("solver", std::string("local"));
  if (solver == "gw")
    cfg.solver = CutSolver::gw;
  else if (solver == "local")
    cfg.solver = CutSolver::local;
  else
    throw std::runtime_error("config: solver must be \"gw\" or \"local\"");
  cfg.local_starts = j.value("local_starts", 8);
  cfg.rounding_trials = j.value("rounding_trials", 100);
  cfg.lud_tol = j.value("lud_tol", 1e-8);
  cfg.lud_max_iters = j.value("lud_max_iters", 100);
  cfg.seed = j.value("seed", std::uint64_t{0});
  const std::string init = j.value("init", std::string("all_in_one"));
  if (init == "all_in_one")
    cfg.init = InitMode::all_in_one;
  else if (init == "random_balanced")
    cfg.init = InitMode::random_balanced;
  else
    throw std::runtime_error("config: init must be \"all_in_one\" or \"random_balanced\"");
  return cfg;
}

ordered_json config_to_json(const PipelineConfig& cfg) {
  ordered_json j;
  j["k"] = cfg.k;
  j["max_iters"] = cfg.max_iters;
  j["solver"] = cfg.solver == CutSolver::gw ? "gw" : "local";
  j["local_starts"] = cfg.local_starts;
  j["rounding_trials"] = cfg.rounding_trials;
  j["lud_tol"] = cfg.lud_tol;
  j["lud_max_iters"] = cfg.lud_max_iters;
  j["seed"] = cfg.seed;
  j["init"] = cfg.init == InitMode::all_in_one ? "all_in_one" : "random_balanced";
  return j;
}

int cmd_simulate(const std::string& spec_path, const std::string& out_path) {
  const SimSpec spec = sim_spec_from_json_file(spec_path);
  const Dataset data = simulate_dataset(spec);
  save_dataset(data, out_path);
  std::cout << "wrote " << out_path << " (" << data.size() << " images, "
            << data.table.valid_pair_count() << " valid pairs)\n";
  return 0;
}

int cmd_partition(const std::string& data_path, const std::string& config_path,
                  const std::string& report_path, const std::string& csv_path,
                  bool timings) {
  const Dataset data = load_dataset(data_path);
  const PipelineConfig cfg = config_from_json_file(config_path);
  const PipelineResult result = run_pipeline(data.table, cfg);

  const bool same_k = cfg.k == data.truth_partition.k;
  PrecisionReport report;
  if (same_k) report = precision(result.state.partition, data.truth_partition);
  const double pct = pct_correct_lines(data, kCorrectLineThreshold);

  if (!report_path.empty()) {
    ordered_json j;
    j["n"] = data.size();
    j["k"] = cfg.k;
    j["config"] = config_to_json(cfg);
    j["f_final"] = result.state.f;
    j["iterations"] = result.state.iter;
    j["converged"] = result.converged;
    j["trace"] = ordered_json::parse(trace_to_json(result.trace, timings));
    j["class_sizes"] = result.state.partition.class_sizes();
    j["pct_correct_lines"] = 100.0 * pct;
    if (same_k) {
      ordered_json p;
      p["per_class"] = report.per_class;
      p["min"] = report.min_precision;
      p["confusion"] = report.confusion;
      p["matched_truth_class"] = report.matched_truth;
      p["has_empty_class"] = report.has_empty_class;
      j["precision"] = p;
    }
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot open " + report_path);
    out << j.dump(2) << '\n';
  }

  if (!csv_path.empty()) {
    if (!same_k) throw std::runtime_error("csv output needs config k == dataset k");
    SweepRow row;
    row.spec = data.spec;
    row.report = report;
    row.estimated_class_sizes = result.state.partition.class_sizes();
    row.pct_correct = pct;
    for (const TraceEntry& entry : result.trace) row.f_trace.push_back(entry.state.f);
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path);
    const std::vector<SweepRow> rows{row};
    write_sweep_csv(rows, out);
  }

  std::cout << "F = " << result.state.f << " after " << result.state.iter << " iteration(s)";
  if (same_k) std::cout << ", min precision " << report.min_precision;
  std::cout << '\n';
  return 0;
}

struct CheckRunner {
  int failures = 0;

  void operator()(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
  }
};

int cmd_verify(std::uint64_t seed) {
  CheckRunner check;
  char detail[128];

  {  // common-line identity and equivariance
    SeedStream s(seed);
    bool identity_ok = true, equivariant_ok = true;
    for (int t = 0; t < 200; ++t) {
      const Rotation ri = sample_uniform_rotation(s);
      const Rotation rj = sample_uniform_rotation(s);
      const Rotation q = sample_uniform_rotation(s);
      const auto lines = try_common_line_pair(ri, rj);
      if (!lines) continue;
      identity_ok &= (ri.m * lift(lines->first) - rj.m * lift(lines->second)).norm() < 1e-10;
      Rotation qi, qj;
      qi.m = q.m * ri.m;
      qj.m = q.m * rj.m;
      const auto moved = try_common_line_pair(qi, qj);
      equivariant_ok &= moved && (moved->first.c - lines->first.c).norm() < 1e-10;
    }
    check("common-line identity R_i c_ij == R_j c_ji", identity_ok);
    check("common-line equivariance under global rotation", equivariant_ok);
  }

  {  // perturbation contract
    SeedStream s(seed + 1);
    bool ok = true;
    for (int t = 0; t < 1000; ++t) {
      const Rotation r = sample_uniform_rotation(s);
      const Rotation p = perturb_rotation(r, 0.15, s);
      ok &= is_rotation(p) && rotation_distance(r, p) <= 0.15 + 1e-12;
    }
    check("rotation perturbation stays within its bound", ok);
  }

  {  // kernel variants agree
    const auto& active = kernels::active_ops();
    const auto& scalar = kernels::scalar_ops();
    bool ok = true;
    SeedStream s(seed + 2);
    const int n = 1023;
    std::vector<double> ax(n), ay(n), az(n), bx(n), by(n), bz(n), da(n), db(n);
    for (int i = 0; i < n; ++i) {
      ax[i] = s.uniform(-1, 1);
      ay[i] = s.uniform(-1, 1);
      az[i] = s.uniform(-1, 1);
      bx[i] = s.uniform(-1, 1);
      by[i] = s.uniform(-1, 1);
      bz[i] = s.uniform(-1, 1);
    }
    active.pair_distance3(ax.data(), ay.data(), az.data(), bx.data(), by.data(), bz.data(),
                          da.data(), n);
    scalar.pair_distance3(ax.data(), ay.data(), az.data(), bx.data(), by.data(), bz.data(),
                          db.data(), n);
    for (int i = 0; i < n; ++i) ok &= da[i] == db[i];
    std::snprintf(detail, sizeof detail, "active=%s", active.name);
    check("kernel variants agree", ok, detail);
  }

  {  // cut identities
    SeedStream s(seed + 3);
    SimSpec spec;
    spec.class_sizes = {20, 20};
    spec.eps_line = 0.1;
    spec.p_correct = 0.7;
    spec.seed = s.next_u64();
    const Dataset data = simulate_dataset(spec);
    const WeightGraph w = build_weight_graph(data.truth_rotations, data.table);
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
      Partition p(2, data.size());
      for (auto& l : p.assign) l = static_cast<std::int32_t>(s.uniform_int(0, 1));
      ok &= std::abs(cut_weight(w, p) + within_class_weight(w, p) - total_weight(w)) < 1e-9;
      ok &= std::abs(objective_F(data.truth_rotations, p, data.table) -
                     (total_weight(w) - cut_weight(w, p))) < 1e-9;
    }
    check("cut weight + within-class weight == total weight", ok);
  }

  {  // solvers
    SeedStream s(seed + 4);
    bool bipartite_ok = true, ratio_ok = true, local_ok = true;
    for (int t = 0; t < 5; ++t) {
      const int n1 = s.uniform_int(3, 6), n2 = s.uniform_int(3, 6);
      WeightGraph g(n1 + n2);
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g.at(i, n1 + j) = g.at(n1 + j, i) = 1.0 - s.next_double();
      SeedStream solver_stream(s.next_u64());
      const SdpSolution sol = maxcut_gw(g, 100, solver_stream);
      bipartite_ok &= std::abs(sol.cut_value - total_weight(g)) < 1e-9;

      WeightGraph r(10);
      for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
          if (s.next_double() < 0.7) r.at(i, j) = r.at(j, i) = 1.0 - s.next_double();
      SeedStream gw_stream(s.next_u64());
      const double gw_cut = maxcut_gw(r, 100, gw_stream).cut_value;
      const double best = cut_weight(r, brute_force_maxkcut(r, 2));
      ratio_ok &= gw_cut >= 0.87 * best - 1e-9;
      SeedStream local_stream(s.next_u64());
      local_ok &= cut_weight(r, maxkcut_local(r, 2, 8, local_stream)) <= best + 1e-9;
    }
    check("gw is exact on bipartite graphs", bipartite_ok);
    check("gw cut >= 0.87 x brute-force optimum", ratio_ok);
    check("local search never beats the exhaustive optimum", local_ok);
  }

  {  // synchronization
    SeedStream s(seed + 5);
    std::vector<Rotation> truth;
    for (int i = 0; i < 15; ++i) truth.push_back(sample_uniform_rotation(s));
    const SyncResult solved = lud_rotations(exact_common_lines(truth));
    const auto [aligned, err] = align_rotations(solved.rotations, truth);
    std::snprintf(detail, sizeof detail, "residual=%.2e mean_err=%.2e", solved.residual, err);
    check("lud recovers rotations from exact lines", solved.residual < 1e-6 && err < 1e-3, detail);
  }

  {  // pipeline determinism across thread counts
    SimSpec spec;
    spec.class_sizes = {15, 15};
    spec.eps_line = 0.05;
    spec.p_correct = 0.9;
    spec.seed = seed + 6;
    const Dataset data = simulate_dataset(spec);
    PipelineConfig cfg;
    cfg.k = 2;
    cfg.seed = seed;
    const int saved = max_threads();
    set_max_threads(1);
    const PipelineResult a = run_pipeline(data.table, cfg);
    set_max_threads(2);
    const PipelineResult b = run_pipeline(data.table, cfg);
    set_max_threads(saved);
    bool ok = a.trace.size() == b.trace.size();
    for (std::size_t t = 0; ok && t < a.trace.size(); ++t) {
      ok &= a.trace[t].state.f == b.trace[t].state.f;
      ok &= a.trace[t].state.partition.assign == b.trace[t].state.partition.assign;
    }
    bool monotone = true;
    for (std::size_t t = 1; t < a.trace.size(); ++t)
      monotone &= a.trace[t].state.f <= a.trace[t - 1].state.f;
    check("pipeline trace is identical for 1 and 2 worker threads", ok);
    check("pipeline objective is non-increasing", monotone);
  }

  {  // sampling laws
    SeedStream s(seed + 7);
    const EmpiricalDistribution dist = sphere_pair_distance_samples(1000000, s);
    std::snprintf(detail, sizeof detail, "mean=%.5f", dist.mean());
    check("sphere-pair distance mean is 4/3 within 0.01",
          std::abs(dist.mean() - 4.0 / 3.0) < 0.01, detail);

    SeedStream s2(seed + 8);
    const std::vector<double> mus(10000, 0.0), sigmas(10000, 1.0);
    const double rate = max_gaussian_bound_check(mus, sigmas, 1000, s2);
    std::snprintf(detail, sizeof detail, "rate=%.4f", rate);
    check("gaussian max bound exceedance <= 1%", rate <= 0.01, detail);
  }

  std::cout << (check.failures == 0 ? "all checks passed\n" : "some checks FAILED\n");
  return check.failures;
}

int cmd_stats(const std::string& out_path, std::uint64_t seed) {
  ordered_json j;

  {
    SeedStream s(seed);
    const EmpiricalDistribution dist = sphere_pair_distance_samples(1000000, s);
    ordered_json sphere;
    sphere["samples"] = 1000000;
    sphere["mean"] = dist.mean();
    sphere["abs_mean_error_vs_4_3"] = std::abs(dist.mean() - 4.0 / 3.0);
    sphere["ks_vs_r2_over_4"] =
        ks_statistic(dist.samples, [](double r) { return r * r / 4.0; });
    j["sphere_pair_distance"] = sphere;
  }

  {
    ordered_json gauss;
    SeedStream s(seed + 1);
    const std::vector<double> mus(10000, 0.0), sigmas(10000, 1.0);
    gauss["n"] = 10000;
    gauss["trials"] = 1000;
    gauss["exceedance_rate"] = max_gaussian_bound_check(mus, sigmas, 1000, s);
    ordered_json trend = ordered_json::array();
    for (const int n : {100, 1000, 10000}) {
      const std::vector<double> m(n, 0.0), sg(n, 1.0);
      SeedStream sn(seed + 2 + static_cast<std::uint64_t>(n));
      ordered_json row;
      row["n"] = n;
      row["rate"] = max_gaussian_bound_check(m, sg, 1000, sn);
      trend.push_back(row);
    }
    gauss["trend"] = trend;
    j["max_gaussian_bound"] = gauss;
  }

  {
    SimSpec spec;
    spec.class_sizes = {350, 350};
    spec.eps_line = 0.0;
    spec.p_correct = 1.0;
    spec.seed = seed + 3;
    const Dataset data = simulate_dataset(spec);
    const WeightGraph w = build_weight_graph(data.truth_rotations, data.table);
    std::vector<double> cross;
    cross.reserve(100000);
    for (int i = 0; i < data.size() && cross.size() < 100000; ++i)
      for (int jj = i + 1; jj < data.size() && cross.size() < 100000; ++jj)
        if (data.truth_partition.assign[i] != data.truth_partition.assign[jj])
          cross.push_back(w.at(i, jj));
    SeedStream s(seed + 4);
    const EmpiricalDistribution sphere = sphere_pair_distance_samples(100000, s);
    ordered_json consistency;
    consistency["cross_class_samples"] = cross.size();
    consistency["two_sample_ks_vs_sphere_law"] = two_sample_ks(cross, sphere.samples);
    j["cross_class_weight_law"] = consistency;
  }

  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << text;
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heterogeneous-class partitioning from pairwise common lines"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread budget (default: hardware)");

  std::string spec_path, data_path, config_path, report_path, csv_path, out_path;
  std::uint64_t seed = 0;
  bool timings = false;

  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  simulate->add_option("--spec", spec_path, "SimSpec JSON")->required();
  simulate->add_option("--out", data_path, "output dataset file")->required();

  CLI::App* partition = app.add_subcommand("partition", "run the alternating pipeline");
  partition->add_option("--data", data_path, "dataset file")->required();
  partition->add_option("--config", config_path, "PipelineConfig JSON")->required();
  partition->add_option("--report", report_path, "JSON report path");
  partition->add_option("--csv", csv_path, "CSV table path");
  partition->add_flag("--timings", timings, "include wall-clock times in the report");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--seed", seed, "seed for the randomized checks");

  CLI::App* stats = app.add_subcommand("stats", "sampling-law report");
  stats->add_option("--out", out_path, "JSON output path (default: stdout)");
  stats->add_option("--seed", seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) heterocut::set_max_threads(threads);

  try {
    if (simulate->parsed()) return cmd_simulate(spec_path, data_path);
    if (partition->parsed())
      return cmd_partition(data_path, config_path, report_path, csv_path, timings);
    if (verify->parsed()) return cmd_verify(seed);
    if (stats->parsed()) return cmd_stats(out_path, seed);
  } catch (const std::exception& err) {
    std::cerr << "heterocut: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
