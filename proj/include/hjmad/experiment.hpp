#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hjmad/baselines.hpp"
#include "hjmad/objectives.hpp"
#include "hjmad/solver.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

/// Bad function/method/flag input (CLI exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failed file write/read (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  std::string function_id;
  int dim = 0;                    // 0 = function default
  std::string method = "hj-mad";  // hj-mad | mad | gd | prs
  std::optional<Vec> start;       // absent = uniform random in the domain, per seed
  int n_seeds = 1;
  std::uint64_t seed0 = 1;
  long long budget = 1000000;
  SolverConfig solver;
  BaselineConfig baseline;
  std::string out_dir;
};

struct SummaryRow {
  std::string function_id;
  std::string method;
  int success_count = 0;
  int n_seeds = 0;
  // Averaged over successful seeds only; absent when none converged ("N").
  std::optional<double> mean_evals_to_success;
  double mean_final_f = 0;
  std::optional<double> mean_final_dist;
  bool converged = false;
};

struct ExperimentResult {
  SummaryRow summary;
  std::vector<Trace> traces;
  std::vector<std::string> trace_paths;
  std::string summary_path;
};

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Writes one record per row as
///   k,t,f,gnorm,u_est,cum_evals,x0,...,x{n-1}
/// with 17 significant digits and LF line endings; %.17g round-trips doubles
/// exactly, so a parse-back reproduces the trace bit for bit.
inline void write_trace_csv(const Trace& trace, const std::string& path) {
  if (trace.records.empty()) {
    throw std::invalid_argument("write_trace_csv: trace has no records");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_trace_csv: cannot open '" + path + "' for writing");
  const int n = static_cast<int>(trace.records.front().x.size());
  out << "k,t,f,gnorm,u_est,cum_evals";
  for (int j = 0; j < n; ++j) out << ",x" << j;
  out << "\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << detail::format_g17(r.t) << ',' << detail::format_g17(r.f_x) << ','
        << detail::format_g17(r.g_norm) << ',' << detail::format_g17(r.u_est) << ','
        << r.cum_evals;
    for (int j = 0; j < n; ++j) out << ',' << detail::format_g17(r.x[j]);
    out << "\n";
  }
  if (!out) throw IoError("write_trace_csv: write to '" + path + "' failed");
}

inline std::vector<IterateRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_trace_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("read_trace_csv: empty file '" + path + "'");
  std::vector<IterateRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 7) throw IoError("read_trace_csv: malformed row in '" + path + "'");
    IterateRecord r;
    r.k = std::stoi(cells[0]);
    r.t = std::strtod(cells[1].c_str(), nullptr);
    r.f_x = std::strtod(cells[2].c_str(), nullptr);
    r.g_norm = std::strtod(cells[3].c_str(), nullptr);
    r.u_est = std::strtod(cells[4].c_str(), nullptr);
    r.cum_evals = std::stoll(cells[5]);
    for (std::size_t j = 6; j < cells.size(); ++j) {
      r.x.push_back(std::strtod(cells[j].c_str(), nullptr));
    }
    records.push_back(std::move(r));
  }
  return records;
}

/// Benchmark profile: sampler and schedule settings shared by all functions
/// (100 samples, delta 0.1, alpha 1, theta 0.9, eta 0.5/2, t1 = T/10,
/// tau 1e-4, target 5e-2) plus a per-function time ceiling T sized to the
/// scale each landscape needs for its coarse structure to show through.
inline SolverConfig paper_defaults(const Objective& obj) {
  SolverConfig cfg;
  cfg.sampler.n_samples = 100;
  cfg.sampler.delta = 0.1;
  cfg.sampler.variance_mode = VarianceMode::viscosity_consistent;
  cfg.alpha = 1.0;
  cfg.ewma_beta = 0.0;
  cfg.params.eta_minus = 0.5;
  cfg.params.eta_plus = 2.0;
  cfg.params.theta = 0.9;
  cfg.params.delta_ts = cfg.sampler.delta;
  cfg.params.tau = 1e-4;
  cfg.target_tolerance = 5e-2;
  cfg.grad_tolerance = 0.0;

  double T = 25.0;
  const std::string& id = obj.id();
  if (id == "griewank") T = 1e4;
  else if (id == "dropwave") T = 64.0;
  else if (id == "alpine1") T = 250.0;
  else if (id == "ackley") T = 100.0;
  else if (id == "levy") T = 250.0;
  else if (id == "rastrigin") T = 64.0;
  cfg.params.T = T;
  cfg.t1 = T / 10.0;
  return cfg;
}

namespace detail {

constexpr std::uint64_t kStartSeedSalt = 0x9E3779B97F4A7C15ull;

inline Vec resolve_start(const ExperimentSpec& spec, const Objective& obj, std::uint64_t seed) {
  if (spec.start) {
    if (static_cast<int>(spec.start->size()) != obj.dim()) {
      throw UsageError("start point dimension does not match --dim");
    }
    return *spec.start;
  }
  if (!obj.domain()) throw UsageError("random start requires an objective with a domain");
  Rng rng(seed ^ kStartSeedSalt);
  return rng.uniform_in(*obj.domain());
}

inline Trace run_one_seed(const ExperimentSpec& spec, std::uint64_t seed) {
  Objective obj = make_objective(spec.function_id, spec.dim);
  if (spec.method == "hj-mad") {
    SolverConfig cfg = spec.solver;
    cfg.seed = seed;
    cfg.max_iters = static_cast<int>(
        std::max<long long>(1, spec.budget / cfg.sampler.n_samples));
    return run_hj_mad(obj, resolve_start(spec, obj, seed), cfg);
  }
  if (spec.method == "mad") {
    SolverConfig cfg = spec.solver;
    cfg.seed = seed;
    const Vec x1 = resolve_start(spec, obj, seed);
    const GridSpec grid = make_prox_grid(obj, x1, cfg.params.T);
    return run_mad(obj, x1, cfg, grid);
  }
  BaselineConfig cfg = spec.baseline;
  cfg.seed = seed;
  cfg.budget = spec.budget;
  if (!cfg.target_tolerance) cfg.target_tolerance = spec.solver.target_tolerance;
  if (spec.method == "gd") {
    cfg.method = BaselineMethod::gd_fd;
    return run_gd_fd(obj, resolve_start(spec, obj, seed), cfg);
  }
  if (spec.method == "prs") {
    cfg.method = BaselineMethod::prs;
    return run_prs(obj, cfg);
  }
  throw UsageError("unknown method '" + spec.method + "'");
}

inline int thread_cap() {
  if (const char* env = std::getenv("BENCH_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

/// Runs n_seeds independent runs with seeds seed0..seed0+n-1 (parallel up to
/// BENCH_THREADS), writes one trace CSV per seed plus a summary JSON, and
/// returns the reduced summary. Validates all inputs before any file is
/// created.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.n_seeds < 1) throw UsageError("n_seeds must be >= 1");
  if (spec.method != "hj-mad" && spec.method != "mad" && spec.method != "gd" &&
      spec.method != "prs") {
    throw UsageError("unknown method '" + spec.method + "'");
  }
  // Throws for unknown ids/dims before the output directory is touched.
  Objective probe = make_objective(spec.function_id, spec.dim);
  if (spec.start && static_cast<int>(spec.start->size()) != probe.dim()) {
    throw UsageError("start point dimension does not match --dim");
  }
  if (spec.out_dir.empty()) throw UsageError("output directory is required");

  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + spec.out_dir + "'");

  ExperimentResult result;
  result.traces.resize(spec.n_seeds);
  std::vector<std::exception_ptr> errors(spec.n_seeds);

  const int cap = detail::thread_cap();
  for (int begin = 0; begin < spec.n_seeds; begin += cap) {
    const int end = std::min(spec.n_seeds, begin + cap);
    std::vector<std::thread> pool;
    for (int i = begin; i < end; ++i) {
      pool.emplace_back([&, i] {
        try {
          result.traces[i] = detail::run_one_seed(spec, spec.seed0 + i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (int i = 0; i < spec.n_seeds; ++i) {
    const std::uint64_t seed = spec.seed0 + i;
    std::string path = spec.out_dir + "/" + spec.function_id + "_" + spec.method + "_seed" +
                       std::to_string(seed) + ".csv";
    write_trace_csv(result.traces[i], path);
    result.trace_paths.push_back(std::move(path));
  }

  SummaryRow& row = result.summary;
  row.function_id = spec.function_id;
  row.method = spec.method;
  row.n_seeds = spec.n_seeds;
  double sum_f = 0.0, sum_dist = 0.0, sum_evals = 0.0;
  const auto& opt = probe.optimum();
  nlohmann::json per_seed = nlohmann::json::array();
  for (int i = 0; i < spec.n_seeds; ++i) {
    const Trace& tr = result.traces[i];
    const bool success = tr.stop_reason == StopReason::target_reached;
    const long long evals = tr.records.back().cum_evals;
    if (success) {
      ++row.success_count;
      sum_evals += static_cast<double>(evals);
    }
    sum_f += tr.best_f;
    double d = 0.0;
    if (opt) {
      d = dist(tr.best_x, opt->x);
      sum_dist += d;
    }
    per_seed.push_back({{"seed", spec.seed0 + i},
                        {"success", success},
                        {"stop_reason", to_string(tr.stop_reason)},
                        {"evals", evals},
                        {"best_f", tr.best_f},
                        {"dist_to_optimum", opt ? nlohmann::json(d) : nlohmann::json()}});
  }
  row.mean_final_f = sum_f / spec.n_seeds;
  if (opt) row.mean_final_dist = sum_dist / spec.n_seeds;
  if (row.success_count > 0) {
    row.mean_evals_to_success = sum_evals / row.success_count;
    row.converged = true;
  }

  nlohmann::json params;
  if (spec.method == "hj-mad" || spec.method == "mad") {
    params = {{"alpha", spec.solver.alpha},
              {"t1", spec.solver.t1},
              {"tau", spec.solver.params.tau},
              {"T_max", spec.solver.params.T},
              {"eta_minus", spec.solver.params.eta_minus},
              {"eta_plus", spec.solver.params.eta_plus},
              {"theta", spec.solver.params.theta},
              {"delta_ts", spec.solver.params.delta_ts},
              {"ewma_beta", spec.solver.ewma_beta},
              {"n_samples", spec.solver.sampler.n_samples},
              {"delta", spec.solver.sampler.delta},
              {"variance_mode", to_string(spec.solver.sampler.variance_mode)}};
  } else {
    params = {{"step_size", spec.baseline.step_size}, {"fd_step", spec.baseline.fd_step}};
  }
  params["target_tolerance"] = spec.solver.target_tolerance
                                   ? nlohmann::json(*spec.solver.target_tolerance)
                                   : nlohmann::json();
  nlohmann::json summary = {
      {"function", row.function_id},
      {"dim", probe.dim()},
      {"method", row.method},
      {"n_seeds", row.n_seeds},
      {"seed0", spec.seed0},
      {"budget", spec.budget},
      {"start", spec.start ? nlohmann::json(*spec.start) : nlohmann::json("random")},
      {"params", params},
      {"success_count", row.success_count},
      {"result", row.converged ? nlohmann::json(*row.mean_evals_to_success)
                               : nlohmann::json("N")},
      {"mean_evals_to_success", row.converged ? nlohmann::json(*row.mean_evals_to_success)
                                              : nlohmann::json()},
      {"mean_final_f", row.mean_final_f},
      {"mean_final_dist",
       row.mean_final_dist ? nlohmann::json(*row.mean_final_dist) : nlohmann::json()},
      {"per_seed", per_seed},
  };
  result.summary_path = spec.out_dir + "/summary.json";
  std::ofstream out(result.summary_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + result.summary_path + "'");
  out << summary.dump(2) << "\n";
  if (!out) throw IoError("write to '" + result.summary_path + "' failed");
  return result;
}

}  // namespace hjmad
