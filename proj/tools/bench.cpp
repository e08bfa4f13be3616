// bench: seeded benchmark runs for the HJ-MAD optimizer and its baselines.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjmad/hjmad.hpp"

namespace {

using hjmad::ExperimentSpec;
using hjmad::UsageError;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid numeric value for '" + key + "': '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid integer value for '" + key + "': '" + value + "'");
  }
}

// Flat key = value file, '#' comments. Keys mirror the config field names.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hjmad::IoError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (eq == std::string::npos) {
      if (!trim(line).empty()) {
        throw UsageError("config '" + path + "' line " + std::to_string(lineno) +
                         ": expected key = value");
      }
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw UsageError("config '" + path + "' line " + std::to_string(lineno) + ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

// Applies key-value settings on top of the profile defaults. T_max implies
// t1 = T/10 and delta implies delta_ts unless those keys are set explicitly.
void apply_settings(const std::map<std::string, std::string>& kv, ExperimentSpec& spec) {
  auto& solver = spec.solver;
  if (auto it = kv.find("T_max"); it != kv.end()) {
    solver.params.T = parse_double("T_max", it->second);
    solver.t1 = solver.params.T / 10.0;
  }
  if (auto it = kv.find("delta"); it != kv.end()) {
    solver.sampler.delta = parse_double("delta", it->second);
    solver.params.delta_ts = solver.sampler.delta;
  }
  for (const auto& [key, value] : kv) {
    if (key == "T_max" || key == "delta") continue;
    if (key == "eta_minus") solver.params.eta_minus = parse_double(key, value);
    else if (key == "eta_plus") solver.params.eta_plus = parse_double(key, value);
    else if (key == "theta") solver.params.theta = parse_double(key, value);
    else if (key == "delta_ts") solver.params.delta_ts = parse_double(key, value);
    else if (key == "tau") solver.params.tau = parse_double(key, value);
    else if (key == "alpha") solver.alpha = parse_double(key, value);
    else if (key == "t1") solver.t1 = parse_double(key, value);
    else if (key == "ewma_beta") solver.ewma_beta = parse_double(key, value);
    else if (key == "max_iters") solver.max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "target_tolerance") solver.target_tolerance = parse_double(key, value);
    else if (key == "grad_tolerance") solver.grad_tolerance = parse_double(key, value);
    else if (key == "n_samples") solver.sampler.n_samples = static_cast<int>(parse_int(key, value));
    else if (key == "variance_mode") {
      const auto mode = hjmad::variance_mode_from_string(value);
      if (!mode) throw UsageError("variance_mode must be paper_literal or viscosity_consistent");
      solver.sampler.variance_mode = *mode;
    } else if (key == "step_size") spec.baseline.step_size = parse_double(key, value);
    else if (key == "fd_step") spec.baseline.fd_step = parse_double(key, value);
    else if (key == "budget") spec.budget = parse_int(key, value);
    else if (key == "include_trace_evals") {
      const bool on = value == "1" || value == "true";
      solver.count_trace_evals = on;
      spec.baseline.count_trace_evals = on;
    } else if (key == "start") {
      if (value == "random") {
        spec.start.reset();
      } else {
        hjmad::Vec x;
        for (const auto& c : split(value, ',')) x.push_back(parse_double("start", c));
        spec.start = std::move(x);
      }
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  spec.baseline.target_tolerance = solver.target_tolerance;
  spec.baseline.grad_tolerance = std::max(solver.grad_tolerance, 1e-8);
}

int cmd_list() {
  std::printf("%-11s %-11s %-22s %-14s\n", "id", "default dim", "domain", "optimum f*");
  for (const auto& id : hjmad::objective_ids()) {
    const auto obj = hjmad::make_objective(id);
    const auto& box = *obj.domain();
    const auto& opt = *obj.optimum();
    char domain[32];
    std::snprintf(domain, sizeof(domain), "[%g, %g]^n", box.lower[0], box.upper[0]);
    std::printf("%-11s %-11d %-22s %-14g\n", id.c_str(), obj.dim(), domain, opt.f);
  }
  return 0;
}

int cmd_run(const std::string& function, int dim, const std::string& method, int seeds,
            std::uint64_t seed0, const std::string& config_path, const std::string& out_dir,
            const std::map<std::string, std::string>& flag_overrides) {
  ExperimentSpec spec;
  spec.function_id = function;
  spec.dim = dim;
  spec.method = method;
  spec.n_seeds = seeds;
  spec.seed0 = seed0;
  spec.out_dir = out_dir;
  spec.budget = 1000000;

  // Profile defaults first, then config file, then flags.
  spec.solver = hjmad::paper_defaults(hjmad::make_objective(function, dim));
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) kv = read_config_file(config_path);
  for (const auto& [k, v] : flag_overrides) kv[k] = v;
  apply_settings(kv, spec);

  const auto result = hjmad::run_experiment(spec);
  const auto& row = result.summary;
  std::printf("%s/%s: success %d/%d", row.function_id.c_str(), row.method.c_str(),
              row.success_count, row.n_seeds);
  if (row.mean_evals_to_success) {
    std::printf(", mean evals to success %.1f", *row.mean_evals_to_success);
  } else {
    std::printf(", result N (no seed converged)");
  }
  std::printf(", mean final f %.6g", row.mean_final_f);
  if (row.mean_final_dist) std::printf(", mean dist to x* %.6g", *row.mean_final_dist);
  std::printf("\n  traces + summary.json written to %s\n", spec.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-order global optimization benchmarks (HJ-MAD, MAD, GD, PRS)"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered objective functions");

  auto* run = app.add_subcommand("run", "Run a seeded experiment");
  std::string function, method = "hj-mad", config_path, out_dir = "bench_out";
  int dim = 0, seeds = 1;
  std::uint64_t seed0 = 1;
  run->add_option("--function", function, "Objective id (see `bench list`)")->required();
  run->add_option("--dim", dim, "Dimension (0 = function default)");
  run->add_option("--method", method, "hj-mad | mad | gd | prs");
  run->add_option("--seeds", seeds, "Number of seeds");
  run->add_option("--seed0", seed0, "First seed; runs use seed0..seed0+seeds-1");
  run->add_option("--config", config_path, "Flat key = value config file");
  run->add_option("--out", out_dir, "Output directory");

  // Per-key overrides; flags win over the config file.
  const std::vector<std::string> keys = {
      "eta_minus", "eta_plus", "theta", "delta_ts", "tau", "T_max", "alpha", "t1",
      "ewma_beta", "max_iters", "target_tolerance", "grad_tolerance", "n_samples",
      "delta", "variance_mode", "step_size", "fd_step", "budget",
      "include_trace_evals", "start"};
  std::map<std::string, std::string> flag_overrides;
  for (const auto& key : keys) {
    run->add_option_function<std::string>(
        "--" + key, [&flag_overrides, key](const std::string& v) { flag_overrides[key] = v; },
        "Override config key " + key);
  }

  try {
    app.parse(argc, argv);
    if (list->parsed()) return cmd_list();
    return cmd_run(function, dim, method, seeds, seed0, config_path, out_dir, flag_overrides);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hjmad::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const hjmad::SolverFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const hjmad::EstimationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
}
