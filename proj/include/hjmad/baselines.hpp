#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "hjmad/objectives.hpp"
#include "hjmad/rng.hpp"
#include "hjmad/solver.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

enum class BaselineMethod { gd_fd, prs };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::gd_fd;
  double step_size = 0.1;  // gd
  double fd_step = 1e-6;   // gd central-difference step
  long long budget = 100000;
  std::uint64_t seed = 0;
  std::optional<Box> domain;  // prs sampling box; defaults to the objective's
  std::optional<double> target_tolerance = 5e-2;
  double grad_tolerance = 1e-8;  // gd stop
  bool count_trace_evals = false;

  void validate() const {
    if (budget < 1) throw std::invalid_argument("BaselineConfig: budget must be >= 1");
    if (!(fd_step > 0.0)) throw std::invalid_argument("BaselineConfig: fd_step must be > 0");
    if (!(step_size > 0.0)) throw std::invalid_argument("BaselineConfig: step_size must be > 0");
  }
};

/// Gradient descent with central finite-difference gradients (2n counted
/// evaluations per step). Stops at budget, |g| <= grad_tolerance, or the
/// benchmark target. Baseline traces reuse IterateRecord with t = 0 and
/// u_est mirroring f_x.
inline Trace run_gd_fd(const Objective& obj, const Vec& x1, const BaselineConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(x1.size()) != obj.dim()) {
    throw std::invalid_argument("run_gd_fd: start point dimension mismatch");
  }
  const int n = obj.dim();
  const long long base_evals = obj.evals();
  const bool benchmark_mode = cfg.target_tolerance.has_value() && obj.optimum().has_value();
  const double target = benchmark_mode ? obj.optimum()->f + *cfg.target_tolerance : 0.0;

  Trace trace;
  Vec x = x1;
  Vec g(n), xp, xm;
  for (int k = 1;; ++k) {
    if (obj.evals() - base_evals + 2 * n > cfg.budget) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }
    xp = x;
    xm = x;
    for (int j = 0; j < n; ++j) {
      xp[j] = x[j] + cfg.fd_step;
      xm[j] = x[j] - cfg.fd_step;
      const double fp = obj.eval(xp);
      const double fm = obj.eval(xm);
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw SolverFailure("run_gd_fd: objective returned a non-finite value",
                            std::move(trace));
      }
      g[j] = (fp - fm) / (2.0 * cfg.fd_step);
      xp[j] = x[j];
      xm[j] = x[j];
    }
    const double gn = norm(g);
    const double f_x = cfg.count_trace_evals ? obj.eval(x) : obj.eval_uncounted(x);
    trace.records.push_back(IterateRecord{k, x, f_x, 0.0, gn, f_x, obj.evals() - base_evals});
    if (f_x < trace.best_f) {
      trace.best_f = f_x;
      trace.best_x = x;
    }
    if (benchmark_mode && f_x <= target) {
      trace.stop_reason = StopReason::target_reached;
      return trace;
    }
    if (gn <= cfg.grad_tolerance) {
      trace.stop_reason = StopReason::grad_small_at_T;
      return trace;
    }
    for (int j = 0; j < n; ++j) x[j] -= cfg.step_size * g[j];
    if (!all_finite(x)) {
      throw SolverFailure("run_gd_fd: iterate became non-finite", std::move(trace));
    }
  }
  return trace;
}

/// Pure Random Search: i.i.d. uniform samples over the domain with incumbent
/// tracking. One record per improvement (so the incumbent sequence in the
/// trace is strictly decreasing); k is the sample index.
inline Trace run_prs(const Objective& obj, const BaselineConfig& cfg) {
  cfg.validate();
  Box box = cfg.domain ? *cfg.domain : (obj.domain() ? *obj.domain() : Box{});
  if (box.lower.empty()) {
    throw std::invalid_argument("run_prs: no sampling domain available");
  }
  box.validate();
  if (box.dim() != obj.dim()) throw std::invalid_argument("run_prs: domain dimension mismatch");

  const long long base_evals = obj.evals();
  const bool benchmark_mode = cfg.target_tolerance.has_value() && obj.optimum().has_value();
  const double target = benchmark_mode ? obj.optimum()->f + *cfg.target_tolerance : 0.0;

  Trace trace;
  Rng rng(cfg.seed);
  for (long long k = 1; k <= cfg.budget; ++k) {
    const Vec x = rng.uniform_in(box);
    const double fx = obj.eval(x);
    if (fx < trace.best_f) {
      trace.best_f = fx;
      trace.best_x = x;
      trace.records.push_back(IterateRecord{static_cast<int>(k), x, fx, 0.0, 0.0, fx,
                                            obj.evals() - base_evals});
      if (benchmark_mode && fx <= target) {
        trace.stop_reason = StopReason::target_reached;
        return trace;
      }
    }
  }
  trace.stop_reason = StopReason::max_iters;
  return trace;
}

}  // namespace hjmad
