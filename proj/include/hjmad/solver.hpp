#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjmad/envelope.hpp"
#include "hjmad/grid_oracle.hpp"
#include "hjmad/objectives.hpp"
#include "hjmad/rng.hpp"
#include "hjmad/schedule.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

enum class StopReason { target_reached, grad_small_at_T, max_iters };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::target_reached: return "target_reached";
    case StopReason::grad_small_at_T: return "grad_small_at_T";
    default: return "max_iters";
  }
}

struct IterateRecord {
  int k = 0;
  Vec x;
  double f_x = 0;
  double t = 0;
  double g_norm = 0;
  double u_est = 0;  // envelope estimate; exact (grid) for MAD
  long long cum_evals = 0;
};

struct Trace {
  std::vector<IterateRecord> records;
  StopReason stop_reason = StopReason::max_iters;
  Vec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<std::string> warnings;
};

/// Thrown when a run cannot continue; carries the partial trace.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(std::string msg, Trace partial)
      : std::runtime_error(std::move(msg)), partial_(std::move(partial)) {}

  const Trace& partial_trace() const { return partial_; }

 private:
  Trace partial_;
};

struct SolverConfig {
  double alpha = 1.0;
  double t1 = 0.1;
  TimeStepParams params;
  SamplerConfig sampler;  // used by run_hj_mad only
  double ewma_beta = 0.0;
  int max_iters = 10000;
  std::optional<double> target_tolerance = 5e-2;  // benchmark-mode stop
  double grad_tolerance = 0.0;
  std::uint64_t seed = 0;
  bool strict_alpha = false;       // error instead of warning on the alpha range check
  bool count_trace_evals = false;  // bill per-iteration f(x^k) recording to cum_evals

  bool alpha_in_range() const {
    const double r = std::sqrt(params.eta_minus);
    return alpha > 1.0 - r && alpha < 1.0 + r;
  }

  void validate() const {
    params.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("SolverConfig: alpha must be > 0");
    if (strict_alpha && !alpha_in_range()) {
      throw std::invalid_argument(
          "SolverConfig: alpha outside (1 - sqrt(eta_minus), 1 + sqrt(eta_minus))");
    }
    if (!(t1 >= params.tau && t1 <= params.T)) {
      throw std::invalid_argument("SolverConfig: need tau <= t1 <= T");
    }
    if (!(ewma_beta >= 0.0 && ewma_beta < 1.0)) {
      throw std::invalid_argument("SolverConfig: ewma_beta must be in [0, 1)");
    }
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (target_tolerance && !(*target_tolerance >= 0.0)) {
      throw std::invalid_argument("SolverConfig: target_tolerance must be >= 0");
    }
    if (!(grad_tolerance >= 0.0)) {
      throw std::invalid_argument("SolverConfig: grad_tolerance must be >= 0");
    }
  }
};

struct AssumptionCheck {
  bool ok = false;
  std::string detail;
};

struct AssumptionReport {
  AssumptionCheck alpha_range;  // alpha in (1 - sqrt(eta_minus), 1 + sqrt(eta_minus))
  AssumptionCheck time_window;  // tau <= t1 <= T
  AssumptionCheck t1_bound;     // t1 >= |x* - x1|^2 / (2 gamma)

  bool all_ok() const { return alpha_range.ok && time_window.ok && t1_bound.ok; }
};

/// Parameter checks from the convergence theory. Informational: the solver
/// may still run with failing checks.
inline AssumptionReport check_assumptions(const Objective& obj, const Vec& x1,
                                          const SolverConfig& cfg, const GammaSpec& gamma) {
  gamma.validate();
  if (!obj.optimum()) {
    throw std::invalid_argument("check_assumptions: objective has no known optimum");
  }
  AssumptionReport rep;
  const double r = std::sqrt(cfg.params.eta_minus);
  rep.alpha_range.ok = cfg.alpha > 1.0 - r && cfg.alpha < 1.0 + r;
  rep.alpha_range.detail = "alpha=" + std::to_string(cfg.alpha) + " vs (" +
                           std::to_string(1.0 - r) + ", " + std::to_string(1.0 + r) + ")";
  rep.time_window.ok = cfg.params.tau <= cfg.t1 && cfg.t1 <= cfg.params.T;
  rep.time_window.detail = "tau=" + std::to_string(cfg.params.tau) +
                           " t1=" + std::to_string(cfg.t1) + " T=" + std::to_string(cfg.params.T);
  const double bound = squared_dist(obj.optimum()->x, x1) / (2.0 * gamma.gamma);
  rep.t1_bound.ok = cfg.t1 >= bound;
  rep.t1_bound.detail = "t1=" + std::to_string(cfg.t1) +
                        " required >= " + std::to_string(bound);
  return rep;
}

namespace detail {

struct GradResult {
  Vec g;
  double u_est = 0;
};

/// Shared iteration loop. GradFn: (x, t, k) -> GradResult. Stops at the first
/// of: benchmark target reached, gradient below tolerance at t = T for five
/// consecutive iterations, or max_iters. base_evals is the counter snapshot
/// from before any run setup cost (e.g. MAD's grid evaluation), so recorded
/// cum_evals equal the counter delta across the whole run.
template <typename GradFn>
Trace run_loop(const Objective& obj, const Vec& x1, const SolverConfig& cfg,
               long long base_evals, GradFn&& grad_fn) {
  cfg.validate();
  if (static_cast<int>(x1.size()) != obj.dim()) {
    throw std::invalid_argument("solver: start point dimension mismatch");
  }
  if (!all_finite(x1)) throw std::invalid_argument("solver: start point must be finite");

  Trace trace;
  if (!cfg.alpha_in_range()) {
    trace.warnings.push_back(
        "alpha outside (1 - sqrt(eta_minus), 1 + sqrt(eta_minus)); descent is not guaranteed");
  }
  const bool benchmark_mode = cfg.target_tolerance.has_value() && obj.optimum().has_value();
  const double target =
      benchmark_mode ? obj.optimum()->f + *cfg.target_tolerance : 0.0;

  Vec x = x1;
  double t = cfg.t1;
  std::optional<Vec> g_avg;
  double g_prev_norm = 0.0;
  int small_grad_streak = 0;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    GradResult gr;
    try {
      gr = grad_fn(x, t, k);
    } catch (const EstimationError& e) {
      throw SolverFailure(std::string("gradient estimation failed: ") + e.what(),
                          std::move(trace));
    }
    if (cfg.ewma_beta > 0.0) {
      gr.g = ewma_update(g_avg, gr.g, cfg.ewma_beta);
      g_avg = gr.g;
    }
    const double gn = norm(gr.g);

    const double f_x = cfg.count_trace_evals ? obj.eval(x) : obj.eval_uncounted(x);
    trace.records.push_back(
        IterateRecord{k, x, f_x, t, gn, gr.u_est, obj.evals() - base_evals});
    if (f_x < trace.best_f) {
      trace.best_f = f_x;
      trace.best_x = x;
    }

    if (benchmark_mode && f_x <= target) {
      trace.stop_reason = StopReason::target_reached;
      return trace;
    }
    if (gn <= cfg.grad_tolerance && t == cfg.params.T) {
      if (++small_grad_streak >= 5) {
        trace.stop_reason = StopReason::grad_small_at_T;
        return trace;
      }
    } else {
      small_grad_streak = 0;
    }
    if (k == cfg.max_iters) break;

    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= cfg.alpha * t * gr.g[j];
    if (!all_finite(x)) {
      throw SolverFailure("solver: iterate became non-finite", std::move(trace));
    }
    // First iteration has no previous gradient; the rule is skipped (t2 = t1).
    if (k > 1) t = time_step(t, gn, g_prev_norm, cfg.params);
    g_prev_norm = gn;
  }
  trace.stop_reason = StopReason::max_iters;
  return trace;
}

}  // namespace detail

/// MAD: gradient descent on the Moreau envelope with an exact grid-prox
/// oracle (g = (x - prox)/t) and adaptive time. Grid values are evaluated
/// once up front, so cum_evals is dominated by the grid size. dim <= 2.
inline Trace run_mad(const Objective& obj, const Vec& x1, const SolverConfig& cfg,
                     const GridSpec& grid) {
  const long long base_evals = obj.evals();
  GridEnvelopeOracle oracle(obj, grid);
  return detail::run_loop(obj, x1, cfg, base_evals, [&](const Vec& x, double t, int) {
    const ProxResult pr = oracle.prox(x, t);
    detail::GradResult gr;
    gr.g.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) gr.g[j] = (x[j] - pr.z[j]) / t;
    gr.u_est = pr.envelope;
    return gr;
  });
}

/// HJ-MAD: the sampled viscous-envelope gradient drives the same loop.
/// A pure function of (obj, x1, cfg) including cfg.seed.
inline Trace run_hj_mad(const Objective& obj, const Vec& x1, const SolverConfig& cfg) {
  Rng rng(cfg.seed);
  SamplerConfig sampler = cfg.sampler;
  sampler.seed = cfg.seed;
  return detail::run_loop(obj, x1, cfg, obj.evals(), [&](const Vec& x, double t, int) {
    const GradientEstimate est = estimate_gradient(obj, x, t, sampler, rng);
    return detail::GradResult{est.g, est.envelope_value};
  });
}

}  // namespace hjmad
