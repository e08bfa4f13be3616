#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hjmad/objectives.hpp"
#include "hjmad/rng.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

/// How the Gaussian sampling variance s^2 relates to (t, delta).
///
/// paper_literal samples N(x, 2t), exactly the expectation form of the
/// published estimator. viscosity_consistent samples N(x, delta*t), the heat
/// kernel of the delta/2-Laplacian PDE; only this choice makes the small-delta
/// limit recover the Moreau gradient (x - prox)/t, which the quadratic closed
/// form confirms. Both modes feed the same generic formula
///   g = (delta/s^2) * (x - softmin-weighted sample mean).
enum class VarianceMode { paper_literal, viscosity_consistent };

inline double sampling_variance(double t, double delta, VarianceMode mode) {
  return mode == VarianceMode::paper_literal ? 2.0 * t : delta * t;
}

inline const char* to_string(VarianceMode m) {
  return m == VarianceMode::paper_literal ? "paper_literal" : "viscosity_consistent";
}

inline std::optional<VarianceMode> variance_mode_from_string(const std::string& s) {
  if (s == "paper_literal") return VarianceMode::paper_literal;
  if (s == "viscosity_consistent") return VarianceMode::viscosity_consistent;
  return std::nullopt;
}

struct SamplerConfig {
  int n_samples = 100;
  double delta = 0.1;
  VarianceMode variance_mode = VarianceMode::viscosity_consistent;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 1) throw std::invalid_argument("SamplerConfig: n_samples must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("SamplerConfig: delta must be > 0");
  }
};

/// Estimated envelope gradient plus sampling diagnostics.
struct GradientEstimate {
  Vec g;                      // estimate of grad u^delta(x, t)
  double envelope_value = 0;  // estimate of u^delta(x, t)
  double ess = 0;             // effective sample size 1 / sum(wbar_i^2), in [1, N]
  double max_weight = 0;      // largest normalized weight, in (0, 1]
  Vec se;                     // delta-method standard error of g, per component
};

namespace detail {

struct SoftminResult {
  std::vector<double> weights;  // normalized, sum to 1
  double fmin = 0;
  double log_mean_exp = 0;  // log( mean_i exp(-(f_i - fmin)/delta) )
};

/// Stabilized softmin weights. All exponents are taken relative to the batch
/// minimum, so exp never overflows and an additive shift of f cancels.
inline SoftminResult softmin_weights(std::span<const double> fvals, double delta) {
  SoftminResult r;
  r.fmin = *std::min_element(fvals.begin(), fvals.end());
  r.weights.resize(fvals.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fvals.size(); ++i) {
    r.weights[i] = std::exp(-(fvals[i] - r.fmin) / delta);
    total += r.weights[i];
  }
  for (double& w : r.weights) w /= total;
  r.log_mean_exp = std::log(total / static_cast<double>(fvals.size()));
  return r;
}

}  // namespace detail

/// Monte-Carlo estimate of the viscous envelope gradient at (x, t):
/// draws y_i ~ N(x, s^2 I), forms softmin weights exp(-f(y_i)/delta)
/// (stabilized), and returns g = (delta/s^2) (x - sum_i wbar_i y_i) together
/// with the matching envelope value estimate and weighting diagnostics.
///
/// Sampling and the weighted reduction run in fixed index order, so the
/// result is a pure function of (inputs, rng state). Increments the
/// objective's counter by n_samples.
inline GradientEstimate estimate_gradient(const Objective& obj, const Vec& x, double t,
                                          const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!(t > 0.0)) throw std::invalid_argument("estimate_gradient: t must be > 0");
  if (static_cast<int>(x.size()) != obj.dim()) {
    throw std::invalid_argument("estimate_gradient: point dimension mismatch");
  }

  const int n = obj.dim();
  const int N = cfg.n_samples;
  const double s2 = sampling_variance(t, cfg.delta, cfg.variance_mode);
  const double s = std::sqrt(s2);

  std::vector<double> samples(static_cast<std::size_t>(N) * n);
  std::vector<double> fvals(N);
  Vec y(n);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < n; ++j) {
      y[j] = x[j] + s * rng.normal();
      samples[static_cast<std::size_t>(i) * n + j] = y[j];
    }
    const double fy = obj.eval(y);
    if (!std::isfinite(fy)) {
      throw EstimationError("estimate_gradient: objective returned a non-finite value", y);
    }
    fvals[i] = fy;
  }

  const auto sm = detail::softmin_weights(fvals, cfg.delta);

  Vec weighted_mean(n, 0.0);
  double sum_w2 = 0.0, max_w = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = sm.weights[i];
    sum_w2 += w * w;
    max_w = std::max(max_w, w);
    for (int j = 0; j < n; ++j) {
      weighted_mean[j] += w * samples[static_cast<std::size_t>(i) * n + j];
    }
  }

  GradientEstimate est;
  est.g.resize(n);
  const double scale = cfg.delta / s2;
  for (int j = 0; j < n; ++j) est.g[j] = scale * (x[j] - weighted_mean[j]);
  est.envelope_value = sm.fmin - cfg.delta * sm.log_mean_exp;
  est.ess = 1.0 / sum_w2;
  est.max_weight = max_w;

  // Delta-method variance of the self-normalized weighted mean:
  // Var(ybar_j) ~ sum_i wbar_i^2 (y_ij - ybar_j)^2.
  est.se.assign(n, 0.0);
  for (int i = 0; i < N; ++i) {
    const double w = sm.weights[i];
    for (int j = 0; j < n; ++j) {
      const double d = samples[static_cast<std::size_t>(i) * n + j] - weighted_mean[j];
      est.se[j] += w * w * d * d;
    }
  }
  for (int j = 0; j < n; ++j) est.se[j] = scale * std::sqrt(est.se[j]);

  return est;
}

inline GradientEstimate estimate_gradient(const Objective& obj, const Vec& x, double t,
                                          const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return estimate_gradient(obj, x, t, cfg, rng);
}

/// Envelope value estimate only; same sampling path as estimate_gradient
/// (callers needing both should call estimate_gradient once and reuse it).
inline double smoothed_envelope_value(const Objective& obj, const Vec& x, double t,
                                      const SamplerConfig& cfg, Rng& rng) {
  return estimate_gradient(obj, x, t, cfg, rng).envelope_value;
}

inline double smoothed_envelope_value(const Objective& obj, const Vec& x, double t,
                                      const SamplerConfig& cfg) {
  Rng rng(cfg.seed);
  return smoothed_envelope_value(obj, x, t, cfg, rng);
}

/// EWMA smoothing of gradient estimates: returns g when no average exists
/// yet, otherwise beta * g_avg + (1 - beta) * g. beta = 0 disables smoothing.
inline Vec ewma_update(const std::optional<Vec>& g_avg, const Vec& g, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument("ewma_update: beta must be in [0, 1)");
  }
  if (!g_avg.has_value()) return g;
  if (g_avg->size() != g.size()) {
    throw std::invalid_argument("ewma_update: dimension mismatch");
  }
  Vec out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = beta * (*g_avg)[i] + (1.0 - beta) * g[i];
  return out;
}

}  // namespace hjmad
