#pragma once

#include <algorithm>
#include <stdexcept>

namespace hjmad {

/// Parameters of the trust-region-style time step rule.
///
/// delta_ts is the additive threshold in the grow test. It shares a symbol
/// with the sampling viscosity but is an independent parameter here (a
/// gradient-norm threshold, not a smoothing scale); callers conventionally
/// default it to the viscosity value.
struct TimeStepParams {
  double eta_minus = 0.5;
  double eta_plus = 2.0;
  double theta = 0.9;
  double delta_ts = 0.1;
  double tau = 1e-4;
  double T = 1.0;

  void validate() const {
    if (!(eta_minus > 0.0 && eta_minus < 1.0)) {
      throw std::invalid_argument("TimeStepParams: eta_minus must be in (0, 1)");
    }
    if (!(eta_plus > 1.0)) throw std::invalid_argument("TimeStepParams: eta_plus must be > 1");
    if (!(theta > 0.0 && theta < 1.0)) {
      throw std::invalid_argument("TimeStepParams: theta must be in (0, 1)");
    }
    if (!(delta_ts >= 0.0)) throw std::invalid_argument("TimeStepParams: delta_ts must be >= 0");
    if (!(tau > 0.0 && tau <= T)) {
      throw std::invalid_argument("TimeStepParams: need 0 < tau <= T");
    }
  }
};

/// Adaptive time step: grow t when the gradient stalls relative to the
/// previous one (to smooth harder and escape local minima), shrink otherwise
/// (to exploit the local landscape). Output is always clamped to [tau, T].
inline double time_step(double t, double p_norm, double q_norm, const TimeStepParams& params) {
  params.validate();
  if (!(t >= params.tau && t <= params.T)) {
    throw std::invalid_argument("time_step: t outside [tau, T] (solver bug)");
  }
  if (!(p_norm >= 0.0) || !(q_norm >= 0.0)) {
    throw std::invalid_argument("time_step: gradient norms must be nonnegative");
  }
  if (p_norm <= params.theta * q_norm + params.delta_ts) {
    return std::min(params.eta_plus * t, params.T);
  }
  return std::max(params.eta_minus * t, params.tau);
}

}  // namespace hjmad
