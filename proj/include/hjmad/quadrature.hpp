#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hjmad/envelope.hpp"
#include "hjmad/objectives.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

namespace detail {

// log(sum(exp(v))) with the usual max shift.
inline double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double c : v) s += std::exp(c - m);
  return m + std::log(s);
}

}  // namespace detail

/// Deterministic evaluation of u^delta(x, t) = -delta log( rho_{s^2} * e^{-f/delta} )(x)
/// by dense tensor quadrature in standardized coordinates z = (y - x)/s over
/// [-16, 16] per axis. Dimensions 1 and 2 only. quad_points = 0 selects
/// 200001 nodes per axis in 1-D and 801 in 2-D.
inline double quadrature_envelope_value(const Objective& obj, const Vec& x, double t,
                                        double delta, VarianceMode mode, int quad_points = 0) {
  const int n = obj.dim();
  if (n > 2) throw UnsupportedDimension("quadrature_envelope_value: dim <= 2 only");
  if (!(t > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("quadrature_envelope_value: t and delta must be > 0");
  }
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("quadrature_envelope_value: dimension mismatch");
  }
  const int p = quad_points > 0 ? quad_points : (n == 1 ? 200001 : 801);
  const double s = std::sqrt(sampling_variance(t, delta, mode));
  const double zmax = 16.0;
  const double hz = 2.0 * zmax / static_cast<double>(p - 1);

  std::vector<double> logterms;
  Vec y(n);
  if (n == 1) {
    logterms.reserve(p);
    for (int i = 0; i < p; ++i) {
      const double z = -zmax + i * hz;
      y[0] = x[0] + s * z;
      // trapezoid endpoint halving is immaterial at |z| = 16 but kept exact
      const double trap = (i == 0 || i == p - 1) ? std::log(0.5) : 0.0;
      logterms.push_back(-0.5 * z * z - obj.eval(y) / delta + trap);
    }
    const double log_v = detail::log_sum_exp(logterms) + std::log(hz) -
                         0.5 * std::log(2.0 * M_PI);
    return -delta * log_v;
  }
  logterms.reserve(static_cast<std::size_t>(p) * p);
  for (int i0 = 0; i0 < p; ++i0) {
    const double z0 = -zmax + i0 * hz;
    y[0] = x[0] + s * z0;
    const double t0 = (i0 == 0 || i0 == p - 1) ? std::log(0.5) : 0.0;
    for (int i1 = 0; i1 < p; ++i1) {
      const double z1 = -zmax + i1 * hz;
      y[1] = x[1] + s * z1;
      const double t1 = (i1 == 0 || i1 == p - 1) ? std::log(0.5) : 0.0;
      logterms.push_back(-0.5 * (z0 * z0 + z1 * z1) - obj.eval(y) / delta + t0 + t1);
    }
  }
  const double log_v = detail::log_sum_exp(logterms) + 2.0 * std::log(hz) -
                       std::log(2.0 * M_PI);
  return -delta * log_v;
}

/// Gradient of the quadrature envelope by central finite differences with
/// step h = 1e-5 max(1, |x|). This is the deterministic reference the
/// Monte-Carlo estimator is validated against.
inline Vec quadrature_gradient_oracle(const Objective& obj, const Vec& x, double t,
                                      double delta, VarianceMode mode, int quad_points = 0) {
  const int n = obj.dim();
  if (n > 2) throw UnsupportedDimension("quadrature_gradient_oracle: dim <= 2 only");
  const double h = 1e-5 * std::max(1.0, norm(x));
  Vec g(n);
  Vec xp = x, xm = x;
  for (int j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const double up = quadrature_envelope_value(obj, xp, t, delta, mode, quad_points);
    const double um = quadrature_envelope_value(obj, xm, t, delta, mode, quad_points);
    g[j] = (up - um) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return g;
}

}  // namespace hjmad
