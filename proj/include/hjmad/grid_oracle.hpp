#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hjmad/objectives.hpp"
#include "hjmad/types.hpp"

namespace hjmad {

/// Dense grid for the exact prox / envelope oracles. Dimensions 1 and 2 only.
struct GridSpec {
  Box box;
  int points_per_axis = 0;

  void validate() const {
    box.validate();
    if (box.dim() > 2) {
      throw UnsupportedDimension("GridSpec: grid oracles support dim <= 2 only");
    }
    if (points_per_axis < 3) {
      throw std::invalid_argument("GridSpec: points_per_axis must be >= 3");
    }
  }
};

/// Default oracle grid: the objective's domain, expanded to cover x with
/// margin 3 sqrt(2 t max(1, delta)); 4001 points per axis in 1-D, 601 in 2-D.
inline GridSpec make_prox_grid(const Objective& obj, const Vec& x, double t, double delta = 1.0) {
  if (obj.dim() > 2) {
    throw UnsupportedDimension("make_prox_grid: dim <= 2 only");
  }
  const double margin = 3.0 * std::sqrt(2.0 * t * std::max(1.0, delta));
  Box box = obj.domain() ? *obj.domain() : symmetric_box(obj.dim(), margin);
  for (int j = 0; j < obj.dim(); ++j) {
    box.lower[j] = std::min(box.lower[j], x[j] - margin);
    box.upper[j] = std::max(box.upper[j], x[j] + margin);
  }
  return GridSpec{box, obj.dim() == 1 ? 4001 : 601};
}

struct ProxResult {
  Vec z;           // grid minimizer of f(z) + |z - x|^2 / (2t)
  double envelope;  // value at the minimizer
};

/// Grid-restricted prox / Moreau-envelope oracle. Objective values on the
/// grid are evaluated once at construction (counted); prox and envelope
/// queries afterwards are pure scans with no further evaluations. Queries
/// accept any x, inside the box or not.
class GridEnvelopeOracle {
 public:
  GridEnvelopeOracle(const Objective& obj, const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.box.dim() != obj.dim()) {
      throw std::invalid_argument("GridEnvelopeOracle: grid/objective dimension mismatch");
    }
    dim_ = obj.dim();
    const int p = spec_.points_per_axis;
    axes_.resize(dim_);
    spacing_ = 0.0;
    for (int j = 0; j < dim_; ++j) {
      axes_[j].resize(p);
      const double lo = spec_.box.lower[j];
      const double h = (spec_.box.upper[j] - lo) / static_cast<double>(p - 1);
      spacing_ = std::max(spacing_, h);
      for (int i = 0; i < p; ++i) axes_[j][i] = lo + i * h;
    }
    const std::size_t total = dim_ == 1 ? static_cast<std::size_t>(p)
                                        : static_cast<std::size_t>(p) * p;
    fvals_.resize(total);
    Vec z(dim_);
    if (dim_ == 1) {
      for (int i = 0; i < p; ++i) {
        z[0] = axes_[0][i];
        fvals_[i] = obj.eval(z);
      }
    } else {
      for (int i0 = 0; i0 < p; ++i0) {
        z[0] = axes_[0][i0];
        for (int i1 = 0; i1 < p; ++i1) {
          z[1] = axes_[1][i1];
          fvals_[static_cast<std::size_t>(i0) * p + i1] = obj.eval(z);
        }
      }
    }
  }

  /// Nodes are scanned in lexicographic coordinate order with strict
  /// improvement, so exact ties resolve to the smallest lexicographic point.
  ProxResult prox(const Vec& x, double t) const {
    if (static_cast<int>(x.size()) != dim_) {
      throw std::invalid_argument("GridEnvelopeOracle::prox: dimension mismatch");
    }
    if (!(t > 0.0)) throw std::invalid_argument("GridEnvelopeOracle::prox: t must be > 0");
    const int p = spec_.points_per_axis;
    const double inv2t = 1.0 / (2.0 * t);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    if (dim_ == 1) {
      for (int i = 0; i < p; ++i) {
        const double d = axes_[0][i] - x[0];
        const double v = fvals_[i] + d * d * inv2t;
        if (v < best) {
          best = v;
          best_idx = i;
        }
      }
      return ProxResult{Vec{axes_[0][best_idx]}, best};
    }
    for (int i0 = 0; i0 < p; ++i0) {
      const double d0 = axes_[0][i0] - x[0];
      const double q0 = d0 * d0 * inv2t;
      const std::size_t row = static_cast<std::size_t>(i0) * p;
      for (int i1 = 0; i1 < p; ++i1) {
        const double d1 = axes_[1][i1] - x[1];
        const double v = fvals_[row + i1] + q0 + d1 * d1 * inv2t;
        if (v < best) {
          best = v;
          best_idx = row + i1;
        }
      }
    }
    return ProxResult{Vec{axes_[0][best_idx / p], axes_[1][best_idx % p]}, best};
  }

  double envelope(const Vec& x, double t) const { return prox(x, t).envelope; }

  double spacing() const { return spacing_; }
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  int dim_ = 0;
  double spacing_ = 0.0;
  std::vector<Vec> axes_;
  std::vector<double> fvals_;
};

/// One-shot grid prox: argmin over grid nodes of f(z) + |z - x|^2/(2t).
inline Vec exact_prox_grid(const Objective& obj, const Vec& x, double t, const GridSpec& grid) {
  return GridEnvelopeOracle(obj, grid).prox(x, t).z;
}

/// One-shot grid Moreau envelope value.
inline double exact_envelope_grid(const Objective& obj, const Vec& x, double t,
                                  const GridSpec& grid) {
  return GridEnvelopeOracle(obj, grid).envelope(x, t);
}

}  // namespace hjmad
