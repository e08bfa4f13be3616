#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjmad {

using Vec = std::vector<double>;

/// Axis-aligned box, one (lower, upper) pair per coordinate.
struct Box {
  Vec lower;
  Vec upper;

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Vec& x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
      throw std::invalid_argument("Box: lower/upper size mismatch");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] < upper[i])) {
        throw std::invalid_argument("Box: lower must be < upper on every axis");
      }
    }
  }
};

/// Uniform box with the same [-half_width, half_width] range on every axis.
inline Box symmetric_box(int dim, double half_width) {
  return Box{Vec(dim, -half_width), Vec(dim, half_width)};
}

inline double squared_norm(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

inline double norm(const Vec& v) { return std::sqrt(squared_norm(v)); }

inline double squared_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Vec& a, const Vec& b) { return std::sqrt(squared_dist(a, b)); }

inline bool all_finite(const Vec& v) {
  for (double c : v) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

/// Thrown when a sampled objective value is not finite; carries the point.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(std::string msg, Vec point)
      : std::runtime_error(std::move(msg)), point_(std::move(point)) {}

  const Vec& point() const { return point_; }

 private:
  Vec point_;
};

/// Grid oracles only support dimensions 1 and 2.
class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hjmad
