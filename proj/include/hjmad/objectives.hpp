#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjmad/types.hpp"

namespace hjmad {

struct Optimum {
  Vec x;
  double f = 0.0;
};

/// Level-set margin gamma: only global minimizers are critical points of f
/// within { f <= f* + gamma }.
struct GammaSpec {
  double gamma = 1.0;

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("GammaSpec: gamma must be > 0");
  }
};

/// A black-box objective with an evaluation counter, an optional known
/// optimum, and an optional box domain. Copies share the counter; solver
/// runs construct fresh instances so their counts are independent.
///
/// The counter increment is atomic, so concurrent evaluation from multiple
/// workers keeps counts exact.
class Objective {
 public:
  Objective(std::string id, int dim, std::function<double(const Vec&)> fn,
            std::optional<Optimum> optimum = std::nullopt,
            std::optional<Box> domain = std::nullopt)
      : id_(std::move(id)),
        dim_(dim),
        fn_(std::move(fn)),
        optimum_(std::move(optimum)),
        domain_(std::move(domain)),
        count_(std::make_shared<std::atomic<long long>>(0)) {
    if (dim_ < 1) throw std::invalid_argument("Objective: dim must be >= 1");
  }

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }

  /// Counted evaluation; increments the counter by exactly 1.
  double eval(const Vec& x) const {
    check_dim(x);
    count_->fetch_add(1, std::memory_order_relaxed);
    return fn_(x);
  }

  /// Evaluation that does not touch the counter. Used for trace recording,
  /// which is monitoring overhead rather than algorithm cost.
  double eval_uncounted(const Vec& x) const {
    check_dim(x);
    return fn_(x);
  }

  long long evals() const { return count_->load(std::memory_order_relaxed); }
  void reset_evals() const { count_->store(0, std::memory_order_relaxed); }

  const std::optional<Optimum>& optimum() const { return optimum_; }
  const std::optional<Box>& domain() const { return domain_; }

 private:
  void check_dim(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) {
      throw std::invalid_argument("Objective '" + id_ + "': point has dimension " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim_));
    }
  }

  std::string id_;
  int dim_;
  std::function<double(const Vec&)> fn_;
  std::optional<Optimum> optimum_;
  std::optional<Box> domain_;
  std::shared_ptr<std::atomic<long long>> count_;
};

inline double evaluate(const Objective& obj, const Vec& x) { return obj.eval(x); }

inline std::optional<Optimum> known_optimum(const Objective& obj) { return obj.optimum(); }

inline std::optional<Box> default_domain(const Objective& obj) { return obj.domain(); }

namespace detail {

inline double griewank_fn(const Vec& x) {
  double sum = 0.0, prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return 1.0 + sum / 4000.0 - prod;
}

inline double dropwave_fn(const Vec& x) {
  const double r2 = squared_norm(x);
  return -(1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
}

inline double alpine1_fn(const Vec& x) {
  double s = 0.0;
  for (double c : x) s += std::abs(c * std::sin(c) + 0.1 * c);
  return s;
}

inline double ackley_fn(const Vec& x) {
  const double n = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (double c : x) {
    sq += c * c;
    cs += std::cos(2.0 * M_PI * c);
  }
  return 20.0 + std::exp(1.0) - 20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n);
}

inline double levy_fn(const Vec& x) {
  const std::size_t n = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s1 = std::sin(M_PI * w(0));
  double f = s1 * s1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double wi = w(i);
    const double s = std::sin(M_PI * wi + 1.0);
    f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wn = w(n - 1);
  const double sn = std::sin(2.0 * M_PI * wn);
  f += (wn - 1.0) * (wn - 1.0) * (1.0 + sn * sn);
  return f;
}

inline double rastrigin_fn(const Vec& x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double c : x) s += c * c - 10.0 * std::cos(2.0 * M_PI * c);
  return s;
}

inline double quadratic_fn(const Vec& x) { return 0.5 * squared_norm(x); }

inline double double_well_fn(const Vec& x) {
  const double d = x[0] * x[0] - 1.0;
  return d * d;
}

struct ObjectiveSpec {
  const char* id;
  int default_dim;
  bool fixed_dim;
  double half_width;
  double (*fn)(const Vec&);
  double opt_coord;  // optimum is (opt_coord, ..., opt_coord)
  double opt_value;
};

inline const std::vector<ObjectiveSpec>& objective_table() {
  static const std::vector<ObjectiveSpec> table = {
      {"griewank", 2, false, 600.0, &griewank_fn, 0.0, 0.0},
      {"dropwave", 2, false, 5.12, &dropwave_fn, 0.0, -1.0},
      {"alpine1", 2, false, 10.0, &alpine1_fn, 0.0, 0.0},
      {"ackley", 2, false, 32.768, &ackley_fn, 0.0, 0.0},
      {"levy", 2, false, 10.0, &levy_fn, 1.0, 0.0},
      {"rastrigin", 2, false, 5.12, &rastrigin_fn, 0.0, 0.0},
      {"quadratic", 1, false, 10.0, &quadratic_fn, 0.0, 0.0},
      {"doublewell", 1, true, 3.0, &double_well_fn, 1.0, 0.0},
  };
  return table;
}

}  // namespace detail

inline std::vector<std::string> objective_ids() {
  std::vector<std::string> ids;
  for (const auto& s : detail::objective_table()) ids.emplace_back(s.id);
  return ids;
}

/// Builds a registered benchmark. dim == 0 selects the function's default
/// dimension. Throws std::invalid_argument for unknown ids or unsupported
/// dimensions.
inline Objective make_objective(const std::string& id, int dim = 0) {
  for (const auto& s : detail::objective_table()) {
    if (id != s.id) continue;
    int d = (dim == 0) ? s.default_dim : dim;
    if (d < 1) throw std::invalid_argument("make_objective: dim must be >= 1");
    if (s.fixed_dim && d != s.default_dim) {
      throw std::invalid_argument(std::string("make_objective: '") + s.id +
                                  "' is only defined for dim " + std::to_string(s.default_dim));
    }
    Optimum opt{Vec(d, s.opt_coord), s.opt_value};
    return Objective(s.id, d, s.fn, std::move(opt), symmetric_box(d, s.half_width));
  }
  throw std::invalid_argument("make_objective: unknown objective id '" + id + "'");
}

}  // namespace hjmad
