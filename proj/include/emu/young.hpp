#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "emu/error.hpp"
#include "emu/numeric.hpp"

namespace emu {

class YoungFunction;

namespace kind {

/// |x|^p, p > 1.
struct Power {
  double p;
  bool operator==(const Power&) const = default;
};

/// |x|^p / p, p > 1.
struct ScaledPower {
  double p;
  bool operator==(const ScaledPower&) const = default;
};

/// e^|x| - |x| - 1.
struct ExpType {
  bool operator==(const ExpType&) const = default;
};

/// (1 + |y|) log(1 + |y|) - |y|, the complement of ExpType.
struct EntropyType {
  bool operator==(const EntropyType&) const = default;
};

/// Complement of |x|^p: (p - 1) p^(-q) |y|^q with 1/p + 1/q = 1.
struct ConjugatePower {
  double p;
  bool operator==(const ConjugatePower&) const = default;
};

/// Convex piecewise-linear function through the origin. Slope slopes[i]
/// applies on [breakpoints[i], breakpoints[i+1]); the last slope extends to
/// infinity. Not superlinear, so never a true Young function.
struct PiecewiseLinear {
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  bool operator==(const PiecewiseLinear&) const = default;
};

/// Complement of `base` evaluated by numerical Legendre-Fenchel conjugation.
struct NumericConjugate {
  std::shared_ptr<const YoungFunction> base;
  bool operator==(const NumericConjugate& o) const;
};

}  // namespace kind

/// Default tolerances.
inline constexpr double kInverseTol = 1e-10;
inline constexpr double kConjugateTol = 1e-8;

double conjugate_numeric(const YoungFunction& phi, double y, double xmax_hint = 1.0,
                         double tol = kConjugateTol);

/// An even convex function Phi with Phi(0) = 0. Immutable value type; every
/// method evaluates on |x|.
class YoungFunction {
 public:
  using Kind = std::variant<kind::Power, kind::ScaledPower, kind::ExpType, kind::EntropyType,
                            kind::ConjugatePower, kind::PiecewiseLinear, kind::NumericConjugate>;

  static YoungFunction power(double p) { return YoungFunction(kind::Power{checked_exponent(p)}); }
  static YoungFunction scaled_power(double p) {
    return YoungFunction(kind::ScaledPower{checked_exponent(p)});
  }
  static YoungFunction exp_type() { return YoungFunction(kind::ExpType{}); }
  static YoungFunction entropy_type() { return YoungFunction(kind::EntropyType{}); }
  static YoungFunction conjugate_power(double p) {
    return YoungFunction(kind::ConjugatePower{checked_exponent(p)});
  }

  static YoungFunction piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes) {
    if (breakpoints.empty() || breakpoints.size() != slopes.size()) {
      throw Error(ErrorCode::InvalidArgument, "piecewise_linear needs one slope per breakpoint");
    }
    if (breakpoints.front() != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "piecewise_linear must start at breakpoint 0");
    }
    if (slopes.front() != 0.0) throw Error(ErrorCode::InvalidArgument, "piecewise_linear must start with slope 0");
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      if (!(slopes[i] >= 0.0) || !std::isfinite(slopes[i])) {
        throw Error(ErrorCode::InvalidArgument, "piecewise_linear slopes must be nonnegative");
      }
      if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, "piecewise_linear breakpoints must increase");
      }
      if (i > 0 && slopes[i] < slopes[i - 1]) {
        throw Error(ErrorCode::InvalidArgument, "piecewise_linear slopes must be nondecreasing");
      }
    }
    return YoungFunction(kind::PiecewiseLinear{std::move(breakpoints), std::move(slopes)});
  }

  static YoungFunction numeric_conjugate(const YoungFunction& base) {
    if (!base.superlinear()) {
      throw Error(ErrorCode::NotYoungFunction, "numeric conjugate requires a superlinear base");
    }
    return YoungFunction(kind::NumericConjugate{std::make_shared<const YoungFunction>(base)});
  }

  const Kind& kind() const noexcept { return kind_; }

  template <class K>
  bool is() const noexcept {
    return std::holds_alternative<K>(kind_);
  }

  /// Phi(x)/x -> infinity. False only for piecewise-linear functions.
  bool superlinear() const noexcept { return !is<kind::PiecewiseLinear>(); }

  /// Phi(|x|).
  double operator()(double x) const {
    const double a = std::abs(x);
    return std::visit([a](const auto& k) { return eval(k, a); }, kind_);
  }

  /// Smallest-error x >= 0 with |Phi(x) - t| <= tol * max(1, t). Closed forms
  /// are exact to rounding; the others bisect. tol = 0 bisects to adjacent
  /// doubles.
  double inverse(double t, double tol = kInverseTol) const {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "inverse needs t >= 0");
    if (t == 0.0) return 0.0;
    if (std::isinf(t)) return t;
    if (const auto* k = std::get_if<kind::Power>(&kind_)) return std::pow(t, 1.0 / k->p);
    if (const auto* k = std::get_if<kind::ScaledPower>(&kind_)) return std::pow(k->p * t, 1.0 / k->p);
    if (const auto* k = std::get_if<kind::ConjugatePower>(&kind_)) {
      const double q = conjugate_exponent(k->p);
      return std::pow(t / conjugate_power_coefficient(k->p), 1.0 / q);
    }
    if (const auto* k = std::get_if<kind::PiecewiseLinear>(&kind_)) {
      if (k->slopes.back() <= 0.0) {
        throw Error(ErrorCode::NonInvertible, "piecewise_linear function is identically zero");
      }
    }
    const auto& self = *this;
    return solve_increasing([&self](double x) { return self(x); }, t, tol);
  }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kind::Power>) return "power(" + fmt(k.p) + ")";
          else if constexpr (std::is_same_v<K, kind::ScaledPower>) return "scaled_power(" + fmt(k.p) + ")";
          else if constexpr (std::is_same_v<K, kind::ExpType>) return "exp_type";
          else if constexpr (std::is_same_v<K, kind::EntropyType>) return "entropy_type";
          else if constexpr (std::is_same_v<K, kind::ConjugatePower>) return "conjugate_power(" + fmt(k.p) + ")";
          else if constexpr (std::is_same_v<K, kind::PiecewiseLinear>) return "piecewise_linear";
          else return "numeric_conjugate(" + k.base->name() + ")";
        },
        kind_);
  }

  bool operator==(const YoungFunction& o) const { return kind_ == o.kind_; }

  static double conjugate_exponent(double p) { return p / (p - 1.0); }

  static double conjugate_power_coefficient(double p) {
    return (p - 1.0) * std::pow(p, -conjugate_exponent(p));
  }

 private:
  explicit YoungFunction(Kind k) : kind_(std::move(k)) {}

  static double checked_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidArgument, "exponent must satisfy 1 < p < inf");
    }
    return p;
  }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  static double eval(const kind::Power& k, double a) { return std::pow(a, k.p); }
  static double eval(const kind::ScaledPower& k, double a) { return std::pow(a, k.p) / k.p; }
  static double eval(const kind::ExpType&, double a) { return std::expm1(a) - a; }
  static double eval(const kind::EntropyType&, double a) { return (1.0 + a) * std::log1p(a) - a; }
  static double eval(const kind::ConjugatePower& k, double a) {
    return conjugate_power_coefficient(k.p) * std::pow(a, conjugate_exponent(k.p));
  }
  static double eval(const kind::PiecewiseLinear& k, double a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k.slopes.size(); ++i) {
      const double left = k.breakpoints[i];
      if (a <= left) break;
      const double right = i + 1 < k.breakpoints.size() ? std::min(a, k.breakpoints[i + 1]) : a;
      acc += k.slopes[i] * (right - left);
    }
    return acc;
  }
  static double eval(const kind::NumericConjugate& k, double a) {
    return conjugate_numeric(*k.base, a, 1.0, 0.0);
  }

  Kind kind_;
};

inline bool kind::NumericConjugate::operator==(const NumericConjugate& o) const {
  if (base == o.base) return true;
  return base && o.base && *base == *o.base;
}

inline double evaluate(const YoungFunction& phi, double x) { return phi(x); }

inline double inverse(const YoungFunction& phi, double t, double tol = kInverseTol) {
  return phi.inverse(t, tol);
}

/// The complementary function when a closed form is registered.
inline std::optional<YoungFunction> conjugate_closed_form(const YoungFunction& phi) {
  return std::visit(
      [](const auto& k) -> std::optional<YoungFunction> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kind::ScaledPower>) {
          return YoungFunction::scaled_power(YoungFunction::conjugate_exponent(k.p));
        } else if constexpr (std::is_same_v<K, kind::Power>) {
          return YoungFunction::conjugate_power(k.p);
        } else if constexpr (std::is_same_v<K, kind::ConjugatePower>) {
          return YoungFunction::power(k.p);
        } else if constexpr (std::is_same_v<K, kind::ExpType>) {
          return YoungFunction::entropy_type();
        } else if constexpr (std::is_same_v<K, kind::EntropyType>) {
          return YoungFunction::exp_type();
        } else if constexpr (std::is_same_v<K, kind::NumericConjugate>) {
          return *k.base;
        } else {
          return std::nullopt;
        }
      },
      phi.kind());
}

/// sup_{x >= 0} (x y - Phi(x)) by golden-section search on the concave
/// objective. The bracket [0, 2R] is established by doubling R from the hint
/// until the objective stops increasing.
inline double conjugate_numeric(const YoungFunction& phi, double y, double xmax_hint, double tol) {
  if (!(y >= 0.0)) throw Error(ErrorCode::InvalidArgument, "conjugate_numeric needs y >= 0");
  if (y == 0.0) return 0.0;
  const auto g = [&](double x) { return x * y - phi(x); };
  double r = xmax_hint > 0.0 ? xmax_hint : 1.0;
  // Shrink first so tiny maximizers are not lost in a wide bracket.
  while (r > 1e-300 && g(r) <= g(0.5 * r) && g(0.5 * r) > 0.0) r *= 0.5;
  for (std::size_t doublings = 0;; ++doublings) {
    const double next = 2.0 * r;
    const double gn = g(next);
    if (doublings > 1100 || !std::isfinite(next) || std::isnan(gn)) {
      throw Error(ErrorCode::BracketFailure, "conjugate objective did not turn over for " + phi.name());
    }
    if (!(gn > g(r))) break;
    r = next;
  }
  (void)tol;  // golden section runs to bracket collapse, well inside tol
  return std::max(0.0, maximize_concave(g, 0.0, 2.0 * r));
}

}  // namespace emu
