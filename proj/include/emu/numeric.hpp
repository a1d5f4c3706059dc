#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "emu/error.hpp"

namespace emu {

namespace detail {

template <class Term>
double pairwise_sum_range(const Term& term, std::size_t lo, std::size_t hi) {
  constexpr std::size_t kBase = 8;
  if (hi - lo <= kBase) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(term, lo, mid) + pairwise_sum_range(term, mid, hi);
}

}  // namespace detail

/// Pairwise (cascade) summation of term(0) + ... + term(n-1).
template <class Term>
double pairwise_sum(std::size_t n, const Term& term) {
  return detail::pairwise_sum_range(term, 0, n);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum(xs.size(), [&](std::size_t i) { return xs[i]; });
}

/// Log-spaced sample grid on [lo, hi].
struct Grid {
  double lo = 1e-3;
  double hi = 1e3;
  std::size_t points = 2048;

  std::vector<double> values() const {
    std::vector<double> out(points);
    if (points == 1) {
      out[0] = lo;
      return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
      out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
  }

  // One refinement step: twice the points over twice the upper extent.
  Grid doubled() const { return {lo, 2.0 * hi, 2 * points}; }

  Grid starting_at(double x0) const { return {std::max(lo, x0), hi, points}; }
};

struct BisectionResult {
  double lo;
  double hi;
  std::size_t iterations;
};

/// Shrinks a bracket [lo, hi] of a monotone predicate that is false at lo and
/// true at hi, until the relative width drops below rel_tol or the midpoint
/// can no longer be represented strictly inside.
template <class Pred>
BisectionResult bisect_predicate(const Pred& pred, double lo, double hi, double rel_tol,
                                 std::size_t max_iter = 2000) {
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    if (hi - lo <= rel_tol * std::abs(hi)) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi, it};
}

/// Solves f(x) = target for a continuous nondecreasing f on [0, inf).
/// The returned x satisfies |f(x) - target| <= tol * max(1, target) unless
/// the bracket collapses to adjacent doubles first.
template <class F>
double solve_increasing(const F& f, double target, double tol, double start = 1.0) {
  if (target <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = start > 0.0 ? start : 1.0;
  std::size_t guard = 0;
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2100 || !std::isfinite(hi)) {
      throw Error(ErrorCode::NonInvertible, "target exceeds the range of the function");
    }
  }
  const double scale = std::max(1.0, target);
  for (std::size_t it = 0; it < 4000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double v = f(mid);
    if (std::abs(v - target) <= tol * scale) return mid;
    if (v < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo) - target) < std::abs(f(hi) - target) ? lo : hi;
}

/// Golden-section maximization of a concave function on [a, b].
template <class F>
double maximize_concave(const F& g, double a, double b, std::size_t max_iter = 300) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (!(b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b)))) break;
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    }
  }
  return std::max({gc, gd, g(a), g(b)});
}

/// Deterministic random source. The engine output is fixed by the standard;
/// the conversions below avoid the implementation-defined distributions so
/// seeded runs agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  double sign() { return (engine_() >> 63) != 0 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent per-sample seeds from a
/// master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline bool relative_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace emu
