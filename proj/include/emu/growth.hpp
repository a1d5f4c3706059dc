#pragma once

// Sampling certificates for the growth conditions of a Young function
// (Delta_2, Delta', nabla', ordering), the mixed second-derivative condition
// on a complementary pair, and Young's inequality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "emu/check.hpp"
#include "emu/error.hpp"
#include "emu/numeric.hpp"
#include "emu/young.hpp"

namespace emu {

inline constexpr double kGrowthSafetyFactor = 1.01;
inline constexpr double kStabilityWindow = 0.01;

/// A sampled constant. `value` is what callers should use; `empirical` is the
/// raw extremum observed on the finest grid.
struct GrowthConstant {
  double value = 0.0;
  double empirical = 0.0;
  double threshold = 0.0;  // x0 (or y0)
};

struct GrowthCertificate {
  std::optional<GrowthConstant> delta2;       // Phi(2x) <= k Phi(x)
  std::optional<GrowthConstant> delta_prime;  // Phi(xy) <= c Phi(x) Phi(y)
  std::optional<GrowthConstant> nabla_prime;  // Phi(b xy) >= Phi(x) Phi(y)
  std::optional<GrowthConstant> ordering;     // Phi2(x) <= Phi1(a x)
};

/// Default 2-D grid for the product conditions.
inline Grid default_product_grid() { return {1e-3, 1e3, 128}; }

namespace detail {

inline bool stable(double a, double b) {
  return std::isfinite(a) && std::isfinite(b) && std::abs(b - a) <= kStabilityWindow * std::abs(a);
}

// Runs `measure` on a grid and two successive doublings; returns the finest
// value when all three agree within the stability window.
template <class Measure>
std::optional<double> stable_measure(const Measure& measure, const Grid& grid) {
  const Grid g1 = grid.doubled();
  const Grid g2 = g1.doubled();
  const double m0 = measure(grid);
  if (!std::isfinite(m0)) return std::nullopt;
  const double m1 = measure(g1);
  if (!stable(m0, m1)) return std::nullopt;
  const double m2 = measure(g2);
  if (!stable(m1, m2)) return std::nullopt;
  return m2;
}

// Same grid extent, sample points shifted by half a log step.
inline Grid shifted(const Grid& g) {
  if (g.points < 2) return g;
  const double step = std::log(g.hi / g.lo) / static_cast<double>(g.points - 1);
  return {g.lo * std::exp(0.5 * step), g.hi * std::exp(0.5 * step), g.points};
}

inline double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  const double r = num / den;
  return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
}

}  // namespace detail

/// sup over the grid of Phi(2x)/Phi(x).
inline double delta2_sup(const YoungFunction& phi, const Grid& grid) {
  double sup = 0.0;
  for (double x : grid.values()) sup = std::max(sup, detail::ratio(phi(2.0 * x), phi(x)));
  return sup;
}

/// sup over the square grid of Phi(xy)/(Phi(x)Phi(y)).
inline double delta_prime_sup(const YoungFunction& phi, const Grid& grid) {
  const auto xs = grid.values();
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = phi(xs[i]);
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) {
      sup = std::max(sup, detail::ratio(phi(xs[i] * xs[j]), vals[i] * vals[j]));
      if (std::isinf(sup)) return sup;
    }
  }
  return sup;
}

inline bool nabla_prime_holds(const YoungFunction& phi, double b, std::span<const double> xs,
                              std::span<const double> vals) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) {
      if (phi(b * xs[i] * xs[j]) < vals[i] * vals[j]) return false;
    }
  }
  return true;
}

/// Smallest b (to relative 1e-9) with Phi(b xy) >= Phi(x)Phi(y) on the grid,
/// or +inf when no b up to 2^200 works.
inline double nabla_prime_inf(const YoungFunction& phi, const Grid& grid) {
  const auto xs = grid.values();
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = phi(xs[i]);
  const auto holds = [&](double b) { return nabla_prime_holds(phi, b, xs, vals); };
  double lo = 1.0;
  double hi = 1.0;
  if (holds(hi)) {
    std::size_t guard = 0;
    while (holds(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++guard > 200) return 0.0;
    }
  } else {
    std::size_t guard = 0;
    while (!holds(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) return std::numeric_limits<double>::infinity();
    }
  }
  return bisect_predicate(holds, lo, hi, 1e-9).hi;
}

/// Grid-sup certificate for Phi(2x) <= k Phi(x), x >= x0. Absent unless the
/// sup is finite and stable under two grid doublings.
inline std::optional<GrowthCertificate> check_delta2(const YoungFunction& phi, double x0 = 0.0,
                                                     const Grid& grid = Grid{}) {
  const Grid g = grid.starting_at(x0);
  const auto sup = detail::stable_measure([&](const Grid& gg) { return delta2_sup(phi, gg); }, g);
  if (!sup) return std::nullopt;
  const double k = *sup * kGrowthSafetyFactor;
  const Grid check = detail::shifted(g.doubled().doubled());
  for (double x : check.values()) {
    if (phi(2.0 * x) > k * phi(x)) return std::nullopt;
  }
  GrowthCertificate cert;
  cert.delta2 = GrowthConstant{k, *sup, x0};
  return cert;
}

inline std::optional<GrowthCertificate> check_delta_prime(const YoungFunction& phi, double x0 = 0.0,
                                                          const Grid& grid = default_product_grid()) {
  const Grid g = grid.starting_at(x0);
  const auto sup = detail::stable_measure([&](const Grid& gg) { return delta_prime_sup(phi, gg); }, g);
  if (!sup) return std::nullopt;
  const double c = *sup * kGrowthSafetyFactor;
  if (!(delta_prime_sup(phi, detail::shifted(g)) <= c)) return std::nullopt;
  GrowthCertificate cert;
  cert.delta_prime = GrowthConstant{c, *sup, x0};
  return cert;
}

inline std::optional<GrowthCertificate> check_nabla_prime(const YoungFunction& phi, double y0 = 0.0,
                                                          const Grid& grid = default_product_grid()) {
  const Grid g = grid.starting_at(y0);
  const auto inf = detail::stable_measure([&](const Grid& gg) { return nabla_prime_inf(phi, gg); }, g);
  if (!inf || *inf <= 0.0) return std::nullopt;
  const double b = *inf * kGrowthSafetyFactor;
  if (!(nabla_prime_inf(phi, detail::shifted(g)) <= b)) return std::nullopt;
  GrowthCertificate cert;
  cert.nabla_prime = GrowthConstant{b, *inf, y0};
  return cert;
}

/// Candidate scale factors a = 2^(j/16), j in [-320, 320].
inline double ordering_candidate(int j) { return std::exp2(static_cast<double>(j) / 16.0); }

/// Smallest candidate a with phi2(x) <= phi1(a x) on the grid, or +inf.
inline double ordering_min_scale(const YoungFunction& phi1, const YoungFunction& phi2, const Grid& grid) {
  const auto xs = grid.values();
  const auto holds = [&](int j) {
    const double a = ordering_candidate(j);
    for (double x : xs) {
      const double lhs = phi2(x);
      const double rhs = phi1(a * x);
      if (lhs > rhs * (1.0 + 1e-12)) return false;
    }
    return true;
  };
  int lo = -320;
  int hi = 320;
  if (!holds(hi)) return std::numeric_limits<double>::infinity();
  if (holds(lo)) return ordering_candidate(lo);
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (holds(mid)) hi = mid;
    else lo = mid;
  }
  return ordering_candidate(hi);
}

/// Certificate that phi1 is stronger than phi2 beyond x0: phi2(x) <= phi1(a x).
inline std::optional<GrowthCertificate> check_ordering(const YoungFunction& phi1, const YoungFunction& phi2,
                                                       double x0 = 0.0, const Grid& grid = Grid{}) {
  const Grid g = grid.starting_at(x0);
  const auto a = detail::stable_measure(
      [&](const Grid& gg) { return ordering_min_scale(phi1, phi2, gg); }, g);
  if (!a) return std::nullopt;
  for (double x : detail::shifted(g).values()) {
    if (phi2(x) > phi1(*a * x) * (1.0 + 1e-12)) return std::nullopt;
  }
  GrowthCertificate cert;
  cert.ordering = GrowthConstant{*a, *a, x0};
  return cert;
}

/// Central-difference step for grid point i: a tenth of the local spacing.
inline double fd_step(std::span<const double> xs, std::size_t i) {
  const double right = i + 1 < xs.size() ? xs[i + 1] - xs[i] : xs[i] - xs[i - 1];
  const double left = i > 0 ? xs[i] - xs[i - 1] : right;
  return 0.1 * std::min(left, right);
}

inline double fd_first(const YoungFunction& phi, double x, double h) {
  return (phi(x + h) - phi(x - h)) / (2.0 * h);
}

inline double fd_second(const YoungFunction& phi, double x, double h) {
  return (phi(x + h) - 2.0 * phi(x) + phi(x - h)) / (h * h);
}

struct CurvatureReport {
  bool holds = true;
  double worst_x = 0.0;
  double worst_y = 0.0;
  double worst_value = std::numeric_limits<double>::infinity();
  std::size_t points = 0;
};

/// Evaluates D(x,y) = Phi''(x) Psi''(y) Phi(x) Psi(y) - (Phi'(x) Psi'(y))^2 on
/// the square grid with finite-difference derivatives. Holds iff
/// D >= -tol * (|first term| + |second term|) everywhere.
inline CurvatureReport check_curvature_condition(const YoungFunction& phi, const YoungFunction& psi,
                                                 const Grid& grid = {1e-2, 1e2, 64},
                                                 double tol = 1e-6) {
  for (const auto* f : {&phi, &psi}) {
    if (f->is<kind::PiecewiseLinear>() || f->is<kind::NumericConjugate>()) {
      throw Error(ErrorCode::DifferentiationFailure, f->name() + " has no closed-form smooth evaluation");
    }
  }
  const auto xs = grid.values();
  struct Jet {
    double v, d1, d2;
  };
  std::vector<Jet> pj(xs.size()), qj(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double h = fd_step(xs, i);
    pj[i] = {phi(xs[i]), fd_first(phi, xs[i], h), fd_second(phi, xs[i], h)};
    qj[i] = {psi(xs[i]), fd_first(psi, xs[i], h), fd_second(psi, xs[i], h)};
  }
  CurvatureReport rep;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double first = pj[i].d2 * qj[j].d2 * pj[i].v * qj[j].v;
      const double cross = pj[i].d1 * qj[j].d1;
      const double d = first - cross * cross;
      ++rep.points;
      if (d < rep.worst_value) {
        rep.worst_value = d;
        rep.worst_x = xs[i];
        rep.worst_y = xs[j];
      }
      if (d < -tol * (std::abs(first) + cross * cross)) rep.holds = false;
    }
  }
  return rep;
}

/// x y <= Phi(x) + Psi(y) on every sample; violations are measured relative
/// to max(1, x y).
inline CheckReport young_inequality_check(const YoungFunction& phi, const YoungFunction& psi,
                                          std::span<const std::pair<double, double>> samples,
                                          double tol = 1e-9) {
  CheckReport rep(tol);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, y] = samples[i];
    const double lhs = std::abs(x) * std::abs(y);
    const double rhs = phi(x) + psi(y);
    rep.record((lhs - rhs) / std::max(1.0, lhs), i);
  }
  rep.cases = samples.size();
  return rep;
}

}  // namespace emu
