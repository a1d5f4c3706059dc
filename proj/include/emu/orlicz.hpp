#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "emu/check.hpp"
#include "emu/error.hpp"
#include "emu/mspace.hpp"
#include "emu/numeric.hpp"
#include "emu/young.hpp"

namespace emu {

inline constexpr double kNormTol = 1e-12;
inline constexpr std::size_t kNormMaxIter = 200;

/// sum_i w_i Phi(|f_i|), pairwise summed.
inline double modular(const MeasureSpace& space, const YoungFunction& phi, const SimpleFunction& f) {
  if (!f.bound_to(space)) throw Error(ErrorCode::SpaceMismatch, "function is not bound to this space");
  return pairwise_sum(space.size(), [&](std::size_t i) { return space.weight(i) * phi(f[i]); });
}

/// modular(f / k) without materializing f / k.
inline double scaled_modular(const MeasureSpace& space, const YoungFunction& phi, const SimpleFunction& f,
                             double k) {
  return pairwise_sum(space.size(), [&](std::size_t i) { return space.weight(i) * phi(f[i] / k); });
}

/// Luxemburg norm inf{k > 0 : modular(f/k) <= 1}.
///
/// The map k -> modular(f/k) is continuous and nonincreasing. The bracket
/// starts at k0 = max|f| / Phi^{-1}(1/mu(Omega)), where modular(f/k0) <= 1
/// always holds, and is halved until the modular exceeds 1. Bisection then
/// runs to relative width `tol` (at most 200 steps). The upper end of the
/// final bracket is returned, so modular(f / result) <= 1.
inline double luxemburg_norm(const MeasureSpace& space, const YoungFunction& phi, const SimpleFunction& f,
                             double tol = kNormTol) {
  if (!phi.superlinear()) throw Error(ErrorCode::NotYoungFunction, phi.name() + " is not a Young function");
  if (!f.bound_to(space)) throw Error(ErrorCode::SpaceMismatch, "function is not bound to this space");
  const double fmax = f.sup_norm();
  if (fmax == 0.0) return 0.0;
  const auto over = [&](double k) { return scaled_modular(space, phi, f, k) > 1.0; };

  double hi = fmax / phi.inverse(1.0 / space.total(), 0.0);
  std::size_t guard = 0;
  while (over(hi)) {
    hi *= 2.0;
    if (++guard > 2000) throw Error(ErrorCode::BracketFailure, "Luxemburg bracket did not close");
  }
  double lo = 0.5 * hi;
  guard = 0;
  while (!over(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2000 || lo == 0.0) return hi;
  }
  // over(lo) is true, over(hi) false: the predicate "feasible" flips inside.
  return bisect_predicate([&](double k) { return !over(k); }, lo, hi, tol, kNormMaxIter).hi;
}

/// N(E f) <= N(f) (1 + 1e-9). `max_violation` is N(Ef)/N(f) - 1.
inline CheckReport contraction_check(const Partition& part, const YoungFunction& phi, const SimpleFunction& f,
                                     double tol = 1e-9) {
  const auto& space = part.space();
  const double nf = luxemburg_norm(space, phi, f);
  const double nef = luxemburg_norm(space, phi, cond_exp(part, f));
  CheckReport rep(tol);
  rep.record(nf == 0.0 ? (nef == 0.0 ? -1.0 : 1.0) : nef / nf - 1.0);
  rep.cases = 1;
  return rep;
}

/// For |f| <= |g| atomwise: N(f) <= N(g) (1 + 1e-9).
inline CheckReport norm_monotonicity_check(const MeasureSpace& space, const YoungFunction& phi,
                                           const SimpleFunction& f, const SimpleFunction& g, double tol = 1e-9) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > std::abs(g[i])) {
      throw Error(ErrorCode::PreconditionViolated, "|f| <= |g| fails at atom " + std::to_string(i));
    }
  }
  const double nf = luxemburg_norm(space, phi, f);
  const double ng = luxemburg_norm(space, phi, g);
  CheckReport rep(tol);
  rep.record(ng == 0.0 ? (nf == 0.0 ? -1.0 : 1.0) : nf / ng - 1.0);
  rep.cases = 1;
  return rep;
}

}  // namespace emu
