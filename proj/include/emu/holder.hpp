#pragma once

// The generalized conditional-type Hoelder inequality
//
//   E(|fg|) <= C Phi^{-1}(E(Phi(|f|))) Psi^{-1}(E(Psi(|g|)))
//
// checked empirically, with constants from its sufficient conditions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "emu/error.hpp"
#include "emu/mspace.hpp"
#include "emu/numeric.hpp"
#include "emu/young.hpp"

namespace emu {

/// A Young function together with its complement. Construction spot-checks
/// psi against the numerical conjugate of phi.
class ConjugatePair {
 public:
  ConjugatePair(YoungFunction phi, YoungFunction psi) : phi_(std::move(phi)), psi_(std::move(psi)) {
    if (!phi_.superlinear() || !psi_.superlinear()) {
      throw Error(ErrorCode::NotYoungFunction, "conjugate pairs need superlinear functions");
    }
    for (double y : {0.25, 1.0, 4.0}) {
      const double expect = psi_(y);
      const double got = conjugate_numeric(phi_, y);
      if (std::abs(got - expect) > 1e-6 * std::max(1.0, std::abs(expect))) {
        throw Error(ErrorCode::ConjugateMismatch, psi_.name() + " is not the complement of " + phi_.name());
      }
    }
  }

  static ConjugatePair closed_form(const YoungFunction& phi) {
    auto psi = conjugate_closed_form(phi);
    if (!psi) throw Error(ErrorCode::NotYoungFunction, "no closed-form complement for " + phi.name());
    return ConjugatePair(phi, *psi);
  }

  static ConjugatePair numeric(const YoungFunction& phi) {
    return ConjugatePair(phi, YoungFunction::numeric_conjugate(phi));
  }

  const YoungFunction& phi() const noexcept { return phi_; }
  const YoungFunction& psi() const noexcept { return psi_; }

  /// Power-type pairs, for which the constant 1 holds for every E.
  bool homogeneous() const {
    return (phi_.is<kind::Power>() && psi_.is<kind::ConjugatePower>()) ||
           (phi_.is<kind::ConjugatePower>() && psi_.is<kind::Power>()) ||
           (phi_.is<kind::ScaledPower>() && psi_.is<kind::ScaledPower>());
  }

 private:
  YoungFunction phi_;
  YoungFunction psi_;
};

/// Block function Phi^{-1}(E(Phi(|f|))), one value per block.
inline std::vector<double> young_mean(const Partition& part, const YoungFunction& phi, const SimpleFunction& f) {
  auto means = block_means(part, f.map([&](double v) { return phi(v); }));
  for (double& m : means) m = phi.inverse(m, 0.0);
  return means;
}

struct GcthiRatio {
  double ratio = 0.0;
  std::size_t block = 0;
};

namespace detail {

inline double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace detail

/// max over blocks of E|fg| / (Phi^{-1}(E Phi|f|) Psi^{-1}(E Psi|g|)); 0/0
/// counts as 0 and positive/0 as +inf.
inline GcthiRatio gcthi_ratio_detail(const Partition& part, const ConjugatePair& pair, const SimpleFunction& f,
                                     const SimpleFunction& g) {
  part.require_bound(f);
  part.require_bound(g);
  const auto lhs = block_means(part, (f * g).abs());
  const auto nf = young_mean(part, pair.phi(), f);
  const auto ng = young_mean(part, pair.psi(), g);
  GcthiRatio out;
  for (std::size_t b = 0; b < lhs.size(); ++b) {
    const double r = detail::safe_ratio(lhs[b], nf[b] * ng[b]);
    if (r > out.ratio) out = {r, b};
  }
  return out;
}

inline double gcthi_ratio(const Partition& part, const ConjugatePair& pair, const SimpleFunction& f,
                          const SimpleFunction& g) {
  return gcthi_ratio_detail(part, pair, f, g).ratio;
}

/// Sampling law for randomized searches: log-uniform magnitudes with random
/// signs; each atom is zeroed with probability `zero_probability`.
struct SampleRange {
  double lo = 1e-3;
  double hi = 1e3;
  double zero_probability = 0.1;
  bool operator==(const SampleRange&) const = default;
};

inline SimpleFunction random_function(const MeasureSpace& space, Rng& rng, const SampleRange& range) {
  auto f = SimpleFunction::constant(space, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = rng.log_uniform(range.lo, range.hi);
    const double s = rng.sign();
    f[i] = rng.uniform() < range.zero_probability ? 0.0 : s * m;
  }
  return f;
}

inline SimpleFunction random_positive_function(const MeasureSpace& space, Rng& rng, const SampleRange& range) {
  auto f = SimpleFunction::constant(space, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.log_uniform(range.lo, range.hi);
  return f;
}

struct GcthiReport {
  double empirical_C = 0.0;
  std::vector<double> worst_f;
  std::vector<double> worst_g;
  std::size_t worst_block = 0;
  std::optional<double> claimed_C;
  bool holds_with_claimed = false;
  std::size_t samples = 0;
};

/// Randomized search for the largest GCTHI ratio over `budget` sampled pairs.
inline GcthiReport gcthi_search(const Partition& part, const ConjugatePair& pair, std::size_t budget,
                                std::uint64_t seed, const SampleRange& range = {},
                                std::optional<double> claimed = std::nullopt) {
  GcthiReport rep;
  rep.claimed_C = claimed;
  const auto& space = part.space();
  for (std::size_t s = 0; s < budget; ++s) {
    Rng rng(derive_seed(seed, s));
    const auto f = random_function(space, rng, range);
    const auto g = random_function(space, rng, range);
    const auto r = gcthi_ratio_detail(part, pair, f, g);
    if (r.ratio > rep.empirical_C || rep.worst_f.empty()) {
      rep.empirical_C = std::max(rep.empirical_C, r.ratio);
      rep.worst_f.assign(f.values().begin(), f.values().end());
      rep.worst_g.assign(g.values().begin(), g.values().end());
      rep.worst_block = r.block;
    }
  }
  rep.samples = budget;
  rep.holds_with_claimed = claimed && rep.empirical_C <= *claimed * (1.0 + 1e-9);
  return rep;
}

/// max over blocks of E(Phi(|f| / Phi^{-1}(E Phi|f|))); blocks where f
/// vanishes contribute 0.
inline double normalized_young_mean(const Partition& part, const YoungFunction& phi, const SimpleFunction& f) {
  const auto scale = part.lift(young_mean(part, phi, f));
  auto inner = SimpleFunction::constant(part.space(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) inner[i] = scale[i] == 0.0 ? 0.0 : phi(f[i] / scale[i]);
  const auto means = block_means(part, inner);
  return *std::max_element(means.begin(), means.end());
}

struct SplitConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double gcthi_constant() const { return c1 + c2; }
};

/// Empirical suprema of E(Phi(f / Phi^{-1}(E Phi f))) and the same for
/// (Psi, g) over `budget` sampled functions each.
inline SplitConstants split_constants(const Partition& part, const ConjugatePair& pair, std::size_t budget,
                                          std::uint64_t seed, const SampleRange& range = {}) {
  SplitConstants out;
  for (std::size_t s = 0; s < budget; ++s) {
    Rng rng(derive_seed(seed, s));
    const auto f = random_function(part.space(), rng, range);
    const auto g = random_function(part.space(), rng, range);
    out.c1 = std::max(out.c1, normalized_young_mean(part, pair.phi(), f));
    out.c2 = std::max(out.c2, normalized_young_mean(part, pair.psi(), g));
  }
  return out;
}

struct ProductBoundReport {
  double hypothesis_ratio = 0.0;  // max over blocks of E(fg) / (E f E g)
  bool hypothesis_holds = false;
  double gcthi_ratio = 0.0;
  bool conclusion_holds = false;
};

/// Tests E(fg) <= C E(f) E(g) for strictly positive f, g and, when it holds,
/// the GCTHI conclusion with the same C.
inline ProductBoundReport product_bound_check(const Partition& part, const ConjugatePair& pair, const SimpleFunction& f,
                                   const SimpleFunction& g, double c, double tol = 1e-12) {
  for (const auto* h : {&f, &g}) {
    for (double v : h->values()) {
      if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveInput, "product-bound inputs must be strictly positive");
    }
  }
  const auto efg = block_means(part, f * g);
  const auto ef = block_means(part, f);
  const auto eg = block_means(part, g);
  ProductBoundReport rep;
  for (std::size_t b = 0; b < efg.size(); ++b) rep.hypothesis_ratio = std::max(rep.hypothesis_ratio, efg[b] / (ef[b] * eg[b]));
  rep.hypothesis_holds = rep.hypothesis_ratio <= c * (1.0 + tol);
  rep.gcthi_ratio = gcthi_ratio(part, pair, f, g);
  rep.conclusion_holds = rep.gcthi_ratio <= c * (1.0 + 1e-9);
  return rep;
}

/// Largest E(fg) / (E f E g) seen over `budget` sampled positive pairs.
inline double product_bound_constant(const Partition& part, std::size_t budget, std::uint64_t seed,
                                   const SampleRange& range = {}) {
  double best = 0.0;
  for (std::size_t s = 0; s < budget; ++s) {
    Rng rng(derive_seed(seed, s));
    const auto f = random_positive_function(part.space(), rng, range);
    const auto g = random_positive_function(part.space(), rng, range);
    const auto efg = block_means(part, f * g);
    const auto ef = block_means(part, f);
    const auto eg = block_means(part, g);
    for (std::size_t b = 0; b < efg.size(); ++b) best = std::max(best, efg[b] / (ef[b] * eg[b]));
  }
  return best;
}

/// GCTHI constant from domination |f| <= C0 E|f|: then
/// |f| <= C0 Phi^{-1}(E Phi|f|) and likewise for g, so C = C0^2.
inline double domination_gcthi_constant(const Partition& part) {
  const double c0 = domination_constant(part);
  return c0 * c0;
}

/// A constant known to work for (E, pair): 1 for power-type pairs, C0^2
/// otherwise.
inline double certified_gcthi_constant(const Partition& part, const ConjugatePair& pair) {
  return pair.homogeneous() ? 1.0 : domination_gcthi_constant(part);
}

/// Claims C0^2 and checks it against a randomized search.
inline GcthiReport domination_to_gcthi(const Partition& part, const ConjugatePair& pair, std::size_t budget,
                                       std::uint64_t seed, const SampleRange& range = {}) {
  return gcthi_search(part, pair, budget, seed, range, domination_gcthi_constant(part));
}

}  // namespace emu
