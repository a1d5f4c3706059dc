#pragma once

// The operator T = E M_u : f -> E(u f) on a finite measure space, with norm
// bounds and estimates, compactness level sets and truncations, spectrum,
// resolvent and the essential-norm bound.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "emu/error.hpp"
#include "emu/holder.hpp"
#include "emu/mspace.hpp"
#include "emu/numeric.hpp"
#include "emu/orlicz.hpp"
#include "emu/young.hpp"

namespace emu {

class EmuOperator {
 public:
  EmuOperator(Partition part, SimpleFunction u) : part_(std::move(part)), u_(std::move(u)) {
    part_.require_bound(u_);
    const auto& space = part_.space();
    const std::size_t n = space.size();
    matrix_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t b = 0; b < part_.block_count(); ++b) {
      const auto blk = part_.block(b);
      const double mu = part_.block_weight(b);
      for (std::size_t i : blk) {
        for (std::size_t j : blk) {
          matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = space.weight(j) * u_[j] / mu;
        }
      }
    }
  }

  const Partition& partition() const noexcept { return part_; }
  const MeasureSpace& space() const noexcept { return part_.space(); }
  const SimpleFunction& multiplier() const noexcept { return u_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  /// T f = E(u f).
  SimpleFunction apply(const SimpleFunction& f) const {
    part_.require_bound(f);
    return cond_exp(part_, u_ * f);
  }

  /// M f through the cached dense matrix.
  SimpleFunction apply_matrix(const SimpleFunction& f) const {
    part_.require_bound(f);
    const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(f.size()));
    const Eigen::VectorXd y = matrix_ * x;
    return SimpleFunction(space(), std::vector<double>(y.data(), y.data() + y.size()));
  }

  /// Block values of E(u).
  std::vector<double> eu() const { return block_means(part_, u_); }

  /// The operator with multiplier u * mask, mask a 0/1 value per block.
  EmuOperator restricted(const std::vector<bool>& keep_block) const {
    auto v = u_;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!keep_block[part_.block_of(i)]) v[i] = 0.0;
    }
    return EmuOperator(part_, std::move(v));
  }

 private:
  Partition part_;
  SimpleFunction u_;
  Eigen::MatrixXd matrix_;
};

inline SimpleFunction apply(const EmuOperator& op, const SimpleFunction& f) { return op.apply(f); }

/// ess sup |E(u)|: the largest block value in absolute terms.
inline double eu_sup(const EmuOperator& op) {
  double m = 0.0;
  for (double v : op.eu()) m = std::max(m, std::abs(v));
  return m;
}

/// Per-block values of Psi^{-1}(E(Psi(|u|))).
inline std::vector<double> level_values(const EmuOperator& op, const YoungFunction& psi) {
  return young_mean(op.partition(), psi, op.multiplier());
}

/// C * || Psi^{-1}(E(Psi(|u|))) ||_inf.
inline double norm_upper_bound(const EmuOperator& op, const ConjugatePair& pair, double c) {
  const auto lv = level_values(op, pair.psi());
  return c * *std::max_element(lv.begin(), lv.end());
}

struct LevelSetReport {
  double epsilon = 0.0;
  std::vector<std::size_t> atom_blocks;
  std::size_t count = 0;
};

/// Blocks where Psi^{-1}(E(Psi(|u|))) >= epsilon.
inline LevelSetReport level_set(const EmuOperator& op, const YoungFunction& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "level_set needs epsilon > 0");
  const auto lv = level_values(op, psi);
  LevelSetReport rep;
  rep.epsilon = epsilon;
  for (std::size_t b = 0; b < lv.size(); ++b) {
    if (lv[b] >= epsilon) rep.atom_blocks.push_back(b);
  }
  rep.count = rep.atom_blocks.size();
  return rep;
}

namespace detail {

inline std::vector<bool> level_mask(const EmuOperator& op, const YoungFunction& psi, double epsilon) {
  std::vector<bool> keep(op.partition().block_count(), false);
  for (std::size_t b : level_set(op, psi, epsilon).atom_blocks) keep[b] = true;
  return keep;
}

}  // namespace detail

/// T_eps f = E(u f chi_{N_eps}): finite rank, at most one rank per kept block.
inline EmuOperator truncate(const EmuOperator& op, const YoungFunction& psi, double epsilon) {
  return op.restricted(detail::level_mask(op, psi, epsilon));
}

/// T - T_eps, i.e. the operator with multiplier u chi_{Omega \ N_eps}.
inline EmuOperator truncation_remainder(const EmuOperator& op, const YoungFunction& psi, double epsilon) {
  auto keep = detail::level_mask(op, psi, epsilon);
  keep.flip();
  return op.restricted(keep);
}

/// Numerical rank by singular values above rel_tol * sigma_max.
inline std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

struct NormEstimate {
  double lower_bound = 0.0;
  std::vector<double> argmax;
  std::size_t evaluations = 0;
};

struct NormSearchOptions {
  std::size_t budget = 2000;  // ratio evaluations
  std::size_t restarts = 4;
  std::uint64_t seed = 1;
};

/// Lower bound on ||T|| over L^Phi: the best N(Tf)/N(f) found by evaluating
/// every block indicator, then several multi-start coordinate ascents
/// (perturb one coordinate; keep improvements and widen the step, otherwise
/// shrink it). The first ascent starts from the best indicator. Deterministic
/// given the seed.
inline NormEstimate norm_estimate(const EmuOperator& op, const YoungFunction& phi, const NormSearchOptions& opt) {
  if (!phi.superlinear()) throw Error(ErrorCode::NotYoungFunction, phi.name() + " is not a Young function");
  const auto& space = op.space();
  const auto& part = op.partition();
  NormEstimate best;
  std::size_t used = 0;
  const auto ratio = [&](const SimpleFunction& f) {
    ++used;
    const double nf = luxemburg_norm(space, phi, f);
    if (nf == 0.0) return 0.0;
    return luxemburg_norm(space, phi, op.apply(f)) / nf;
  };
  const auto offer = [&](const SimpleFunction& f, double r) {
    if (r > best.lower_bound || best.argmax.empty()) {
      best.lower_bound = std::max(best.lower_bound, r);
      best.argmax.assign(f.values().begin(), f.values().end());
    }
  };

  // Indicators go in decreasing |E(u)(B)| order, so a truncated sweep still
  // sees the blocks with the largest guaranteed ratio.
  const auto eu = op.eu();
  std::vector<std::size_t> order(part.block_count());
  for (std::size_t b = 0; b < order.size(); ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(eu[a]) > std::abs(eu[b]); });
  const std::size_t indicator_budget = std::min(part.block_count(), opt.budget / 2);
  std::size_t best_block = 0;
  double best_block_ratio = -1.0;
  for (std::size_t k = 0; k < indicator_budget; ++k) {
    const std::size_t b = order[k];
    const auto chi = part.indicator(b);
    const double r = ratio(chi);
    offer(chi, r);
    if (r > best_block_ratio) {
      best_block_ratio = r;
      best_block = b;
    }
  }

  const std::size_t restarts = std::max<std::size_t>(1, opt.restarts);
  const std::size_t remaining = opt.budget > used ? opt.budget - used : 0;
  const std::size_t per_restart = remaining / restarts;
  for (std::size_t k = 0; k < restarts && per_restart > 1; ++k) {
    Rng rng(derive_seed(opt.seed, k));
    SimpleFunction f = (k == 0 && indicator_budget > 0) ? part.indicator(best_block)
                                                        : random_function(space, rng, {1e-2, 1e2, 0.0});
    const std::size_t stop = used + per_restart;
    double current = ratio(f);
    offer(f, current);
    double step = 0.5;
    while (used < stop && step > 1e-9) {
      const std::size_t i = rng.index(f.size());
      const double scale = std::max(f.sup_norm(), 1e-300);
      auto trial = f;
      trial[i] += rng.sign() * step * scale;
      const double r = ratio(trial);
      if (r > current) {
        f = std::move(trial);
        current = r;
        offer(f, r);
        step *= 1.5;
      } else {
        step *= 0.8;
      }
    }
  }
  best.evaluations = used;
  return best;
}

inline NormEstimate norm_estimate(const EmuOperator& op, const YoungFunction& phi, std::size_t budget,
                                  std::uint64_t seed) {
  return norm_estimate(op, phi, NormSearchOptions{budget, 4, seed});
}

struct GapReport {
  double epsilon = 0.0;
  double estimate = 0.0;  // lower bound on ||T - T_eps||
  double bound = 0.0;     // C * epsilon
  double margin = 0.0;    // bound - estimate
  bool passed = false;
};

/// Estimates ||T - T_eps|| and checks it against C * epsilon (1 + 1e-6).
inline GapReport truncation_gap_check(const EmuOperator& op, const ConjugatePair& pair, double c, double epsilon,
                                      std::size_t budget, std::uint64_t seed) {
  const auto rest = truncation_remainder(op, pair.psi(), epsilon);
  GapReport rep;
  rep.epsilon = epsilon;
  rep.estimate = rest.multiplier().is_zero() ? 0.0 : norm_estimate(rest, pair.phi(), budget, seed).lower_bound;
  rep.bound = c * epsilon;
  rep.margin = rep.bound - rep.estimate;
  rep.passed = rep.estimate <= rep.bound * (1.0 + 1e-6);
  return rep;
}

struct SpectrumReport {
  std::vector<double> predicted;
  std::vector<double> computed;
  double max_match_distance = 0.0;
  std::size_t complex_rejected = 0;
  double max_imag = 0.0;

  bool matches(double rel_tol = 1e-8) const {
    double scale = 0.0;
    for (double v : predicted) scale = std::max(scale, std::abs(v));
    return complex_rejected == 0 && computed.size() == predicted.size() &&
           max_match_distance <= rel_tol * (1.0 + scale);
  }
};

/// Predicted spectrum {E(u)(B)} plus (atoms - blocks) zeros, against the
/// eigenvalues of the dense matrix. Each block contributes a rank-one
/// sub-matrix with trace E(u)(B). Eigenvalues with imaginary part above
/// 1e-8 are rejected and counted instead of rounded.
inline SpectrumReport spectrum(const EmuOperator& op) {
  SpectrumReport rep;
  rep.predicted = op.eu();
  const std::size_t zeros = op.space().size() - op.partition().block_count();
  rep.predicted.insert(rep.predicted.end(), zeros, 0.0);
  std::sort(rep.predicted.begin(), rep.predicted.end());

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(op.matrix(), false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigenvalue solver failed");
  for (const auto& z : solver.eigenvalues()) {
    rep.max_imag = std::max(rep.max_imag, std::abs(z.imag()));
    if (std::abs(z.imag()) > 1e-8) {
      ++rep.complex_rejected;
    } else {
      rep.computed.push_back(z.real());
    }
  }
  std::sort(rep.computed.begin(), rep.computed.end());
  // Sorted order is the optimal bottleneck pairing on the real line.
  const std::size_t n = std::min(rep.predicted.size(), rep.computed.size());
  for (std::size_t i = 0; i < n; ++i) {
    rep.max_match_distance = std::max(rep.max_match_distance, std::abs(rep.predicted[i] - rep.computed[i]));
  }
  if (rep.predicted.size() != rep.computed.size()) rep.max_match_distance = std::numeric_limits<double>::infinity();
  return rep;
}

/// Distance from lambda to {E(u)(B)} union {0}.
inline double resolvent_margin(const EmuOperator& op, double lambda) {
  double m = std::abs(lambda);
  for (double v : op.eu()) m = std::min(m, std::abs(v - lambda));
  return m;
}

/// S f = (T f - f (E(u) - lambda)) / (lambda (E(u) - lambda)), the inverse of
/// T - lambda I for lambda outside the spectrum.
inline SimpleFunction resolvent_apply(const EmuOperator& op, double lambda, const SimpleFunction& f) {
  if (resolvent_margin(op, lambda) < 1e-12) {
    throw Error(ErrorCode::SingularLambda, "lambda is within 1e-12 of the spectrum");
  }
  const auto eu = op.partition().lift(op.eu());
  const auto tf = op.apply(f);
  auto out = tf;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = eu[i] - lambda;
    out[i] = (tf[i] - f[i] * d) / (lambda * d);
  }
  return out;
}

struct ResolventReport {
  double margin = 0.0;
  double left_residual = 0.0;   // ||S (T - lambda) f - f||_inf / ||f||_inf
  double right_residual = 0.0;  // ||(T - lambda) S f - f||_inf / ||f||_inf
  bool passed = false;
};

inline ResolventReport resolvent_check(const EmuOperator& op, double lambda, const SimpleFunction& f,
                                       double tol = 1e-9) {
  ResolventReport rep;
  rep.margin = resolvent_margin(op, lambda);
  const auto shifted = [&](const SimpleFunction& g) { return op.apply(g) - lambda * g; };
  const double scale = std::max(f.sup_norm(), std::numeric_limits<double>::min());
  rep.left_residual = (resolvent_apply(op, lambda, shifted(f)) - f).sup_norm() / scale;
  rep.right_residual = (shifted(resolvent_apply(op, lambda, f)) - f).sup_norm() / scale;
  rep.passed = rep.left_residual <= tol && rep.right_residual <= tol;
  return rep;
}

struct ResolventSweepRow {
  double distance = 0.0;
  double residual = 0.0;   // max of both residuals
  double s_norm = 0.0;     // ||S f||_inf / ||f||_inf
};

/// Residuals and amplification of S as lambda approaches `target` from above.
inline std::vector<ResolventSweepRow> resolvent_sweep(const EmuOperator& op, const SimpleFunction& f, double target,
                                                      const std::vector<double>& distances) {
  std::vector<ResolventSweepRow> rows;
  for (double d : distances) {
    const double lambda = target + d;
    ResolventSweepRow row;
    row.distance = d;
    try {
      const auto rep = resolvent_check(op, lambda, f);
      row.residual = std::max(rep.left_residual, rep.right_residual);
      row.s_norm = resolvent_apply(op, lambda, f).sup_norm() / f.sup_norm();
    } catch (const Error&) {
      row.residual = std::numeric_limits<double>::infinity();
      row.s_norm = std::numeric_limits<double>::infinity();
    }
    rows.push_back(row);
  }
  return rows;
}

/// Multiplier law indexed by 1-based block number.
struct BlockLaw {
  enum class Type { Reciprocal, Flat, LogGrowth, Zero, Custom };
  Type type = Type::Flat;
  std::vector<double> values;  // Custom only

  double operator()(std::size_t j) const {
    switch (type) {
      case Type::Reciprocal: return 1.0 / static_cast<double>(j);
      case Type::Flat: return 1.0;
      case Type::LogGrowth: return std::log1p(static_cast<double>(j));
      case Type::Zero: return 0.0;
      case Type::Custom:
        if (j - 1 >= values.size()) {
          throw Error(ErrorCode::InvalidArgument, "custom law has no value for block " + std::to_string(j));
        }
        return values[j - 1];
    }
    return 0.0;
  }

  bool operator==(const BlockLaw&) const = default;
};

/// A sequence of spaces with growing block counts: member m has m blocks of
/// `atoms_per_block` equal-weight atoms (total measure 1) and u = law(j) on
/// block j.
struct RefinementFamily {
  std::vector<std::size_t> sizes;
  std::size_t atoms_per_block = 2;
  BlockLaw law;

  EmuOperator member(std::size_t m) const {
    if (m == 0 || atoms_per_block == 0) throw Error(ErrorCode::InvalidArgument, "family members need atoms");
    const std::size_t n = m * atoms_per_block;
    auto space = std::make_shared<const MeasureSpace>(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    std::vector<std::vector<std::size_t>> blocks(m);
    std::vector<double> u(n);
    for (std::size_t j = 0; j < m; ++j) {
      const double v = law(j + 1);
      for (std::size_t a = 0; a < atoms_per_block; ++a) {
        blocks[j].push_back(j * atoms_per_block + a);
        u[j * atoms_per_block + a] = v;
      }
    }
    Partition part(space, std::move(blocks));
    SimpleFunction uf(*space, std::move(u));
    return EmuOperator(std::move(part), std::move(uf));
  }

  std::vector<EmuOperator> members() const {
    std::vector<EmuOperator> out;
    for (std::size_t m : sizes) out.push_back(member(m));
    return out;
  }
};

/// Finite-space stand-in for "finitely many atoms": at most
/// ceil(scale * m^exponent) blocks out of m.
struct AtomCutoff {
  double scale = 1.0;
  double exponent = 0.5;

  bool operator==(const AtomCutoff&) const = default;

  std::size_t operator()(std::size_t m) const {
    return static_cast<std::size_t>(std::ceil(scale * std::pow(static_cast<double>(m), exponent)));
  }
};

/// inf{eps > 0 : |N_eps| <= K} = the (K+1)-th largest level (0 if none).
inline double beta_surrogate(std::vector<double> levels, std::size_t cutoff) {
  if (cutoff >= levels.size()) return 0.0;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  return std::max(0.0, levels[cutoff]);
}

struct EssentialNormMember {
  std::size_t blocks = 0;
  std::size_t cutoff = 0;
  double beta = 0.0;
  GapReport gap;
};

struct EssentialNormReport {
  std::vector<EssentialNormMember> members;
  bool gaps_ok = true;

  std::vector<double> betas() const {
    std::vector<double> b;
    for (const auto& m : members) b.push_back(m.beta);
    return b;
  }

  /// Each beta at most 1% above its predecessor, and the last strictly
  /// below the first.
  bool beta_decreasing() const {
    const auto b = betas();
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i] > b[i - 1] * 1.01) return false;
    }
    return b.size() < 2 || b.back() < b.front();
  }

  /// Every beta within 1% of `level`.
  bool beta_stable_at(double level) const {
    for (double v : betas()) {
      if (std::abs(v - level) > 0.01 * std::abs(level)) return false;
    }
    return true;
  }
};

struct EssentialNormOptions {
  AtomCutoff cutoff;
  double delta = 1e-3;
  std::size_t budget = 400;
  std::uint64_t seed = 1;
};

/// For each family member: beta_m and the truncation gap at eps = beta_m +
/// delta, checked against C (beta_m + delta).
inline EssentialNormReport essential_norm_bound(const RefinementFamily& family, const ConjugatePair& pair, double c,
                                                const EssentialNormOptions& opt = {}) {
  EssentialNormReport rep;
  for (std::size_t k = 0; k < family.sizes.size(); ++k) {
    const auto op = family.member(family.sizes[k]);
    EssentialNormMember mem;
    mem.blocks = family.sizes[k];
    mem.cutoff = opt.cutoff(mem.blocks);
    mem.beta = beta_surrogate(level_values(op, pair.psi()), mem.cutoff);
    mem.gap = truncation_gap_check(op, pair, c, mem.beta + opt.delta, opt.budget, derive_seed(opt.seed, k));
    rep.gaps_ok = rep.gaps_ok && mem.gap.passed;
    rep.members.push_back(mem);
  }
  return rep;
}

struct HypothesisFlags {
  bool gcthi = false;               // (E, Phi) satisfies the GCTHI
  bool delta_prime_global = false;  // Phi in Delta' globally
  bool psi_prec_x = false;          // Psi weaker than the identity
  bool operator==(const HypothesisFlags&) const = default;
};

enum class Verdict { Yes, No, Undetermined };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

struct ClassifierReport {
  Verdict bounded = Verdict::Undetermined;
  Verdict compact = Verdict::Undetermined;
  std::vector<double> level_sups;            // ||Psi^{-1}(E Psi u)||_inf per member
  std::vector<double> eu_sups;               // ||E u||_inf per member
  std::vector<double> epsilons;
  std::vector<std::vector<std::size_t>> level_counts;  // [member][epsilon]
  HypothesisFlags flags;
  std::vector<std::string> basis;            // which implication produced each verdict
};

namespace detail {

// Running sup over the family stays within 1% at the last step.
inline bool sup_stabilizes(const std::vector<double>& s) {
  if (s.size() < 2) return true;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) prev = std::max(prev, s[i]);
  const double last = std::max(prev, s.back());
  return last <= prev * 1.01;
}

inline bool count_stabilizes(std::size_t prev, std::size_t last) {
  return static_cast<double>(last) <= static_cast<double>(prev) * 1.01 &&
         static_cast<double>(prev) <= static_cast<double>(last) * 1.01;
}

}  // namespace detail

/// Boundedness and compactness verdicts on a refinement family. Infinite
/// behaviour is read off trends: a quantity is finite when its running sup
/// (or level-set count) is stable within 1% between the last two members.
/// Each direction is only asserted when the supplied hypotheses license it.
inline ClassifierReport boundedness_classifier(const RefinementFamily& family, const ConjugatePair& pair,
                                               const HypothesisFlags& flags, const std::vector<double>& epsilons) {
  if (!flags.gcthi && !flags.delta_prime_global && !flags.psi_prec_x) {
    throw Error(ErrorCode::HypothesisMissing, "no hypothesis licenses either direction");
  }
  ClassifierReport rep;
  rep.flags = flags;
  rep.epsilons = epsilons;
  std::vector<std::vector<std::size_t>> eu_counts;
  for (const auto& op : family.members()) {
    const auto lv = level_values(op, pair.psi());
    const auto eu = op.eu();
    rep.level_sups.push_back(*std::max_element(lv.begin(), lv.end()));
    rep.eu_sups.push_back(eu_sup(op));
    std::vector<std::size_t> counts, ecounts;
    for (double e : epsilons) {
      counts.push_back(static_cast<std::size_t>(std::count_if(lv.begin(), lv.end(), [e](double v) { return v >= e; })));
      ecounts.push_back(static_cast<std::size_t>(std::count_if(eu.begin(), eu.end(), [e](double v) { return v >= e; })));
    }
    rep.level_counts.push_back(std::move(counts));
    eu_counts.push_back(std::move(ecounts));
  }

  const bool necessary = flags.delta_prime_global || flags.psi_prec_x;
  const bool levels_bounded = detail::sup_stabilizes(rep.level_sups);
  if (!detail::sup_stabilizes(rep.eu_sups)) {
    rep.bounded = Verdict::No;
    rep.basis.emplace_back("bounded=no: ||E(u)||_inf grows (bounded T forces E(u) in L^inf)");
  } else if (levels_bounded && flags.gcthi) {
    rep.bounded = Verdict::Yes;
    rep.basis.emplace_back("bounded=yes: GCTHI and level sup stable");
  } else if (!levels_bounded && necessary) {
    rep.bounded = Verdict::No;
    rep.basis.emplace_back(flags.delta_prime_global ? "bounded=no: Delta' and level sup grows"
                                                    : "bounded=no: Psi < x and level sup grows");
  }

  if (rep.bounded == Verdict::No) {
    rep.compact = Verdict::No;
    rep.basis.emplace_back("compact=no: T is unbounded");
    return rep;
  }
  const std::size_t k = rep.level_counts.size();
  bool levels_finite = true;
  bool eu_finite = true;
  for (std::size_t e = 0; e < epsilons.size() && k >= 2; ++e) {
    levels_finite = levels_finite && detail::count_stabilizes(rep.level_counts[k - 2][e], rep.level_counts[k - 1][e]);
    eu_finite = eu_finite && detail::count_stabilizes(eu_counts[k - 2][e], eu_counts[k - 1][e]);
  }
  if (rep.bounded == Verdict::Yes && !eu_finite) {
    rep.compact = Verdict::No;
    rep.basis.emplace_back("compact=no: N_eps(E(u)) count grows");
  } else if (levels_finite && flags.gcthi) {
    rep.compact = Verdict::Yes;
    rep.basis.emplace_back("compact=yes: GCTHI and every N_eps count stable");
  } else if (!levels_finite && necessary && rep.bounded == Verdict::Yes) {
    rep.compact = Verdict::No;
    rep.basis.emplace_back("compact=no: N_eps count grows under Delta' or Psi < x");
  }
  return rep;
}

/// Writes the matrix as CSV with 17 significant digits.
inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace emu
