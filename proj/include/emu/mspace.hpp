#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emu/check.hpp"
#include "emu/error.hpp"
#include "emu/numeric.hpp"
#include "emu/young.hpp"

namespace emu {

/// Finitely many Sigma-atoms with positive weights. Each instance gets a
/// unique id; copies share it and denote the same space.
class MeasureSpace {
 public:
  explicit MeasureSpace(std::vector<double> weights, std::vector<double> labels = {})
      : weights_(std::move(weights)), labels_(std::move(labels)), id_(next_id()) {
    if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "measure space needs at least one atom");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::InvalidArgument, "atom weights must be positive and finite");
      }
    }
    if (!labels_.empty() && labels_.size() != weights_.size()) {
      throw Error(ErrorCode::InvalidArgument, "labels must match the atom count");
    }
    total_ = pairwise_sum(weights_);
  }

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> labels() const noexcept { return labels_; }
  double total() const noexcept { return total_; }
  std::uint64_t id() const noexcept { return id_; }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  std::vector<double> weights_;
  std::vector<double> labels_;
  double total_ = 0.0;
  std::uint64_t id_;
};

/// A real function on the atoms of one space.
class SimpleFunction {
 public:
  SimpleFunction(const MeasureSpace& space, std::vector<double> values)
      : values_(std::move(values)), space_id_(space.id()) {
    if (values_.size() != space.size()) {
      throw Error(ErrorCode::SpaceMismatch, "function length " + std::to_string(values_.size()) +
                                                " does not match atom count " + std::to_string(space.size()));
    }
  }

  static SimpleFunction constant(const MeasureSpace& space, double c) {
    return SimpleFunction(space, std::vector<double>(space.size(), c));
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::uint64_t space_id() const noexcept { return space_id_; }

  bool bound_to(const MeasureSpace& space) const noexcept { return space_id_ == space.id(); }

  template <class F>
  SimpleFunction map(F&& f) const {
    SimpleFunction out = *this;
    for (double& v : out.values_) v = f(v);
    return out;
  }

  SimpleFunction abs() const {
    return map([](double v) { return std::abs(v); });
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  friend SimpleFunction operator*(const SimpleFunction& a, const SimpleFunction& b) {
    require_same(a, b);
    SimpleFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] *= b.values_[i];
    return out;
  }
  friend SimpleFunction operator+(const SimpleFunction& a, const SimpleFunction& b) {
    require_same(a, b);
    SimpleFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] += b.values_[i];
    return out;
  }
  friend SimpleFunction operator-(const SimpleFunction& a, const SimpleFunction& b) {
    require_same(a, b);
    SimpleFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] -= b.values_[i];
    return out;
  }
  friend SimpleFunction operator*(double c, const SimpleFunction& a) {
    return a.map([c](double v) { return c * v; });
  }

 private:
  static void require_same(const SimpleFunction& a, const SimpleFunction& b) {
    if (a.space_id_ != b.space_id_) throw Error(ErrorCode::SpaceMismatch, "functions live on different spaces");
  }

  std::vector<double> values_;
  std::uint64_t space_id_;
};

/// A sub-sigma-algebra given by its atoms: a partition of the atom indices
/// into nonempty disjoint blocks.
class Partition {
 public:
  Partition(std::shared_ptr<const MeasureSpace> space, std::vector<std::vector<std::size_t>> blocks)
      : space_(std::move(space)), blocks_(std::move(blocks)) {
    if (!space_) throw Error(ErrorCode::InvalidArgument, "partition needs a space");
    const std::size_t n = space_->size();
    block_of_.assign(n, kUnassigned);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (blocks_[b].empty()) throw Error(ErrorCode::InvalidArgument, "partition blocks must be nonempty");
      for (std::size_t i : blocks_[b]) {
        if (i >= n) throw Error(ErrorCode::InvalidArgument, "block index " + std::to_string(i) + " out of range");
        if (block_of_[i] != kUnassigned) {
          throw Error(ErrorCode::InvalidArgument, "atom " + std::to_string(i) + " appears in two blocks");
        }
        block_of_[i] = b;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (block_of_[i] == kUnassigned) {
        throw Error(ErrorCode::InvalidArgument, "atom " + std::to_string(i) + " is not covered");
      }
    }
    block_weight_.resize(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = blocks_[b];
      block_weight_[b] = pairwise_sum(blk.size(), [&](std::size_t k) { return space_->weight(blk[k]); });
    }
  }

  static Partition singletons(std::shared_ptr<const MeasureSpace> space) {
    std::vector<std::vector<std::size_t>> blocks(space->size());
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = {i};
    return Partition(std::move(space), std::move(blocks));
  }

  static Partition trivial(std::shared_ptr<const MeasureSpace> space) {
    std::vector<std::size_t> all(space->size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return Partition(std::move(space), {std::move(all)});
  }

  const MeasureSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const MeasureSpace>& space_ptr() const noexcept { return space_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  std::span<const std::size_t> block(std::size_t b) const { return blocks_[b]; }
  double block_weight(std::size_t b) const { return block_weight_[b]; }
  std::size_t block_of(std::size_t atom) const { return block_of_[atom]; }

  /// True when every block is a single atom (the sub-algebra is all of Sigma).
  bool is_finest() const noexcept { return blocks_.size() == space_->size(); }

  SimpleFunction indicator(std::size_t b) const {
    auto f = SimpleFunction::constant(*space_, 0.0);
    for (std::size_t i : blocks_[b]) f[i] = 1.0;
    return f;
  }

  /// Lifts one value per block to a block-constant function.
  SimpleFunction lift(std::span<const double> per_block) const {
    if (per_block.size() != blocks_.size()) throw Error(ErrorCode::InvalidArgument, "one value per block expected");
    auto f = SimpleFunction::constant(*space_, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = per_block[block_of_[i]];
    return f;
  }

  /// Block values of a block-constant function (first atom of each block).
  std::vector<double> per_block(const SimpleFunction& f) const {
    std::vector<double> out(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) out[b] = f[blocks_[b].front()];
    return out;
  }

  /// Whether f is constant on every block up to `rel_tol` of its block scale.
  bool is_measurable(const SimpleFunction& f, double rel_tol = 1e-12) const {
    for (const auto& blk : blocks_) {
      const double ref = f[blk.front()];
      for (std::size_t i : blk) {
        if (std::abs(f[i] - ref) > rel_tol * std::max(1.0, std::abs(ref))) return false;
      }
    }
    return true;
  }

  void require_bound(const SimpleFunction& f) const {
    if (!f.bound_to(*space_)) throw Error(ErrorCode::SpaceMismatch, "function is not bound to the partition's space");
  }

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  std::shared_ptr<const MeasureSpace> space_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<double> block_weight_;
};

/// Per-block weighted means of f.
inline std::vector<double> block_means(const Partition& part, const SimpleFunction& f) {
  part.require_bound(f);
  const auto& space = part.space();
  std::vector<double> out(part.block_count());
  for (std::size_t b = 0; b < out.size(); ++b) {
    const auto blk = part.block(b);
    const double mass =
        pairwise_sum(blk.size(), [&](std::size_t k) { return space.weight(blk[k]) * f[blk[k]]; });
    out[b] = mass / part.block_weight(b);
  }
  return out;
}

/// Conditional expectation: on each block B, the value
/// (sum_{i in B} w_i f_i) / (sum_{i in B} w_i).
inline SimpleFunction cond_exp(const Partition& part, const SimpleFunction& f) {
  return part.lift(block_means(part, f));
}

struct SpaceAndPartition {
  std::shared_ptr<const MeasureSpace> space;
  Partition partition;
};

/// [-1, 1] with d(mu) = dx/2 cut into 2 n_half equal cells; cell i is paired
/// with its mirror cell, so E f(x) = (f(x) + f(-x)) / 2.
inline SpaceAndPartition build_symmetric_space(std::size_t n_half) {
  if (n_half == 0) throw Error(ErrorCode::InvalidArgument, "n_half must be positive");
  const std::size_t n = 2 * n_half;
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<double> labels(n);
  const double width = 2.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = -1.0 + (static_cast<double>(i) + 0.5) * width;
  auto space = std::make_shared<const MeasureSpace>(std::move(weights), std::move(labels));
  std::vector<std::vector<std::size_t>> blocks;
  blocks.reserve(n_half);
  for (std::size_t i = 0; i < n_half; ++i) blocks.push_back({i, n - 1 - i});
  Partition part(space, std::move(blocks));
  return {std::move(space), std::move(part)};
}

/// [0, 1] cut into n * m equal cells; the blocks are the orbits of the shift
/// x -> x + 1/n (mod 1), i.e. {i, i + m, ..., i + (n-1) m}.
///
/// Note: E here is the orbit average (1/n) sum_j f(s^j x). Written as a plain
/// sum it would not be idempotent.
inline SpaceAndPartition build_rotation_space(std::size_t n, std::size_t cells_per_orbit) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "rotation order n must be at least 2");
  if (cells_per_orbit == 0) throw Error(ErrorCode::InvalidArgument, "cells_per_orbit must be positive");
  const std::size_t total = n * cells_per_orbit;
  std::vector<double> weights(total, 1.0 / static_cast<double>(total));
  std::vector<double> labels(total);
  for (std::size_t i = 0; i < total; ++i) labels[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(total);
  auto space = std::make_shared<const MeasureSpace>(std::move(weights), std::move(labels));
  std::vector<std::vector<std::size_t>> blocks(cells_per_orbit);
  for (std::size_t i = 0; i < cells_per_orbit; ++i) {
    for (std::size_t j = 0; j < n; ++j) blocks[i].push_back(i + j * cells_per_orbit);
  }
  Partition part(space, std::move(blocks));
  return {std::move(space), std::move(part)};
}

/// E(fg) = E(f) g for block-constant g. Also checks positivity of E on f
/// when f >= 0. Throws NotMeasurable if g varies within a block.
inline CheckReport check_averaging(const Partition& part, const SimpleFunction& f, const SimpleFunction& g,
                                   double tol = 1e-12) {
  part.require_bound(f);
  part.require_bound(g);
  if (!part.is_measurable(g)) throw Error(ErrorCode::NotMeasurable, "g varies within a block");
  const auto lhs = cond_exp(part, f * g);
  const auto ef = cond_exp(part, f);
  const auto rhs = ef * g;
  CheckReport rep(tol);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double scale = std::max(1.0, std::abs(rhs[i]));
    rep.record(std::abs(lhs[i] - rhs[i]) / scale, 0, i);
  }
  const bool nonneg = std::all_of(f.values().begin(), f.values().end(), [](double v) { return v >= 0.0; });
  if (nonneg) {
    for (std::size_t i = 0; i < f.size(); ++i) rep.record(-ef[i], 0, i, 0.0);
  }
  rep.cases = 1;
  return rep;
}

/// Phi(E f) <= E(Phi(f)) atomwise. The violation at an atom is
/// (Phi(Ef) - E Phi(f)) / max(1, E Phi(f)).
inline CheckReport jensen_check(const Partition& part, const SimpleFunction& f, const YoungFunction& phi,
                                double tol = 1e-12) {
  const auto ef = cond_exp(part, f);
  const auto ephi = cond_exp(part, f.map([&](double v) { return phi(v); }));
  CheckReport rep(tol);
  for (std::size_t i = 0; i < f.size(); ++i) {
    rep.record((phi(ef[i]) - ephi[i]) / std::max(1.0, ephi[i]), 0, i);
  }
  rep.cases = 1;
  return rep;
}

/// F(x) = min over coefficient vectors a of sum_i a_i x_i, with a >= 0.
class MinOfLinear {
 public:
  explicit MinOfLinear(std::vector<std::vector<double>> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "MinOfLinear needs at least one functional");
    const std::size_t n = coeffs_.front().size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "MinOfLinear functionals must be nonempty");
    for (const auto& a : coeffs_) {
      if (a.size() != n) throw Error(ErrorCode::InvalidArgument, "MinOfLinear functionals must share a dimension");
      for (double c : a) {
        if (!(c >= 0.0)) throw Error(ErrorCode::NegativeInput, "MinOfLinear coefficients must be nonnegative");
      }
    }
  }

  /// sqrt(x y) approximated from above by its tangent planes
  /// (t x + y / t) / 2 for `count` log-spaced t in [t_lo, t_hi].
  static MinOfLinear sqrt_product_tangents(std::size_t count, double t_lo = 1e-2, double t_hi = 1e2) {
    std::vector<std::vector<double>> cs;
    for (double t : Grid{t_lo, t_hi, count}.values()) cs.push_back({0.5 * t, 0.5 / t});
    return MinOfLinear(std::move(cs));
  }

  std::size_t dimension() const noexcept { return coeffs_.front().size(); }
  const std::vector<std::vector<double>>& coefficients() const noexcept { return coeffs_; }

  double operator()(std::span<const double> x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : coeffs_) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
      best = std::min(best, s);
    }
    return best;
  }

 private:
  std::vector<std::vector<double>> coeffs_;
};

/// E(F(f_1, ..., f_n)) <= F(E f_1, ..., E f_n) atomwise for nonnegative f_k.
inline CheckReport generalized_jensen_check(const Partition& part, std::span<const SimpleFunction> fs,
                                            const MinOfLinear& F, double tol = 1e-12) {
  if (fs.size() != F.dimension()) throw Error(ErrorCode::InvalidArgument, "F dimension does not match input count");
  for (const auto& f : fs) {
    part.require_bound(f);
    for (double v : f.values()) {
      if (v < 0.0) throw Error(ErrorCode::NegativeInput, "generalized Jensen inputs must be nonnegative");
    }
  }
  const std::size_t n_atoms = part.space().size();
  std::vector<double> point(fs.size());
  auto composed = SimpleFunction::constant(part.space(), 0.0);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    for (std::size_t k = 0; k < fs.size(); ++k) point[k] = fs[k][i];
    composed[i] = F(point);
  }
  const auto lhs = cond_exp(part, composed);
  std::vector<SimpleFunction> efs;
  efs.reserve(fs.size());
  for (const auto& f : fs) efs.push_back(cond_exp(part, f));
  CheckReport rep(tol);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    for (std::size_t k = 0; k < fs.size(); ++k) point[k] = efs[k][i];
    const double rhs = F(point);
    rep.record((lhs[i] - rhs) / std::max(1.0, rhs), 0, i);
  }
  rep.cases = 1;
  return rep;
}

/// Smallest C0 with |f| <= C0 E(|f|) for every f: max over blocks of
/// mu(B) / min_{i in B} w_i.
inline double domination_constant(const Partition& part) {
  double c0 = 0.0;
  for (std::size_t b = 0; b < part.block_count(); ++b) {
    double wmin = std::numeric_limits<double>::infinity();
    for (std::size_t i : part.block(b)) wmin = std::min(wmin, part.space().weight(i));
    c0 = std::max(c0, part.block_weight(b) / wmin);
  }
  return c0;
}

/// |f| <= C0 E(|f|) atomwise, relative to max(1, C0 E|f|).
inline CheckReport domination_check(const Partition& part, const SimpleFunction& f, double c0, double tol = 1e-12) {
  const auto af = f.abs();
  const auto eaf = cond_exp(part, af);
  CheckReport rep(tol);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double rhs = c0 * eaf[i];
    rep.record((af[i] - rhs) / std::max(1.0, rhs), 0, i);
  }
  rep.cases = 1;
  return rep;
}

}  // namespace emu
