#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "emu/opemu.hpp"
#include "support.hpp"

using emu::BlockLaw;
using emu::ConjugatePair;
using emu::EmuOperator;
using emu::Error;
using emu::ErrorCode;
using emu::MeasureSpace;
using emu::Partition;
using emu::RefinementFamily;
using emu::SimpleFunction;
using emu::Verdict;
using emu::YoungFunction;

namespace {

EmuOperator random_operator(emu::Rng& rng, std::size_t max_atoms = 12) {
  auto sc = emu::test::random_scenario(rng, max_atoms);
  auto u = emu::random_function(*sc.space, rng, {1e-2, 1e1, 0.1});
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::abs(u[i]);
  return EmuOperator(sc.part, u);
}

EmuOperator quarter_example() {
  auto s = std::make_shared<const MeasureSpace>(std::vector<double>(4, 0.25));
  Partition part(s, {{0, 1}, {2, 3}});
  return EmuOperator(part, SimpleFunction(*s, {1, 3, 2, 2}));
}

RefinementFamily family(BlockLaw::Type t) { return RefinementFamily{{16, 64, 256}, 2, BlockLaw{t, {}}}; }

}  // namespace

TEST(Operator, MatrixStructure) {
  emu::Rng rng(61);
  for (int c = 0; c < 50; ++c) {
    const auto op = random_operator(rng);
    const auto& m = op.matrix();
    const auto& part = op.partition();
    for (std::size_t i = 0; i < op.space().size(); ++i) {
      for (std::size_t j = 0; j < op.space().size(); ++j) {
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        if (part.block_of(i) != part.block_of(j)) {
          ASSERT_EQ(m(ii, jj), 0.0);
        } else {
          // Rows inside a block coincide.
          ASSERT_EQ(m(ii, jj), m(static_cast<Eigen::Index>(part.block(part.block_of(i))[0]), jj));
        }
      }
    }
    // Block trace equals E(u)(B).
    const auto eu = op.eu();
    for (std::size_t b = 0; b < part.block_count(); ++b) {
      double tr = 0.0;
      for (std::size_t i : part.block(b)) tr += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
      ASSERT_NEAR(tr, eu[b], 1e-12 * std::max(1.0, std::abs(eu[b])));
    }
  }
}

TEST(Operator, ApplyExamples) {
  const auto op = quarter_example();
  const auto& s = op.space();
  const auto one = op.apply(SimpleFunction::constant(s, 1.0));
  EXPECT_EQ(std::vector<double>(one.values().begin(), one.values().end()), (std::vector<double>{2, 2, 2, 2}));
  const auto e0 = op.apply(SimpleFunction(s, {1, 0, 0, 0}));
  EXPECT_EQ(std::vector<double>(e0.values().begin(), e0.values().end()), (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_EQ(op.eu(), (std::vector<double>{2.0, 2.0}));
  EXPECT_DOUBLE_EQ(emu::eu_sup(op), 2.0);
}

TEST(Operator, MatrixMatchesDirectPath) {
  emu::Rng rng(62);
  for (int c = 0; c < 200; ++c) {
    const auto op = random_operator(rng);
    const auto f = emu::random_function(op.space(), rng, {1e-2, 1e2, 0.1});
    const auto a = op.apply(f);
    const auto b = op.apply_matrix(f);
    for (std::size_t i = 0; i < f.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-12 * std::max(1.0, std::abs(a[i])));
  }
}

TEST(Operator, RangeIsMeasurableAndLinear) {
  emu::Rng rng(63);
  for (int c = 0; c < 200; ++c) {
    const auto op = random_operator(rng);
    const auto f = emu::random_function(op.space(), rng, {1e-2, 1e1, 0.1});
    const auto g = emu::random_function(op.space(), rng, {1e-2, 1e1, 0.1});
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const auto tf = op.apply(f);
    ASSERT_TRUE(op.partition().is_measurable(tf));
    const auto lhs = op.apply(a * f + b * g);
    const auto rhs = a * tf + b * op.apply(g);
    const double scale = std::max(1.0, (a * tf).sup_norm() + (b * op.apply(g)).sup_norm());
    ASSERT_LE((lhs - rhs).sup_norm(), 1e-12 * scale);
  }
}

TEST(Operator, RejectsForeignFunctions) {
  const auto op = quarter_example();
  const MeasureSpace other(std::vector<double>(4, 0.25));
  try {
    op.apply(SimpleFunction::constant(other, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpaceMismatch);
  }
}

TEST(Norm, ConstantMultiplierOnSingletons) {
  emu::Rng rng(64);
  auto s = emu::test::random_space(rng, 6);
  const auto pair = ConjugatePair::closed_form(YoungFunction::scaled_power(2.0));
  for (double c : {0.3, 1.0, 7.5}) {
    const EmuOperator op(Partition::singletons(s), SimpleFunction::constant(*s, c));
    EXPECT_NEAR(emu::norm_estimate(op, pair.phi(), 200, 3).lower_bound, c, 1e-4 * c);
    EXPECT_NEAR(emu::norm_upper_bound(op, pair, 1.0), c, 1e-12 * c);
  }
}

TEST(Norm, UnitMultiplierIsConditionalExpectation) {
  const auto sp = emu::build_symmetric_space(4);
  const EmuOperator op(sp.partition, SimpleFunction::constant(*sp.space, 1.0));
  const auto est = emu::norm_estimate(op, YoungFunction::exp_type(), 400, 7);
  EXPECT_NEAR(est.lower_bound, 1.0, 1e-9);
  EXPECT_LE(est.evaluations, 400u);
  EXPECT_EQ(est.argmax.size(), 8u);
}

TEST(Norm, IndicatorRatioIsBlockMean) {
  // N(T chi_B) / N(chi_B) = |E(u)(B)|, computed here from the Luxemburg norm directly.
  emu::Rng rng(65);
  for (int c = 0; c < 100; ++c) {
    const auto op = random_operator(rng);
    const auto phi = c % 2 ? YoungFunction::exp_type() : YoungFunction::power(2.5);
    const auto eu = op.eu();
    for (std::size_t b = 0; b < op.partition().block_count(); ++b) {
      const auto chi = op.partition().indicator(b);
      const double r = emu::luxemburg_norm(op.space(), phi, op.apply(chi)) / emu::luxemburg_norm(op.space(), phi, chi);
      ASSERT_NEAR(r, std::abs(eu[b]), 1e-9 * std::max(1.0, std::abs(eu[b])));
    }
  }
}

TEST(Norm, MeasurableIndicatorImage) {
  emu::Rng rng(69);
  for (int c = 0; c < 50; ++c) {
    const auto op = random_operator(rng);
    const auto& part = op.partition();
    const auto chi = part.indicator(rng.index(part.block_count()));
    const auto lhs = op.apply(chi);
    const auto rhs = part.lift(op.eu()) * chi;
    ASSERT_LE((lhs - rhs).sup_norm(), 1e-13 * std::max(1.0, rhs.sup_norm()));
  }
}

TEST(Norm, GrowthFamilyRatiosAreUnbounded) {
  // u = log(1 + j): the indicator of block j is stretched by log(1 + j), past any fixed n.
  const auto op = family(BlockLaw::Type::LogGrowth).member(256);
  const auto phi = YoungFunction::scaled_power(2.0);
  double prev = 0.0;
  for (std::size_t b : {0u, 3u, 15u, 63u, 255u}) {
    const auto chi = op.partition().indicator(b);
    const double r = emu::luxemburg_norm(op.space(), phi, op.apply(chi)) / emu::luxemburg_norm(op.space(), phi, chi);
    EXPECT_NEAR(r, std::log1p(static_cast<double>(b + 1)), 1e-9 * r);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_GT(prev, 5.0);
}

TEST(Norm, SandwichOnRandomOperators) {
  emu::Rng rng(66);
  const std::vector<ConjugatePair> pairs = {ConjugatePair::closed_form(YoungFunction::scaled_power(2.0)),
                                            ConjugatePair::closed_form(YoungFunction::power(3.0)),
                                            ConjugatePair::closed_form(YoungFunction::exp_type())};
  for (int c = 0; c < 30; ++c) {
    const auto op = random_operator(rng, 8);
    const auto& pair = pairs[static_cast<std::size_t>(c) % pairs.size()];
    const double cst = emu::certified_gcthi_constant(op.partition(), pair);
    const double upper = emu::norm_upper_bound(op, pair, cst);
    const auto est = emu::norm_estimate(op, pair.phi(), 300, static_cast<std::uint64_t>(c));
    ASSERT_LE(est.lower_bound, upper * (1.0 + 1e-6)) << c;
    ASSERT_GE(est.lower_bound, emu::eu_sup(op) * (1.0 - 1e-9)) << c;
  }
}

TEST(LevelSet, DecayCountsMatchFloor) {
  const auto op = family(BlockLaw::Type::Reciprocal).member(256);
  const auto psi = YoungFunction::scaled_power(2.0);
  for (double eps : {0.3, 0.07, 0.045, 0.015}) {
    EXPECT_EQ(emu::level_set(op, psi, eps).count, static_cast<std::size_t>(std::floor(1.0 / eps))) << eps;
  }
  EXPECT_EQ(emu::level_set(op, psi, 2.0).count, 0u);
  EXPECT_THROW(emu::level_set(op, psi, 0.0), Error);
}

TEST(Truncation, RankAndIdentity) {
  const auto op = family(BlockLaw::Type::Reciprocal).member(32);
  const auto psi = YoungFunction::scaled_power(2.0);
  for (double eps : {0.5, 0.1, 0.04}) {
    const auto t = emu::truncate(op, psi, eps);
    const auto r = emu::truncation_remainder(op, psi, eps);
    EXPECT_LE(emu::numerical_rank(t.matrix()), emu::level_set(op, psi, eps).count);
    EXPECT_EQ(emu::numerical_rank(t.matrix()), emu::level_set(op, psi, eps).count);
    const auto sum = t.multiplier() + r.multiplier();
    for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_EQ(sum[i], op.multiplier()[i]);
    EXPECT_TRUE((t.matrix() + r.matrix() - op.matrix()).isZero(1e-15));
  }
  EXPECT_EQ(emu::numerical_rank(Eigen::MatrixXd::Zero(3, 3)), 0u);
}

TEST(Truncation, GapWithinBound) {
  const auto op = family(BlockLaw::Type::Reciprocal).member(64);
  const auto pair = ConjugatePair::closed_form(YoungFunction::scaled_power(2.0));
  for (double eps : {0.5, 0.1, 0.02}) {
    const auto g = emu::truncation_gap_check(op, pair, 1.0, eps, 200, 9);
    EXPECT_TRUE(g.passed) << eps;
    EXPECT_DOUBLE_EQ(g.bound, eps);
    EXPECT_GE(g.margin, -1e-6 * g.bound);
  }
}

TEST(EssentialNorm, DecayDecreasesFlatStaysAtOne) {
  const auto pair = ConjugatePair::closed_form(YoungFunction::scaled_power(2.0));
  const auto decay = emu::essential_norm_bound(family(BlockLaw::Type::Reciprocal), pair, 1.0, {{}, 1e-3, 200, 3});
  EXPECT_TRUE(decay.gaps_ok);
  EXPECT_TRUE(decay.beta_decreasing());
  // With K = ceil(sqrt(m)) the surrogate is 1 / (K + 1).
  EXPECT_NEAR(decay.members[0].beta, 1.0 / 5.0, 1e-15);
  const auto flat = emu::essential_norm_bound(family(BlockLaw::Type::Flat), pair, 1.0, {{}, 1e-3, 200, 3});
  EXPECT_TRUE(flat.gaps_ok);
  EXPECT_TRUE(flat.beta_stable_at(1.0));
  EXPECT_FALSE(flat.beta_decreasing());
}

TEST(EssentialNorm, ZeroMultiplier) {
  const auto pair = ConjugatePair::closed_form(YoungFunction::exp_type());
  const auto rep = emu::essential_norm_bound(family(BlockLaw::Type::Zero), pair, 4.0);
  EXPECT_TRUE(rep.gaps_ok);
  for (double b : rep.betas()) EXPECT_EQ(b, 0.0);
}

TEST(EssentialNorm, BetaSurrogate) {
  EXPECT_EQ(emu::beta_surrogate({3, 1, 2}, 0), 3.0);
  EXPECT_EQ(emu::beta_surrogate({3, 1, 2}, 1), 2.0);
  EXPECT_EQ(emu::beta_surrogate({3, 1, 2}, 3), 0.0);
  EXPECT_EQ((emu::AtomCutoff{}(16)), 4u);
  EXPECT_EQ((emu::AtomCutoff{}(17)), 5u);
}

TEST(Spectrum, QuarterExample) {
  const auto rep = emu::spectrum(quarter_example());
  EXPECT_EQ(rep.predicted, (std::vector<double>{0, 0, 2, 2}));
  EXPECT_TRUE(rep.matches());
  EXPECT_EQ(rep.complex_rejected, 0u);
}

TEST(Spectrum, RandomOperators) {
  emu::Rng rng(67);
  for (int c = 0; c < 20; ++c) {
    const auto op = random_operator(rng, 24);
    const auto rep = emu::spectrum(op);
    ASSERT_TRUE(rep.matches()) << c << " distance " << rep.max_match_distance;
    ASSERT_EQ(rep.computed.size(), op.space().size());
  }
}

TEST(Spectrum, ZeroOperator) {
  const auto op = family(BlockLaw::Type::Zero).member(5);
  const auto rep = emu::spectrum(op);
  EXPECT_TRUE(rep.matches());
  for (double v : rep.computed) EXPECT_EQ(v, 0.0);
}

TEST(Resolvent, MeasurableInput) {
  const auto op = quarter_example();
  const SimpleFunction f(op.space(), {1, 1, -3, -3});
  const double lambda = 5.0;
  const auto s = emu::resolvent_apply(op, lambda, f);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s[i], f[i] / (2.0 - lambda), 1e-15);
}

TEST(Resolvent, ResidualsAtFixedLambda) {
  const auto op = quarter_example();
  const auto rep = emu::resolvent_check(op, 5.0, SimpleFunction(op.space(), {1, -2, 0.5, 4}));
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.left_residual, 1e-10);
  EXPECT_LE(rep.right_residual, 1e-10);
  EXPECT_DOUBLE_EQ(rep.margin, 3.0);
}

TEST(Resolvent, RandomCases) {
  emu::Rng rng(68);
  for (int c = 0; c < 100; ++c) {
    const auto op = random_operator(rng);
    double lambda = 0.0;
    do {
      lambda = rng.sign() * rng.uniform(0.5, 20.0);
    } while (emu::resolvent_margin(op, lambda) < 0.5);
    const auto f = emu::random_function(op.space(), rng, {1e-2, 1e2, 0.1});
    if (f.is_zero()) continue;
    ASSERT_TRUE(emu::resolvent_check(op, lambda, f).passed) << c;
  }
}

TEST(Resolvent, SweepGrowsNearSpectrum) {
  const auto op = quarter_example();
  const SimpleFunction f(op.space(), {1, 2, 3, 4});
  const auto rows = emu::resolvent_sweep(op, f, 2.0, {1.0, 1e-2, 1e-4, 1e-6});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].s_norm, rows[i - 1].s_norm);
  EXPECT_LE(rows.front().residual, 1e-9);
}

TEST(Resolvent, SingularLambda) {
  const auto op = quarter_example();
  const auto f = SimpleFunction::constant(op.space(), 1.0);
  for (double lambda : {0.0, 2.0, 2.0 + 1e-13}) {
    try {
      emu::resolvent_apply(op, lambda, f);
      FAIL() << lambda;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SingularLambda);
    }
  }
  const auto rows = emu::resolvent_sweep(op, f, 2.0, {0.0});
  EXPECT_TRUE(std::isinf(rows[0].residual));
}

TEST(Classifier, FamilyVerdicts) {
  const auto pair = ConjugatePair::closed_form(YoungFunction::scaled_power(2.0));
  const auto eps = emu::Grid{0.1, 1.0, 8}.values();
  const auto decay = emu::boundedness_classifier(family(BlockLaw::Type::Reciprocal), pair, {true, false, false}, eps);
  EXPECT_EQ(decay.bounded, Verdict::Yes);
  EXPECT_EQ(decay.compact, Verdict::Yes);
  const auto flat = emu::boundedness_classifier(family(BlockLaw::Type::Flat), pair, {true, false, false}, eps);
  EXPECT_EQ(flat.bounded, Verdict::Yes);
  EXPECT_EQ(flat.compact, Verdict::No);
  const auto growth = emu::boundedness_classifier(family(BlockLaw::Type::LogGrowth), pair, {false, true, false}, eps);
  EXPECT_EQ(growth.bounded, Verdict::No);
  EXPECT_EQ(growth.compact, Verdict::No);
  EXPECT_FALSE(growth.basis.empty());
  EXPECT_EQ(emu::to_string(Verdict::Undetermined), "undetermined");
}

TEST(Classifier, NeedsAHypothesis) {
  const auto pair = ConjugatePair::closed_form(YoungFunction::scaled_power(2.0));
  try {
    emu::boundedness_classifier(family(BlockLaw::Type::Flat), pair, {}, {0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisMissing);
  }
}

TEST(Compactness, FlatFamilyImagesStaySeparated) {
  // Normalized indicators of distinct blocks: T fixes them and their
  // differences keep norm sqrt(2) for x^2/2, so no subsequence converges.
  const auto op = family(BlockLaw::Type::Flat).member(16);
  const auto phi = YoungFunction::scaled_power(2.0);
  const auto& part = op.partition();
  std::vector<SimpleFunction> images;
  for (std::size_t b = 0; b < part.block_count(); ++b) {
    const auto chi = part.indicator(b);
    images.push_back(op.apply((1.0 / emu::luxemburg_norm(op.space(), phi, chi)) * chi));
  }
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      ASSERT_GE(emu::luxemburg_norm(op.space(), phi, images[a] - images[b]), std::sqrt(2.0) * (1.0 - 1e-9));
    }
  }
}

TEST(Export, MatrixCsv) {
  std::ostringstream os;
  emu::write_matrix_csv(os, quarter_example().matrix());
  EXPECT_EQ(os.str(), "0.5,1.5,0,0\n0.5,1.5,0,0\n0,0,1,1\n0,0,1,1\n");
}
