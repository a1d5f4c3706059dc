#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "emu/orlicz.hpp"
#include "support.hpp"

using emu::Error;
using emu::ErrorCode;
using emu::MeasureSpace;
using emu::Partition;
using emu::SimpleFunction;
using emu::YoungFunction;

namespace {

// Neumaier-compensated long double sum: independent of the pairwise route.
double compensated_modular(const MeasureSpace& s, const YoungFunction& phi, const SimpleFunction& f) {
  long double sum = 0, comp = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const long double term = static_cast<long double>(s.weight(i)) * phi(f[i]);
    const long double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return static_cast<double>(sum + comp);
}

double p_norm(const MeasureSpace& s, const SimpleFunction& f, double p) {
  long double acc = 0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += s.weight(i) * std::pow(static_cast<long double>(std::abs(f[i])), p);
  return static_cast<double>(std::pow(acc, 1.0L / p));
}

}  // namespace

TEST(Modular, Examples) {
  auto s = std::make_shared<const MeasureSpace>(std::vector<double>{0.5, 0.5});
  const auto sq = YoungFunction::scaled_power(2.0);
  EXPECT_EQ(emu::modular(*s, sq, SimpleFunction::constant(*s, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(emu::modular(*s, sq, SimpleFunction(*s, {1.0, 1.0})), 0.5);
}

TEST(Modular, MatchesCompensatedSum) {
  emu::Rng rng(21);
  for (int c = 0; c < 200; ++c) {
    auto space = emu::test::random_space(rng, 1 + rng.index(400));
    const auto f = emu::random_function(*space, rng, {1e-3, 1e1, 0.1});
    for (const auto& phi : {YoungFunction::power(3.0), YoungFunction::exp_type()}) {
      const double ref = compensated_modular(*space, phi, f);
      ASSERT_NEAR(emu::modular(*space, phi, f), ref, 1e-14 * ref);
    }
  }
}

TEST(Luxemburg, PowerIsPNorm) {
  emu::Rng rng(22);
  for (double p : {1.5, 2.0, 3.0, 7.0}) {
    for (int c = 0; c < 50; ++c) {
      auto space = emu::test::random_space(rng, 1 + rng.index(20));
      const auto f = emu::random_function(*space, rng, {1e-2, 1e2, 0.1});
      if (f.is_zero()) continue;
      const double ref = p_norm(*space, f, p);
      ASSERT_NEAR(emu::luxemburg_norm(*space, YoungFunction::power(p), f), ref, 1e-8 * ref) << "p=" << p;
    }
  }
}

TEST(Luxemburg, IndicatorClosedForm) {
  emu::Rng rng(23);
  for (const auto& phi : {YoungFunction::scaled_power(2.0), YoungFunction::exp_type(), YoungFunction::entropy_type(),
                          YoungFunction::power(1.5)}) {
    for (int c = 0; c < 30; ++c) {
      auto space = emu::test::random_space(rng, 2 + rng.index(10));
      auto chi = SimpleFunction::constant(*space, 0.0);
      double mu = 0.0;
      for (std::size_t i = 0; i < chi.size(); ++i) {
        if (i == 0 || rng.uniform() < 0.5) {
          chi[i] = 1.0;
          mu += space->weight(i);
        }
      }
      const double ref = 1.0 / phi.inverse(1.0 / mu, 0.0);
      ASSERT_NEAR(emu::luxemburg_norm(*space, phi, chi), ref, 1e-8 * ref) << phi.name();
    }
  }
}

TEST(Luxemburg, ZeroAndRejections) {
  auto s = std::make_shared<const MeasureSpace>(std::vector<double>{1.0, 2.0});
  EXPECT_EQ(emu::luxemburg_norm(*s, YoungFunction::exp_type(), SimpleFunction::constant(*s, 0.0)), 0.0);
  try {
    emu::luxemburg_norm(*s, YoungFunction::piecewise_linear({0.0, 1.0}, {0.0, 1.0}), SimpleFunction::constant(*s, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotYoungFunction);
  }
}

TEST(Luxemburg, NormAxioms) {
  emu::Rng rng(24);
  for (int c = 0; c < 200; ++c) {
    auto space = emu::test::random_space(rng, 1 + rng.index(15));
    const auto phi = c % 2 ? YoungFunction::exp_type() : YoungFunction::scaled_power(3.0);
    const auto f = emu::random_function(*space, rng, {1e-2, 1e1, 0.1});
    const auto g = emu::random_function(*space, rng, {1e-2, 1e1, 0.1});
    const double nf = emu::luxemburg_norm(*space, phi, f);
    const double ng = emu::luxemburg_norm(*space, phi, g);
    const double k = rng.sign() * rng.log_uniform(1e-2, 1e2);
    const double nkf = emu::luxemburg_norm(*space, phi, k * f);
    ASSERT_LE(std::abs(nkf - std::abs(k) * nf), 1e-9 * nkf + 1e-300);
    ASSERT_LE(emu::luxemburg_norm(*space, phi, f + g), nf + ng + 1e-9);
    ASSERT_EQ(nf == 0.0, f.is_zero());
  }
}

TEST(Luxemburg, ModularAtNormIsOne) {
  emu::Rng rng(25);
  for (int c = 0; c < 200; ++c) {
    auto space = emu::test::random_space(rng, 1 + rng.index(15));
    const auto phi = c % 2 ? YoungFunction::exp_type() : YoungFunction::power(2.5);
    const auto f = emu::random_function(*space, rng, {1e-2, 1e1, 0.0});
    const double n = emu::luxemburg_norm(*space, phi, f);
    const double m = emu::scaled_modular(*space, phi, f, n);
    ASSERT_LE(m, 1.0);
    // Local slope of k -> modular(f/k) is bounded by sum w |f/k| Phi'(|f/k|) / k; relative width 1e-12.
    ASSERT_GE(m, 1.0 - 1e-9);
  }
}

TEST(Contraction, Examples) {
  const auto sp = emu::build_symmetric_space(2);
  const auto phi = YoungFunction::scaled_power(2.0);
  const SimpleFunction measurable(*sp.space, {1, 2, 2, 1});
  const auto eq = emu::contraction_check(sp.partition, phi, measurable);
  EXPECT_TRUE(eq.passed);
  EXPECT_NEAR(eq.max_violation, 0.0, 1e-12);
  const SimpleFunction f(*sp.space, {1, 0, 0, 1});
  EXPECT_TRUE(emu::contraction_check(sp.partition, phi, f).passed);
  const SimpleFunction g(*sp.space, {1, 0, 1, 0});
  const auto strict = emu::contraction_check(sp.partition, phi, g);
  EXPECT_TRUE(strict.passed);
  EXPECT_LT(strict.max_violation, 0.0);
}

TEST(Contraction, RandomCasesNoViolations) {
  emu::Rng rng(26);
  const std::vector<YoungFunction> phis = {YoungFunction::power(1.5), YoungFunction::scaled_power(2.0),
                                           YoungFunction::exp_type(), YoungFunction::entropy_type()};
  for (int c = 0; c < 1000; ++c) {
    auto sc = emu::test::random_scenario(rng);
    const auto f = emu::random_function(*sc.space, rng, {1e-2, 1e1, 0.1});
    ASSERT_TRUE(emu::contraction_check(sc.part, phis[static_cast<std::size_t>(c) % 4], f).passed) << c;
  }
}

TEST(Monotonicity, Examples) {
  emu::Rng rng(27);
  auto space = emu::test::random_space(rng, 8);
  const auto phi = YoungFunction::exp_type();
  const auto g = emu::random_function(*space, rng, {1e-2, 1e1, 0.0});
  const auto same = emu::norm_monotonicity_check(*space, phi, g, g);
  EXPECT_TRUE(same.passed);
  EXPECT_NEAR(same.max_violation, 0.0, 1e-15);
  const auto half = 0.5 * g;
  EXPECT_TRUE(emu::norm_monotonicity_check(*space, phi, half, g).passed);
  EXPECT_NEAR(emu::luxemburg_norm(*space, phi, half), 0.5 * emu::luxemburg_norm(*space, phi, g),
              1e-9 * emu::luxemburg_norm(*space, phi, g));
  try {
    emu::norm_monotonicity_check(*space, phi, 2.0 * g, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

TEST(Monotonicity, RandomDominatedPairs) {
  emu::Rng rng(28);
  for (int c = 0; c < 300; ++c) {
    auto space = emu::test::random_space(rng, 1 + rng.index(12));
    const auto g = emu::random_function(*space, rng, {1e-2, 1e1, 0.1});
    auto f = g;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= rng.uniform(-1.0, 1.0);
    ASSERT_TRUE(emu::norm_monotonicity_check(*space, YoungFunction::power(2.0 + c % 3), f, g).passed);
  }
}
