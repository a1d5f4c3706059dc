#pragma once

// Suite orchestration and report rendering.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "emu/check.hpp"
#include "emu/cli/scenario.hpp"
#include "emu/error.hpp"
#include "emu/growth.hpp"
#include "emu/holder.hpp"
#include "emu/mspace.hpp"
#include "emu/numeric.hpp"
#include "emu/opemu.hpp"
#include "emu/orlicz.hpp"
#include "emu/young.hpp"

namespace emu::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigError = 2 };

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"young-calculus", "jensen",   "contraction",
                                                 "gcthi",          "boundedness", "compactness-trend",
                                                 "spectrum",       "resolvent", "essential-norm"};
  return names;
}

/// Report numbers are decimal strings with 12 significant digits ("inf" and
/// "nan" included), so reports diff cleanly across platforms.
inline ordered_json num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf);
}

inline ordered_json nums(const std::vector<double>& vs) {
  ordered_json a = ordered_json::array();
  for (double v : vs) a.push_back(num(v));
  return a;
}

struct CheckRow {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string name;
  bool skipped = false;
  std::string note;
  std::vector<CheckRow> checks;
  ordered_json data = ordered_json::object();
  double elapsed_ms = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.passed; });
  }

  // value <= bound * (1 + tol)
  void at_most(std::string n, double value, double bound, double tol) {
    checks.push_back({std::move(n), value, bound, tol, value <= bound * (1.0 + tol)});
  }

  void at_least(std::string n, double value, double bound, double tol) {
    checks.push_back({std::move(n), value, bound, tol, value >= bound * (1.0 - tol)});
  }

  // A CheckReport: max violation against its own tolerance.
  void sweep(std::string n, const CheckReport& r) {
    checks.push_back({std::move(n), r.max_violation, 0.0, r.tolerance, r.passed});
  }

  void flag(std::string n, bool ok) { checks.push_back({std::move(n), ok ? 1.0 : 0.0, 1.0, 0.0, ok}); }
};

namespace suites {

inline ordered_json certificate_json(const std::optional<GrowthCertificate>& c) {
  if (!c) return nullptr;
  const auto pick = [](const std::optional<GrowthConstant>& g) -> ordered_json {
    if (!g) return nullptr;
    return {{"value", num(g->value)}, {"empirical", num(g->empirical)}, {"threshold", num(g->threshold)}};
  };
  if (c->delta2) return pick(c->delta2);
  if (c->delta_prime) return pick(c->delta_prime);
  if (c->nabla_prime) return pick(c->nabla_prime);
  return pick(c->ordering);
}

inline void young_calculus(const Scenario& s, const Resolved& r, SuiteResult& out) {
  const auto& phi = r.phi;
  double worst = 0.0;
  for (double t : Grid{1e-6, 1e6, 64}.values()) {
    worst = std::max(worst, std::abs(phi(phi.inverse(t)) - t) / std::max(1.0, t));
  }
  out.at_most("inverse_roundtrip", worst, kInverseTol, 0.0);
  out.data["delta2"] = certificate_json(check_delta2(phi));
  if (!phi.superlinear()) {
    out.note = "not superlinear: no complement";
    return;
  }
  const auto& psi = r.pair->psi();
  if (const auto closed = conjugate_closed_form(phi)) {
    double err = 0.0;
    for (double y : Grid{1e-2, 1e2, 256}.values()) {
      const double expect = (*closed)(y);
      err = std::max(err, std::abs(conjugate_numeric(phi, y) - expect) / std::max(expect, 1e-300));
    }
    out.at_most("conjugate_closed_vs_numeric", err, 1e-6, 0.0);
  }
  Rng rng(derive_seed(s.seed, 1));
  std::vector<std::pair<double, double>> xy(1000);
  for (auto& [x, y] : xy) {
    x = rng.log_uniform(1e-3, 1e2);
    y = rng.log_uniform(1e-3, 1e2);
  }
  out.sweep("young_inequality", young_inequality_check(phi, psi, xy));
  out.data["delta_prime"] = certificate_json(check_delta_prime(phi));
  out.data["nabla_prime"] = certificate_json(check_nabla_prime(phi));
  try {
    const auto c = check_curvature_condition(phi, psi);
    out.data["curvature_condition"] = {{"holds", c.holds}, {"worst_x", num(c.worst_x)}, {"worst_y", num(c.worst_y)},
                                       {"worst_value", num(c.worst_value)}};
  } catch (const Error& e) {
    out.data["curvature_condition"] = to_string(e.code());
  }
}

inline void jensen(const Scenario& s, const Resolved& r, SuiteResult& out) {
  const auto& part = *r.partition;
  CheckReport plain(1e-12);
  CheckReport general(1e-12);
  const auto F = MinOfLinear::sqrt_product_tangents(16);
  for (std::size_t c = 0; c < s.budgets.cases; ++c) {
    Rng rng(derive_seed(s.seed, 100 + c));
    const auto f = random_function(part.space(), rng, {1e-2, 1e1, 0.1});
    plain.merge(jensen_check(part, f, r.phi));
    const std::vector<SimpleFunction> fs = {random_positive_function(part.space(), rng, {1e-2, 1e2, 0.0}),
                                            random_positive_function(part.space(), rng, {1e-2, 1e2, 0.0})};
    general.merge(generalized_jensen_check(part, fs, F));
  }
  out.sweep("jensen_atomwise", plain);
  out.sweep("generalized_jensen_sqrt_product", general);
  out.data["cases"] = s.budgets.cases;
}

inline void contraction(const Scenario& s, const Resolved& r, SuiteResult& out) {
  if (!r.phi.superlinear()) {
    out.skipped = true;
    out.note = "Luxemburg norm needs a superlinear Young function";
    return;
  }
  const auto& part = *r.partition;
  CheckReport rep(1e-9);
  CheckReport mono(1e-9);
  for (std::size_t c = 0; c < s.budgets.cases; ++c) {
    Rng rng(derive_seed(s.seed, 200 + c));
    const auto f = random_function(part.space(), rng, {1e-2, 1e1, 0.1});
    rep.merge(contraction_check(part, r.phi, f));
    auto g = f.abs();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += rng.uniform();
    mono.merge(norm_monotonicity_check(part.space(), r.phi, f, g));
  }
  out.sweep("norm_contraction", rep);
  out.sweep("norm_monotone", mono);
}

inline void gcthi(const Scenario& s, const Resolved& r, SuiteResult& out) {
  if (!r.pair) {
    out.skipped = true;
    out.note = "no complementary pair";
    return;
  }
  const auto& part = *r.partition;
  const double claimed = s.claimed_C.value_or(r.certified_C);
  const auto rep = gcthi_search(part, *r.pair, s.budgets.samples, derive_seed(s.seed, 3), s.sample_range, claimed);
  out.at_most("empirical_C", rep.empirical_C, claimed, 1e-9);
  out.data["samples"] = rep.samples;
  out.data["worst_block"] = rep.worst_block;
  out.data["certified_C"] = num(r.certified_C);
  out.data["domination_C0"] = num(domination_constant(part));
  const auto split = split_constants(part, *r.pair, s.budgets.samples, derive_seed(s.seed, 4), s.sample_range);
  out.data["C1"] = num(split.c1);
  out.data["C2"] = num(split.c2);
  out.data["C1_plus_C2"] = num(split.gcthi_constant());
  if (s.split_bounds.size() == 2) {
    out.at_most("C1", split.c1, s.split_bounds[0], 1e-9);
    out.at_most("C2", split.c2, s.split_bounds[1], 1e-9);
  }
}

inline void boundedness(const Scenario& s, const Resolved& r, SuiteResult& out) {
  if (!r.pair) {
    out.skipped = true;
    out.note = "no complementary pair";
    return;
  }
  const auto& op = *r.op;
  const auto est = norm_estimate(op, r.pair->phi(), s.budgets.norm, derive_seed(s.seed, 5));
  const double upper = norm_upper_bound(op, *r.pair, r.certified_C);
  out.at_most("norm_lower_vs_upper", est.lower_bound, upper, 1e-6);
  out.at_least("norm_lower_vs_eu_sup", est.lower_bound, eu_sup(op), 0.01);
  out.data["lower_bound"] = num(est.lower_bound);
  out.data["upper_bound"] = num(upper);
  out.data["eu_sup"] = num(eu_sup(op));
  out.data["evaluations"] = est.evaluations;
  if (!r.family) return;
  try {
    const auto cls = boundedness_classifier(*r.family, *r.pair, s.flags,
                                            s.classifier_epsilons.empty() ? Grid{0.1, 1.0, 8}.values()
                                                                          : s.classifier_epsilons);
    out.data["bounded"] = std::string(to_string(cls.bounded));
    out.data["compact"] = std::string(to_string(cls.compact));
    out.data["level_sups"] = nums(cls.level_sups);
    out.data["eu_sups"] = nums(cls.eu_sups);
    out.data["basis"] = cls.basis;
    if (!s.expect.bounded.empty()) out.flag("verdict_bounded", to_string(cls.bounded) == s.expect.bounded);
    if (!s.expect.compact.empty()) out.flag("verdict_compact", to_string(cls.compact) == s.expect.compact);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::HypothesisMissing) throw;
    out.data["bounded"] = out.data["compact"] = "hypothesis-missing";
    if (!s.expect.bounded.empty() || !s.expect.compact.empty()) out.flag("verdict_licensed", false);
  }
}

inline void compactness_trend(const Scenario& s, const Resolved& r, SuiteResult& out) {
  if (!r.pair) {
    out.skipped = true;
    out.note = "no complementary pair";
    return;
  }
  const auto eps = s.epsilons.empty() ? Grid{0.01, 1.0, 16}.values() : s.epsilons;
  std::vector<EmuOperator> members;
  if (r.family) {
    members = r.family->members();
  } else {
    members.push_back(*r.op);
  }
  double worst_excess = -std::numeric_limits<double>::infinity();
  bool gaps_ok = true;
  bool ranks_ok = true;
  ordered_json rows = ordered_json::array();
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& op = members[k];
    const double c = certified_gcthi_constant(op.partition(), *r.pair);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      const auto gap = truncation_gap_check(op, *r.pair, c, eps[e], s.budgets.norm,
                                            derive_seed(s.seed, 1000 * (k + 1) + e));
      const auto count = level_set(op, r.pair->psi(), eps[e]).count;
      ordered_json row = {{"atoms", op.space().size()}, {"blocks", op.partition().block_count()},
                          {"epsilon", num(eps[e])},     {"level_count", count},
                          {"gap_estimate", num(gap.estimate)}, {"gap_bound", num(gap.bound)}};
      if (op.space().size() <= 128) {
        const auto rank = numerical_rank(truncate(op, r.pair->psi(), eps[e]).matrix());
        row["rank"] = rank;
        ranks_ok = ranks_ok && rank <= count;
      }
      rows.push_back(row);
      gaps_ok = gaps_ok && gap.passed;
      worst_excess = std::max(worst_excess, gap.bound > 0 ? gap.estimate / gap.bound - 1.0 : gap.estimate);
    }
  }
  out.checks.push_back({"truncation_gap", worst_excess, 0.0, 1e-6, gaps_ok});
  out.flag("rank_at_most_level_count", ranks_ok);
  out.data["rows"] = rows;
}

inline void spectrum(const Scenario&, const Resolved& r, SuiteResult& out) {
  const auto rep = emu::spectrum(*r.op);
  double scale = 0.0;
  for (double v : rep.predicted) scale = std::max(scale, std::abs(v));
  out.at_most("max_match_distance", rep.max_match_distance, 1e-8 * (1.0 + scale), 0.0);
  out.at_most("complex_rejected", static_cast<double>(rep.complex_rejected), 0.0, 0.0);
  if (rep.predicted.size() <= 64) {
    out.data["predicted"] = nums(rep.predicted);
    out.data["computed"] = nums(rep.computed);
  }
  out.data["max_imag"] = num(rep.max_imag);
}

inline void resolvent(const Scenario& s, const Resolved& r, SuiteResult& out) {
  const auto& op = *r.op;
  const auto eu = op.eu();
  double reach = 0.0;
  for (double v : eu) reach = std::max(reach, std::abs(v));
  reach = 2.0 * reach + 2.0;
  double worst = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  const std::size_t cases = std::min<std::size_t>(s.budgets.cases, 100);
  for (std::size_t c = 0; c < cases; ++c) {
    Rng rng(derive_seed(s.seed, 300 + c));
    double lambda = 0.0;
    do {
      lambda = rng.uniform(-reach, reach);
    } while (resolvent_margin(op, lambda) < 0.5);
    const auto f = random_function(op.space(), rng, {1e-2, 1e2, 0.1});
    if (f.is_zero()) continue;
    const auto rep = resolvent_check(op, lambda, f);
    worst = std::max({worst, rep.left_residual, rep.right_residual});
    min_margin = std::min(min_margin, rep.margin);
  }
  out.at_most("residual", worst, 1e-9, 0.0);
  out.data["cases"] = cases;
  out.data["min_margin"] = num(min_margin);
  const double target = *std::max_element(eu.begin(), eu.end());
  Rng rng(derive_seed(s.seed, 299));
  const auto f = random_function(op.space(), rng, {1e-1, 1e1, 0.0});
  ordered_json sweep = ordered_json::array();
  for (const auto& row : resolvent_sweep(op, f, target, {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8})) {
    sweep.push_back({{"distance", num(row.distance)}, {"residual", num(row.residual)}, {"s_norm", num(row.s_norm)}});
  }
  out.data["sweep_target"] = num(target);
  out.data["sweep"] = sweep;
}

inline void essential_norm(const Scenario& s, const Resolved& r, SuiteResult& out) {
  if (!r.pair || !r.family) {
    out.skipped = true;
    out.note = r.pair ? "needs a refinement family" : "no complementary pair";
    return;
  }
  EssentialNormOptions opt;
  opt.cutoff = s.cutoff;
  opt.delta = s.delta;
  opt.budget = s.budgets.norm;
  opt.seed = derive_seed(s.seed, 6);
  const auto c = certified_gcthi_constant(r.family->member(r.family->sizes.front()).partition(), *r.pair);
  const auto rep = essential_norm_bound(*r.family, *r.pair, c, opt);
  ordered_json rows = ordered_json::array();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& m : rep.members) {
    rows.push_back({{"blocks", m.blocks}, {"cutoff", m.cutoff}, {"beta", num(m.beta)},
                    {"gap_estimate", num(m.gap.estimate)}, {"gap_bound", num(m.gap.bound)}});
    worst = std::max(worst, m.gap.bound > 0 ? m.gap.estimate / m.gap.bound - 1.0 : m.gap.estimate);
  }
  out.checks.push_back({"gap_at_beta_plus_delta", worst, 0.0, 1e-6, rep.gaps_ok});
  if (s.expect.beta == "decreasing") out.flag("beta_decreasing", rep.beta_decreasing());
  if (s.expect.beta == "stable") out.flag("beta_stable", rep.beta_stable_at(s.expect.beta_level));
  out.data["members"] = rows;
}

}  // namespace suites

using SuiteFn = void (*)(const Scenario&, const Resolved&, SuiteResult&);

inline SuiteFn suite_function(const std::string& name) {
  static const std::map<std::string, SuiteFn> table = {
      {"young-calculus", suites::young_calculus}, {"jensen", suites::jensen},
      {"contraction", suites::contraction},       {"gcthi", suites::gcthi},
      {"boundedness", suites::boundedness},       {"compactness-trend", suites::compactness_trend},
      {"spectrum", suites::spectrum},             {"resolvent", suites::resolvent},
      {"essential-norm", suites::essential_norm}};
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("suite", "unknown suite \"" + name + "\"");
  return it->second;
}

struct Report {
  ordered_json scenario;
  std::vector<SuiteResult> suites;
  double total_ms = 0.0;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }
};

/// Runs the named suites (all when empty) in catalogue order. A suite that
/// throws records the error as a failed check.
inline Report run_scenario(const Scenario& s, const std::vector<std::string>& filter = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& f : filter) suite_function(f);
  const auto resolved = resolve(s);
  Report rep;
  rep.scenario = scenario_to_json(s);
  for (const auto& name : suite_names()) {
    if (!filter.empty() && std::find(filter.begin(), filter.end(), name) == filter.end()) continue;
    SuiteResult res;
    res.name = name;
    const auto ts = std::chrono::steady_clock::now();
    try {
      suite_function(name)(s, resolved, res);
    } catch (const Error& e) {
      res.checks.push_back({"error", 1.0, 0.0, 0.0, false});
      res.note = std::string(to_string(e.code())) + ": " + e.what();
    }
    res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - ts).count();
    rep.suites.push_back(std::move(res));
  }
  rep.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Report as JSON. Everything except the "timing" key is a deterministic
/// function of the scenario.
inline ordered_json report_json(const Report& rep) {
  ordered_json j;
  j["tool"] = "emu_lab";
  j["versions"] = {{"emu_lab", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["scenario"] = rep.scenario;
  j["passed"] = rep.passed();
  ordered_json suites = ordered_json::array();
  ordered_json timing = {{"total_ms", num(rep.total_ms)}, {"suites", ordered_json::object()}};
  for (const auto& s : rep.suites) {
    ordered_json sj;
    sj["suite"] = s.name;
    sj["passed"] = s.passed();
    sj["skipped"] = s.skipped;
    if (!s.note.empty()) sj["note"] = s.note;
    ordered_json checks = ordered_json::array();
    for (const auto& c : s.checks) {
      checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"bound", num(c.bound)},
                        {"tolerance", num(c.tolerance)}, {"passed", c.passed}});
    }
    sj["checks"] = checks;
    sj["data"] = s.data;
    suites.push_back(sj);
    timing["suites"][s.name] = num(s.elapsed_ms);
  }
  j["suites"] = suites;
  j["timing"] = timing;
  return j;
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string report_table(const Report& rep) {
  std::ostringstream os;
  os << "scenario " << rep.scenario.value("name", std::string()) << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %-32s %14s %14s %10s %s\n", "suite", "check", "value", "bound", "tol",
                "result");
  os << line;
  for (const auto& s : rep.suites) {
    if (s.skipped || s.checks.empty()) {
      std::snprintf(line, sizeof line, "%-18s %-32s %14s %14s %10s %s\n", s.name.c_str(), "-", "-", "-", "-",
                    s.skipped ? "skip" : "pass");
      os << line;
      continue;
    }
    for (const auto& c : s.checks) {
      std::snprintf(line, sizeof line, "%-18s %-32s %14s %14s %10s %s\n", s.name.c_str(), c.name.c_str(),
                    format_number(c.value).c_str(), format_number(c.bound).c_str(),
                    format_number(c.tolerance).c_str(), c.passed ? "pass" : "FAIL");
      os << line;
    }
    if (!s.note.empty()) os << "  note: " << s.note << "\n";
  }
  os << (rep.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace emu::cli
