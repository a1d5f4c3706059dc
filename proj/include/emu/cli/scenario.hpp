#pragma once

// Scenario configuration: JSON schema, validation with field paths, and the
// builtin catalogue.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "emu/error.hpp"
#include "emu/holder.hpp"
#include "emu/mspace.hpp"
#include "emu/opemu.hpp"
#include "emu/young.hpp"

namespace emu::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Bad configuration; `path` names the offending field ("space.n_half").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error((path.empty() ? std::string("config") : path) + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct SpaceSpec {
  std::string type = "symmetric";  // symmetric | rotation | explicit | family
  std::size_t n_half = 4;
  std::size_t n = 3;
  std::size_t m = 4;
  std::vector<double> weights;
  std::vector<std::size_t> sizes;  // family block counts
  std::size_t atoms_per_block = 2;
  std::size_t member = 0;          // family member used by single-operator suites
  bool operator==(const SpaceSpec&) const = default;
};

struct PartitionSpec {
  std::string type = "auto";  // auto | trivial | finest | blocks
  std::vector<std::vector<std::size_t>> blocks;
  bool operator==(const PartitionSpec&) const = default;
};

struct YoungSpec {
  std::string kind = "scaled_power";  // power | scaled_power | exp_type | entropy_type | piecewise_linear
  double p = 2.0;
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  std::string conjugate = "closed_form";  // closed_form | numeric
  bool operator==(const YoungSpec&) const = default;
};

struct MultiplierSpec {
  std::string source = "law";  // law | values | generator
  std::string law = "flat";    // reciprocal | flat | log_growth | zero | custom
  std::vector<double> values;  // explicit atom values, or per-block values for the custom law
  std::string generator;       // identity | random_uniform | indicator
  std::uint64_t seed = 1;
  double lo = -2.0;
  double hi = 2.0;
  std::size_t block = 0;
  bool operator==(const MultiplierSpec&) const = default;
};

struct Budgets {
  std::size_t samples = 10000;  // GCTHI and split-constant pairs
  std::size_t cases = 200;      // Jensen / contraction / resolvent cases
  std::size_t norm = 400;       // ratio evaluations per norm estimate
  bool operator==(const Budgets&) const = default;
};

struct Expectations {
  std::string bounded;     // "", yes, no, undetermined
  std::string compact;
  std::string beta;        // "", decreasing, stable
  double beta_level = 1.0;
  bool operator==(const Expectations&) const = default;
};

struct Scenario {
  std::string name = "custom";
  std::string description;
  SpaceSpec space;
  PartitionSpec partition;
  YoungSpec young;
  MultiplierSpec u;
  std::uint64_t seed = 1;
  Budgets budgets;
  SampleRange sample_range;
  std::optional<double> claimed_C;
  std::vector<double> split_bounds;  // empty, or {C1 bound, C2 bound}
  HypothesisFlags flags;
  Expectations expect;
  std::vector<double> epsilons;             // truncation-gap grid
  std::vector<double> classifier_epsilons;  // level-count grid
  double delta = 1e-3;
  AtomCutoff cutoff;
  bool operator==(const Scenario&) const = default;
};

namespace detail {

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (auto allowed : keys) known = known || k == allowed;
    if (!known) throw ConfigError(join(path, k), "unknown field");
  }
}

template <class T>
T as(const json& j, const std::string& path);

template <>
inline double as<double>(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seeds are read as size_t");

template <>
inline std::size_t as<std::size_t>(const json& j, const std::string& path) {
  const bool ok = j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0);
  if (!ok) throw ConfigError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

template <>
inline bool as<bool>(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

template <>
inline std::string as<std::string>(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

template <class T>
std::vector<T> as_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as<T>(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T>
void read(const json& j, const std::string& path, std::string_view key, T& out) {
  if (!j.contains(key)) return;
  out = as<T>(j.at(std::string(key)), join(path, key));
}

template <class T>
void read_list(const json& j, const std::string& path, std::string_view key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  out = as_list<T>(j.at(std::string(key)), join(path, key));
}

inline void one_of(const std::string& value, const std::string& path, std::initializer_list<std::string_view> options) {
  for (auto o : options) {
    if (value == o) return;
  }
  std::string msg = "must be one of";
  for (auto o : options) msg += " " + std::string(o);
  throw ConfigError(path, msg + " (got \"" + value + "\")");
}

}  // namespace detail

inline Scenario scenario_from_json(const json& j) {
  using namespace detail;
  only_keys(j, "", {"name", "description", "space", "partition", "young", "u", "seed", "budgets", "sample_range",
                    "claimed_C", "split_bounds", "flags", "expect", "epsilons", "classifier_epsilons", "delta",
                    "cutoff"});
  Scenario s;
  read(j, "", "name", s.name);
  read(j, "", "description", s.description);
  read(j, "", "seed", s.seed);
  read(j, "", "delta", s.delta);
  read_list(j, "", "epsilons", s.epsilons);
  read_list(j, "", "classifier_epsilons", s.classifier_epsilons);
  read_list(j, "", "split_bounds", s.split_bounds);
  if (j.contains("claimed_C") && !j.at("claimed_C").is_null()) s.claimed_C = as<double>(j.at("claimed_C"), "claimed_C");

  if (j.contains("space")) {
    const auto& sj = j.at("space");
    only_keys(sj, "space", {"type", "n_half", "n", "m", "weights", "sizes", "atoms_per_block", "member"});
    read(sj, "space", "type", s.space.type);
    one_of(s.space.type, "space.type", {"symmetric", "rotation", "explicit", "family"});
    read(sj, "space", "n_half", s.space.n_half);
    read(sj, "space", "n", s.space.n);
    read(sj, "space", "m", s.space.m);
    read_list(sj, "space", "weights", s.space.weights);
    read_list(sj, "space", "sizes", s.space.sizes);
    read(sj, "space", "atoms_per_block", s.space.atoms_per_block);
    read(sj, "space", "member", s.space.member);
  }
  if (j.contains("partition")) {
    const auto& pj = j.at("partition");
    only_keys(pj, "partition", {"type", "blocks"});
    read(pj, "partition", "type", s.partition.type);
    one_of(s.partition.type, "partition.type", {"auto", "trivial", "finest", "blocks"});
    if (pj.contains("blocks")) {
      const auto& bj = pj.at("blocks");
      if (!bj.is_array()) throw ConfigError("partition.blocks", "expected a list of lists");
      for (std::size_t b = 0; b < bj.size(); ++b) {
        s.partition.blocks.push_back(as_list<std::size_t>(bj[b], "partition.blocks[" + std::to_string(b) + "]"));
      }
    }
  }
  if (j.contains("young")) {
    const auto& yj = j.at("young");
    only_keys(yj, "young", {"kind", "p", "breakpoints", "slopes", "conjugate"});
    read(yj, "young", "kind", s.young.kind);
    one_of(s.young.kind, "young.kind", {"power", "scaled_power", "exp_type", "entropy_type", "piecewise_linear"});
    read(yj, "young", "p", s.young.p);
    read_list(yj, "young", "breakpoints", s.young.breakpoints);
    read_list(yj, "young", "slopes", s.young.slopes);
    read(yj, "young", "conjugate", s.young.conjugate);
    one_of(s.young.conjugate, "young.conjugate", {"closed_form", "numeric"});
  }
  if (j.contains("u")) {
    const auto& uj = j.at("u");
    only_keys(uj, "u", {"source", "law", "values", "generator", "seed", "lo", "hi", "block"});
    read(uj, "u", "source", s.u.source);
    one_of(s.u.source, "u.source", {"law", "values", "generator"});
    read(uj, "u", "law", s.u.law);
    one_of(s.u.law, "u.law", {"reciprocal", "flat", "log_growth", "zero", "custom"});
    read_list(uj, "u", "values", s.u.values);
    read(uj, "u", "generator", s.u.generator);
    if (s.u.source == "generator") one_of(s.u.generator, "u.generator", {"identity", "random_uniform", "indicator"});
    read(uj, "u", "seed", s.u.seed);
    read(uj, "u", "lo", s.u.lo);
    read(uj, "u", "hi", s.u.hi);
    read(uj, "u", "block", s.u.block);
  }
  if (j.contains("budgets")) {
    const auto& bj = j.at("budgets");
    only_keys(bj, "budgets", {"samples", "cases", "norm"});
    read(bj, "budgets", "samples", s.budgets.samples);
    read(bj, "budgets", "cases", s.budgets.cases);
    read(bj, "budgets", "norm", s.budgets.norm);
  }
  if (j.contains("sample_range")) {
    const auto& rj = j.at("sample_range");
    only_keys(rj, "sample_range", {"lo", "hi", "zero_probability"});
    read(rj, "sample_range", "lo", s.sample_range.lo);
    read(rj, "sample_range", "hi", s.sample_range.hi);
    read(rj, "sample_range", "zero_probability", s.sample_range.zero_probability);
    if (!(s.sample_range.lo > 0.0 && s.sample_range.hi >= s.sample_range.lo)) {
      throw ConfigError("sample_range", "need 0 < lo <= hi");
    }
  }
  if (j.contains("flags")) {
    const auto& fj = j.at("flags");
    only_keys(fj, "flags", {"gcthi", "delta_prime_global", "psi_prec_x"});
    read(fj, "flags", "gcthi", s.flags.gcthi);
    read(fj, "flags", "delta_prime_global", s.flags.delta_prime_global);
    read(fj, "flags", "psi_prec_x", s.flags.psi_prec_x);
  }
  if (j.contains("expect")) {
    const auto& ej = j.at("expect");
    only_keys(ej, "expect", {"bounded", "compact", "beta", "beta_level"});
    read(ej, "expect", "bounded", s.expect.bounded);
    read(ej, "expect", "compact", s.expect.compact);
    read(ej, "expect", "beta", s.expect.beta);
    read(ej, "expect", "beta_level", s.expect.beta_level);
    one_of(s.expect.bounded, "expect.bounded", {"", "yes", "no", "undetermined"});
    one_of(s.expect.compact, "expect.compact", {"", "yes", "no", "undetermined"});
    one_of(s.expect.beta, "expect.beta", {"", "decreasing", "stable"});
  }
  if (j.contains("cutoff")) {
    const auto& cj = j.at("cutoff");
    only_keys(cj, "cutoff", {"scale", "exponent"});
    read(cj, "cutoff", "scale", s.cutoff.scale);
    read(cj, "cutoff", "exponent", s.cutoff.exponent);
  }
  if (s.space.type == "family") {
    if (s.space.sizes.empty()) throw ConfigError("space.sizes", "a family needs at least one size");
    if (s.space.member >= s.space.sizes.size()) throw ConfigError("space.member", "index past the last size");
    if (s.u.source != "law") throw ConfigError("u.source", "family multipliers must be given as a law");
  }
  if (s.split_bounds.size() != 0 && s.split_bounds.size() != 2) {
    throw ConfigError("split_bounds", "expected two numbers");
  }
  for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
    if (!(s.epsilons[i] > 0.0)) throw ConfigError("epsilons[" + std::to_string(i) + "]", "must be positive");
  }
  return s;
}

/// Parses text, reporting JSON syntax errors with their byte offset.
inline Scenario scenario_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return scenario_from_json(j);
}

/// Full echo: every field is written, so parsing the result gives back an
/// equal Scenario.
inline ordered_json scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["space"] = {{"type", s.space.type},       {"n_half", s.space.n_half}, {"n", s.space.n},
                {"m", s.space.m},             {"weights", s.space.weights}, {"sizes", s.space.sizes},
                {"atoms_per_block", s.space.atoms_per_block}, {"member", s.space.member}};
  j["partition"] = {{"type", s.partition.type}, {"blocks", s.partition.blocks}};
  j["young"] = {{"kind", s.young.kind},
                {"p", s.young.p},
                {"breakpoints", s.young.breakpoints},
                {"slopes", s.young.slopes},
                {"conjugate", s.young.conjugate}};
  j["u"] = {{"source", s.u.source}, {"law", s.u.law}, {"values", s.u.values}, {"generator", s.u.generator},
            {"seed", s.u.seed},     {"lo", s.u.lo},   {"hi", s.u.hi},         {"block", s.u.block}};
  j["seed"] = s.seed;
  j["budgets"] = {{"samples", s.budgets.samples}, {"cases", s.budgets.cases}, {"norm", s.budgets.norm}};
  j["sample_range"] = {{"lo", s.sample_range.lo},
                       {"hi", s.sample_range.hi},
                       {"zero_probability", s.sample_range.zero_probability}};
  j["claimed_C"] = s.claimed_C ? ordered_json(*s.claimed_C) : ordered_json(nullptr);
  j["split_bounds"] = s.split_bounds;
  j["flags"] = {{"gcthi", s.flags.gcthi},
                {"delta_prime_global", s.flags.delta_prime_global},
                {"psi_prec_x", s.flags.psi_prec_x}};
  j["expect"] = {{"bounded", s.expect.bounded},
                 {"compact", s.expect.compact},
                 {"beta", s.expect.beta},
                 {"beta_level", s.expect.beta_level}};
  j["epsilons"] = s.epsilons;
  j["classifier_epsilons"] = s.classifier_epsilons;
  j["delta"] = s.delta;
  j["cutoff"] = {{"scale", s.cutoff.scale}, {"exponent", s.cutoff.exponent}};
  return j;
}

/// Everything a suite needs, built from a Scenario.
struct Resolved {
  std::shared_ptr<const MeasureSpace> space;
  std::optional<Partition> partition;
  YoungFunction phi = YoungFunction::scaled_power(2.0);
  std::optional<ConjugatePair> pair;  // absent when phi is not superlinear
  std::optional<SimpleFunction> u;
  std::optional<RefinementFamily> family;
  std::optional<EmuOperator> op;
  double certified_C = 1.0;
};

namespace detail {

inline BlockLaw law_of(const MultiplierSpec& u) {
  BlockLaw law;
  if (u.law == "reciprocal") law.type = BlockLaw::Type::Reciprocal;
  else if (u.law == "flat") law.type = BlockLaw::Type::Flat;
  else if (u.law == "log_growth") law.type = BlockLaw::Type::LogGrowth;
  else if (u.law == "zero") law.type = BlockLaw::Type::Zero;
  else {
    law.type = BlockLaw::Type::Custom;
    law.values = u.values;
  }
  return law;
}

inline YoungFunction young_of(const YoungSpec& y) {
  if (y.kind == "power") return YoungFunction::power(y.p);
  if (y.kind == "scaled_power") return YoungFunction::scaled_power(y.p);
  if (y.kind == "exp_type") return YoungFunction::exp_type();
  if (y.kind == "entropy_type") return YoungFunction::entropy_type();
  return YoungFunction::piecewise_linear(y.breakpoints, y.slopes);
}

// Rethrows library validation errors as config errors at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace detail

inline Resolved resolve(const Scenario& s) {
  using detail::at_path;
  Resolved r;
  r.phi = at_path("young", [&] { return detail::young_of(s.young); });
  if (r.phi.superlinear()) {
    r.pair = at_path("young.conjugate", [&] {
      return s.young.conjugate == "numeric" ? ConjugatePair::numeric(r.phi) : ConjugatePair::closed_form(r.phi);
    });
  }

  if (s.space.type == "family") {
    r.family = RefinementFamily{s.space.sizes, s.space.atoms_per_block, detail::law_of(s.u)};
    r.op = at_path("space", [&] { return r.family->member(s.space.sizes[s.space.member]); });
    r.space = r.op->partition().space_ptr();
    r.partition = r.op->partition();
    r.u = r.op->multiplier();
  } else {
    std::optional<Partition> builder_part;
    if (s.space.type == "symmetric") {
      auto sp = at_path("space.n_half", [&] { return build_symmetric_space(s.space.n_half); });
      r.space = sp.space;
      builder_part = sp.partition;
    } else if (s.space.type == "rotation") {
      auto sp = at_path("space", [&] { return build_rotation_space(s.space.n, s.space.m); });
      r.space = sp.space;
      builder_part = sp.partition;
    } else {
      r.space = at_path("space.weights", [&] { return std::make_shared<const MeasureSpace>(s.space.weights); });
    }
    r.partition = at_path("partition", [&] {
      if (s.partition.type == "trivial") return Partition::trivial(r.space);
      if (s.partition.type == "finest") return Partition::singletons(r.space);
      if (s.partition.type == "blocks") return Partition(r.space, s.partition.blocks);
      return builder_part ? *builder_part : Partition::singletons(r.space);
    });
    const auto& part = *r.partition;
    auto u = SimpleFunction::constant(*r.space, 0.0);
    if (s.u.source == "values") {
      if (s.u.values.size() != r.space->size()) {
        throw ConfigError("u.values", "expected " + std::to_string(r.space->size()) + " values");
      }
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = s.u.values[i];
    } else if (s.u.source == "law") {
      const auto law = detail::law_of(s.u);
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = at_path("u.values", [&] { return law(part.block_of(i) + 1); });
      }
    } else if (s.u.generator == "identity") {
      const auto labels = r.space->labels();
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = labels.empty() ? static_cast<double>(i + 1) : labels[i];
    } else if (s.u.generator == "random_uniform") {
      Rng rng(s.u.seed);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(s.u.lo, s.u.hi);
    } else {
      if (s.u.block >= part.block_count()) throw ConfigError("u.block", "no such block");
      u = part.indicator(s.u.block);
    }
    r.u = u;
    r.op = EmuOperator(part, u);
  }
  if (r.pair) r.certified_C = certified_gcthi_constant(*r.partition, *r.pair);
  return r;
}

struct Builtin {
  std::string name;
  std::string description;
  Scenario (*make)();
};

namespace builtin {

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  return Grid{lo, hi, n}.values();
}

inline Scenario power_classical() {
  Scenario s;
  s.name = "power-classical";
  s.description = "x^2/2 pair on the symmetric space: classical conditional Hoelder, C = 1";
  s.space.type = "symmetric";
  s.space.n_half = 8;
  s.young.kind = "scaled_power";
  s.young.p = 2.0;
  s.u.source = "generator";
  s.u.generator = "random_uniform";
  s.u.seed = 11;
  s.claimed_C = 1.0;
  s.flags.gcthi = true;
  s.epsilons = log_grid(0.05, 2.0, 8);
  return s;
}

inline Scenario symmetric_exp() {
  Scenario s;
  s.name = "symmetric-exp";
  s.description = "e^x - x - 1 on the symmetric space, E f(x) = (f(x) + f(-x))/2, C = 4";
  s.space.type = "symmetric";
  s.space.n_half = 8;
  s.young.kind = "exp_type";
  s.u.source = "generator";
  s.u.generator = "random_uniform";
  s.u.seed = 5;
  s.sample_range = {1e-3, 1e2, 0.1};
  s.claimed_C = 4.0;
  const auto phi = YoungFunction::exp_type();
  const auto psi = YoungFunction::entropy_type();
  s.split_bounds = {phi(2.0), psi(2.0)};
  s.flags.gcthi = true;
  s.epsilons = log_grid(0.05, 1.0, 8);
  return s;
}

inline Scenario rotation_3() {
  Scenario s;
  s.name = "rotation-3";
  s.description = "e^x - x - 1 with E the orbit average of x -> x + 1/3 (mod 1), C = 9";
  s.space.type = "rotation";
  s.space.n = 3;
  s.space.m = 4;
  s.young.kind = "exp_type";
  s.u.source = "generator";
  s.u.generator = "random_uniform";
  s.u.seed = 7;
  s.sample_range = {1e-3, 1e2, 0.1};
  s.claimed_C = 9.0;
  s.flags.gcthi = true;
  s.epsilons = log_grid(0.05, 1.0, 8);
  return s;
}

inline Scenario spectrum_demo() {
  Scenario s;
  s.name = "spectrum-demo";
  s.description = "u = [1,3,2,2], blocks {1,2},{3,4}, equal weights; spectrum {2,2,0,0}";
  s.space.type = "explicit";
  s.space.weights = {0.25, 0.25, 0.25, 0.25};
  s.partition.type = "blocks";
  s.partition.blocks = {{0, 1}, {2, 3}};
  s.u.source = "values";
  s.u.values = {1.0, 3.0, 2.0, 2.0};
  s.claimed_C = 1.0;
  s.flags.gcthi = true;
  s.epsilons = {0.5, 1.0, 2.0, 3.0};
  return s;
}

inline Scenario family(std::string name, std::string description, std::string law) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.space.type = "family";
  s.space.sizes = {16, 64, 256};
  s.space.atoms_per_block = 2;
  s.u.source = "law";
  s.u.law = std::move(law);
  s.claimed_C = 1.0;
  s.budgets.samples = 2000;
  s.budgets.cases = 50;
  s.budgets.norm = 200;
  s.epsilons = log_grid(0.01, 1.0, 16);
  s.classifier_epsilons = log_grid(0.1, 1.0, 8);
  return s;
}

inline Scenario decay_family() {
  auto s = family("decay-family", "u = 1/j on block j; compact, beta_m -> 0", "reciprocal");
  s.flags.gcthi = true;
  s.expect = {"yes", "yes", "decreasing", 0.0};
  return s;
}

inline Scenario flat_family() {
  auto s = family("flat-family", "u = 1 on every block; bounded, not compact, beta_m = 1", "flat");
  s.flags.gcthi = true;
  s.expect = {"yes", "no", "stable", 1.0};
  return s;
}

inline Scenario growth_family() {
  auto s = family("growth-family", "u = log(1 + j) on block j; unbounded", "log_growth");
  s.flags.delta_prime_global = true;
  s.expect = {"no", "no", "", 0.0};
  return s;
}

}  // namespace builtin

inline const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> all = [] {
    std::vector<Builtin> v;
    for (auto make : {builtin::power_classical, builtin::symmetric_exp, builtin::rotation_3, builtin::spectrum_demo,
                      builtin::decay_family, builtin::flat_family, builtin::growth_family}) {
      const auto s = make();
      v.push_back({s.name, s.description, make});
    }
    return v;
  }();
  return all;
}

inline Scenario builtin_scenario(const std::string& name) {
  for (const auto& b : builtins()) {
    if (b.name == name) return b.make();
  }
  throw ConfigError("builtin", "unknown scenario \"" + name + "\"");
}

}  // namespace emu::cli
