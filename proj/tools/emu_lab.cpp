// emu_lab: run scenario suites for E M_u operators on finite Orlicz spaces.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emu/cli/run.hpp"
#include "emu/cli/scenario.hpp"
#include "emu/opemu.hpp"

namespace {

using emu::cli::ConfigError;
using emu::cli::Scenario;

struct Source {
  std::string config;
  std::string builtin;
  std::optional<std::size_t> member;
};

Scenario load(const Source& src) {
  if (src.config.empty() == src.builtin.empty()) throw ConfigError("", "give exactly one of --config or --builtin");
  Scenario s;
  if (!src.builtin.empty()) {
    s = emu::cli::builtin_scenario(src.builtin);
  } else {
    std::ifstream in(src.config);
    if (!in) throw ConfigError("", "cannot read " + src.config);
    std::stringstream buf;
    buf << in.rdbuf();
    s = emu::cli::scenario_from_text(buf.str());
  }
  if (src.member) {
    if (s.space.type != "family" || *src.member >= s.space.sizes.size()) {
      throw ConfigError("space.member", "--member needs a family scenario and an index below its size count");
    }
    s.space.member = *src.member;
  }
  return s;
}

// Relative output paths go under EMU_LAB_OUT_DIR when it is set.
std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path p(out);
  if (const char* dir = std::getenv("EMU_LAB_OUT_DIR"); dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(output_path(out));
  if (!f) throw ConfigError("out", "cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with E M_u operators on finite Orlicz spaces"};
  app.require_subcommand(1);

  Source src;
  std::vector<std::string> suites;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "json";

  auto* run = app.add_subcommand("run", "Run suites on a scenario and write a report");
  run->add_option("--config", src.config, "Scenario JSON file");
  run->add_option("--builtin", src.builtin, "Builtin scenario name");
  run->add_option("--suite", suites, "Suite to run (repeatable; default all)");
  run->add_option("--out", out, "Report path (default stdout)");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  run->add_option("--member", src.member, "Family member index for single-operator suites");

  auto* list = app.add_subcommand("list-scenarios", "List builtin scenarios");

  Source msrc;
  std::string mout;
  auto* exp = app.add_subcommand("export-matrix", "Write the dense matrix of T as CSV");
  exp->add_option("--config", msrc.config, "Scenario JSON file");
  exp->add_option("--builtin", msrc.builtin, "Builtin scenario name");
  exp->add_option("--member", msrc.member, "Family member index");
  exp->add_option("--out", mout, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : emu::cli::kConfigError;
  }

  try {
    if (*list) {
      for (const auto& b : emu::cli::builtins()) std::cout << b.name << "  " << b.description << "\n";
      return emu::cli::kPass;
    }
    if (*exp) {
      const auto r = emu::cli::resolve(load(msrc));
      std::ostringstream os;
      emu::write_matrix_csv(os, r.op->matrix());
      emit(mout, os.str());
      return emu::cli::kPass;
    }
    auto s = load(src);
    if (seed) s.seed = *seed;
    const auto rep = emu::cli::run_scenario(s, suites);
    emit(out, format == "json" ? emu::cli::report_json(rep).dump(2) + "\n" : emu::cli::report_table(rep));
    return rep.passed() ? emu::cli::kPass : emu::cli::kCheckFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return emu::cli::kConfigError;
  } catch (const emu::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emu::cli::kConfigError;
  }
}
