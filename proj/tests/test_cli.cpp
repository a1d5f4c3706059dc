#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "emu/cli/run.hpp"
#include "emu/cli/scenario.hpp"

using emu::cli::ConfigError;
using emu::cli::Scenario;
using json = nlohmann::json;

namespace fs = std::filesystem;

namespace {

std::string config_error_path(const std::string& text) {
  try {
    emu::cli::scenario_from_text(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("emu_lab_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int lab(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" EMU_LAB_PATH "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json without_timing(json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST(Scenario, RoundTripsEveryBuiltin) {
  for (const auto& b : emu::cli::builtins()) {
    const auto s = emu::cli::builtin_scenario(b.name);
    const auto text = emu::cli::scenario_to_json(s).dump();
    EXPECT_EQ(emu::cli::scenario_from_text(text), s) << b.name;
  }
}

TEST(Scenario, DefaultsFromMinimalConfig) {
  const auto s = emu::cli::scenario_from_text(R"({"name": "tiny"})");
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.space.type, "symmetric");
  EXPECT_EQ(s.budgets.samples, 10000u);
}

TEST(Scenario, ErrorsNameTheField) {
  EXPECT_EQ(config_error_path(R"({"colour": 1})"), "colour");
  EXPECT_EQ(config_error_path(R"({"space": {"type": "torus"}})"), "space.type");
  EXPECT_EQ(config_error_path(R"({"space": {"n_half": -3}})"), "space.n_half");
  EXPECT_EQ(config_error_path(R"({"young": {"p": "two"}})"), "young.p");
  EXPECT_EQ(config_error_path(R"({"budgets": {"samples": 1.5}})"), "budgets.samples");
  EXPECT_EQ(config_error_path(R"({"partition": {"type": "blocks", "blocks": [[0, 1], "x"]}})"), "partition.blocks[1]");
  EXPECT_EQ(config_error_path(R"({"epsilons": [0.1, 0.0]})"), "epsilons[1]");
  EXPECT_EQ(config_error_path(R"({"sample_range": {"lo": 0}})"), "sample_range");
  EXPECT_EQ(config_error_path(R"({"space": {"type": "family", "sizes": [4], "member": 1}, "u": {"source": "law"}})"),
            "space.member");
}

TEST(Scenario, ParseErrorReportsOffset) {
  try {
    emu::cli::scenario_from_text("{\"name\": ");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("parse error at byte"), std::string::npos);
  }
}

TEST(Scenario, ResolveWrapsLibraryErrors) {
  auto s = emu::cli::builtin_scenario("spectrum-demo");
  s.partition.blocks = {{0, 1}, {1, 2, 3}};
  EXPECT_THROW(emu::cli::resolve(s), ConfigError);
  EXPECT_THROW(emu::cli::builtin_scenario("no-such"), ConfigError);
}

TEST(Builtins, ListAndResolve) {
  const auto& all = emu::cli::builtins();
  ASSERT_EQ(all.size(), 7u);
  bool seen = false;
  for (const auto& b : all) {
    seen = seen || b.name == "symmetric-exp";
    EXPECT_NO_THROW(emu::cli::resolve(emu::cli::builtin_scenario(b.name))) << b.name;
  }
  EXPECT_TRUE(seen);
}

TEST(Run, SymmetricExpGcthiPasses) {
  const auto rep = emu::cli::run_scenario(emu::cli::builtin_scenario("symmetric-exp"), {"gcthi"});
  ASSERT_EQ(rep.suites.size(), 1u);
  EXPECT_TRUE(rep.suites[0].passed());
  EXPECT_FALSE(rep.suites[0].checks.empty());
}

TEST(Run, SpectrumDemoReportsPrediction) {
  const auto rep = emu::cli::run_scenario(emu::cli::builtin_scenario("spectrum-demo"), {"spectrum"});
  const auto j = emu::cli::report_json(rep);
  EXPECT_EQ(j["suites"][0]["data"]["predicted"], json({"0", "0", "2", "2"}));
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Run, EmptyFilterRunsAllSuites) {
  const auto rep = emu::cli::run_scenario(emu::cli::builtin_scenario("spectrum-demo"));
  ASSERT_EQ(rep.suites.size(), emu::cli::suite_names().size());
  EXPECT_EQ(rep.suites.size(), 9u);
  for (std::size_t i = 0; i < rep.suites.size(); ++i) EXPECT_EQ(rep.suites[i].name, emu::cli::suite_names()[i]);
  EXPECT_THROW(emu::cli::run_scenario(emu::cli::builtin_scenario("spectrum-demo"), {"nope"}), ConfigError);
}

TEST(Run, ReportIsDeterministic) {
  const auto s = emu::cli::builtin_scenario("rotation-3");
  const auto a = emu::cli::report_json(emu::cli::run_scenario(s));
  const auto b = emu::cli::report_json(emu::cli::run_scenario(s));
  EXPECT_EQ(without_timing(a).dump(), without_timing(b).dump());
  EXPECT_EQ(a["tool"], "emu_lab");
  EXPECT_TRUE(a.contains("timing"));
}

TEST(Binary, ListScenarios) {
  const auto out = scratch("list.txt");
  ASSERT_EQ(std::system(("\"" EMU_LAB_PATH "\" list-scenarios > \"" + out.string() + "\"").c_str()), 0);
  const auto text = slurp(out);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 7u);
  EXPECT_NE(text.find("symmetric-exp"), std::string::npos);
}

TEST(Binary, RunIsDeterministicAcrossProcesses) {
  const auto a = scratch("a.json"), b = scratch("b.json");
  ASSERT_EQ(lab("run --builtin power-classical --out \"" + a.string() + "\""), 0);
  ASSERT_EQ(lab("run --builtin power-classical --out \"" + b.string() + "\""), 0);
  EXPECT_EQ(without_timing(json::parse(slurp(a))), without_timing(json::parse(slurp(b))));
}

TEST(Binary, ExitCodes) {
  const auto good = scratch("good.json");
  std::ofstream(good) << emu::cli::scenario_to_json(emu::cli::builtin_scenario("spectrum-demo")).dump();
  EXPECT_EQ(lab("run --config \"" + good.string() + "\" --suite spectrum"), 0);

  auto failing = emu::cli::builtin_scenario("power-classical");
  failing.claimed_C = 0.5;
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << emu::cli::scenario_to_json(failing).dump();
  EXPECT_EQ(lab("run --config \"" + bad.string() + "\" --suite gcthi"), 1);

  const auto broken = scratch("broken.json");
  std::ofstream(broken) << R"({"space": {"type": "torus"}})";
  EXPECT_EQ(lab("run --config \"" + broken.string() + "\""), 2);
  EXPECT_EQ(lab("run --builtin spectrum-demo --suite nope"), 2);
  EXPECT_EQ(lab("run --builtin no-such"), 2);
  EXPECT_EQ(lab("run"), 2);
  EXPECT_EQ(lab("bogus-subcommand"), 2);
}

TEST(Binary, ExportMatrixCsv) {
  const auto out = scratch("m.csv");
  ASSERT_EQ(lab("export-matrix --builtin spectrum-demo --out \"" + out.string() + "\""), 0);
  EXPECT_EQ(slurp(out), "0.5,1.5,0,0\n0.5,1.5,0,0\n0,0,1,1\n0,0,1,1\n");
}

TEST(Binary, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("outdir");
  fs::remove_all(dir);
  ASSERT_EQ(lab("run --builtin spectrum-demo --suite spectrum --format table --out rep.txt",
                "EMU_LAB_OUT_DIR=\"" + dir.string() + "\""),
            0);
  EXPECT_NE(slurp(dir / "rep.txt").find("spectrum"), std::string::npos);
}
