#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "gidx/error.hpp"
#include "gidx/scenario.hpp"

using namespace gidx;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gerbe-index");
  std::ostringstream out, err;
  const int code = gidx::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gidx_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string p = temp_path(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small Thom scenario that runs in well under a second.
const char* kSmallThom = R"({
  "version": 1, "name": "small-thom",
  "atlas": {"preset": "sphere-two-patch", "grid": 12},
  "thom": {"fixtures": [[1, 0]], "base_grid": 12, "fiber_grid": 12},
  "verification": {"checks": ["thom-rr"]}
})";

}  // namespace

TEST(ScenarioParse, BundledFixturesParse) {
  const auto names = bundled_scenario_names();
  EXPECT_EQ(names.size(), 5u);
  for (const auto& n : names) {
    const Scenario s = parse_scenario(bundled_scenario_text(n));
    EXPECT_EQ(s.name, n);
    EXPECT_FALSE(s.verification.checks.empty());
  }
}

TEST(ScenarioParse, ScenarioDirectoryMirrorsBundledFixtures) {
  for (const auto& n : bundled_scenario_names()) {
    const std::string p = std::string(GIDX_SOURCE_DIR) + "/scenarios/" + n + ".json";
    EXPECT_EQ(slurp(p), bundled_scenario_text(n)) << p;
  }
}

TEST(ScenarioParse, MalformedJsonReportsLine) {
  EXPECT_EQ(code_of("{\n  \"version\": 1,\n  \"name\": \n}"), ErrorCode::ParseError);
  EXPECT_NE(message_of("{\n  \"version\": 1,\n  \"name\": \n}").find("line 4"), std::string::npos);
}

TEST(ScenarioParse, VersionIsChecked) {
  EXPECT_EQ(code_of(R"({"version": 7, "complex": {"preset": "point"}})"), ErrorCode::UnsupportedVersion);
  EXPECT_EQ(code_of(R"({"complex": {"preset": "point"}})"), ErrorCode::ParseError);
}

TEST(ScenarioParse, FieldErrorsNameTheField) {
  EXPECT_NE(message_of(R"({"version": 1, "complex": {"preset": "point"}, "colour": 1})").find("/colour"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"version": 1, "atlas": {"preset": "sphere-two-patch", "grid": "big"}})")
                .find("/atlas/grid"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"version": 1, "atlas": {"preset": "sphere-three-patch"},
                          "gerbe": {"n": 3, "mu": [1, 2]}})")
                .find("/gerbe/mu"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"version": 1, "complex": {"preset": "point"},
                          "verification": {"checks": ["index"]}})")
                .find("family"),
            std::string::npos);
}

TEST(ScenarioParse, ExplicitComplexAndLift) {
  const Scenario s = parse_scenario(R"({
    "version": 1,
    "complex": {"vertices": 3, "maximal": [[0, 1, 2]]},
    "gerbe": {"n": 2, "lift": [
      [[1, 0], [0, 1]],
      [[-1, 0], [0, -1]],
      [[1, 0], [0, 1]]
    ]}
  })");
  const GerbeCocycle t = scenario_twist(s, scenario_cover(s, nullptr));
  EXPECT_EQ(t.n(), 2);
  EXPECT_EQ(t.values().at(0), 1);
  EXPECT_EQ(dd_class_summary(t), "trivial class");
}

TEST(ScenarioTwist, ClassSummaries) {
  const Scenario rp2 = parse_scenario(bundled_scenario_text("suspended-rp2-gerbe"));
  EXPECT_EQ(dd_class_summary(scenario_twist(rp2, scenario_cover(rp2, nullptr))), "torsion Z/2 generator");
  Scenario zero = rp2;
  zero.gerbe->torsion_generator.reset();
  EXPECT_EQ(dd_class_summary(scenario_twist(zero, scenario_cover(zero, nullptr))), "zero");
}

TEST(ScenarioTwist, TorsionOrderMustMatchN) {
  Scenario s = parse_scenario(bundled_scenario_text("suspended-rp2-gerbe"));
  s.gerbe->n = 3;
  EXPECT_THROW(scenario_twist(s, scenario_cover(s, nullptr)), Error);
}

TEST(Report, JsonRoundTrip) {
  VerificationReport r;
  r.scenario = "x";
  r.grid = 16;
  r.checks.push_back({"chern", "c1 integral", 0.999, 1.0, 0.001, 1e-3, true, "note"});
  r.checks.push_back({"index", "index degree 2", 0.1 + 0.2, 0.3, 5.551115123125783e-17, 1e-9, true, ""});
  const std::string text = report_to_json(r);
  EXPECT_EQ(report_to_json(report_from_json(text)), text);
  EXPECT_TRUE(report_from_json(text).pass());
  EXPECT_NE(report_table(r).find("PASS"), std::string::npos);
}

TEST(Cli, VerifiesBundledFixture) {
  const CliResult r = run_cli({"verify", "suspended-rp2-gerbe"});
  EXPECT_EQ(r.code, gidx::cli::kPass) << r.err;
  EXPECT_NE(r.out.find("torsion Z/2 generator"), std::string::npos);
}

TEST(Cli, DdclassPrintsSummary) {
  const CliResult r = run_cli({"ddclass", "suspended-rp2-gerbe"});
  EXPECT_EQ(r.code, gidx::cli::kPass);
  EXPECT_NE(r.out.find("torsion [2]"), std::string::npos);
  EXPECT_NE(r.out.find("torsion Z/2 generator"), std::string::npos);
  EXPECT_NE(run_cli({"ddclass", "monopole"}).out.find("zero"), std::string::npos);
}

TEST(Cli, NonCocycleThetaNamesTheSimplex) {
  const std::string p = write_temp("noncocycle.json", R"({
    "version": 1,
    "complex": {"vertices": 4, "maximal": [[0, 1, 2, 3]]},
    "gerbe": {"n": 2, "theta": [1, 0, 0, 0]},
    "verification": {"checks": ["gerbe-cocycle"]}
  })");
  const CliResult r = run_cli({"validate", p});
  EXPECT_EQ(r.code, gidx::cli::kFail);
  EXPECT_NE(r.err.find("NotACocycle"), std::string::npos);
  EXPECT_NE(r.err.find("[0,1,2,3]"), std::string::npos);
  EXPECT_NE(r.err.find("cech-gerbe"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"verify", write_temp("v9.json", R"({"version": 9, "complex": {"preset": "point"}})")}).code,
            gidx::cli::kInputError);
  EXPECT_EQ(run_cli({"verify", "/nonexistent/scenario.json"}).code, gidx::cli::kInputError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, gidx::cli::kInputError);
  EXPECT_EQ(run_cli({"verify"}).code, gidx::cli::kInputError);
  EXPECT_EQ(run_cli({"--help"}).code, gidx::cli::kPass);
  const std::string thom = write_temp("thom.json", kSmallThom);
  EXPECT_EQ(run_cli({"verify", thom}).code, gidx::cli::kPass);
  // Below the quadrature floor.
  EXPECT_EQ(run_cli({"verify", thom, "--tolerance", "1e-12"}).code, gidx::cli::kFail);
}

TEST(Cli, ThreadsOneReportsAreByteIdentical) {
  const std::string a = temp_path("report_a.json"), b = temp_path("report_b.json");
  ASSERT_EQ(run_cli({"verify", "monopole", "--threads", "1", "--report", a}).code, gidx::cli::kPass);
  ASSERT_EQ(run_cli({"verify", "monopole", "--threads", "1", "--report", b}).code, gidx::cli::kPass);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a).find("\"threads\": 1"), std::string::npos);
  const CliResult shown = run_cli({"report", a});
  EXPECT_EQ(shown.code, gidx::cli::kPass);
  EXPECT_NE(shown.out.find("descent"), std::string::npos);
}
