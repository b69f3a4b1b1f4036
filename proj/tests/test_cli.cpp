#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace ml = momentlines;
namespace fs = std::filesystem;
using ml::json::Json;

namespace {

const std::string kFixtures = MOMENTLINES_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "momentlines");
  std::ostringstream out, err;
  const int code = ml::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("momentlines_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliSolve, ExampleFixtureSolves) {
  const CliResult r = run({"solve", fixture("rectangle_a1_b1.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "solved");
  EXPECT_LT(doc["residual"].get<double>(), 1e-9);
  EXPECT_LE(doc["measure"]["atoms"].size(), 8u);
  EXPECT_EQ(doc["lines"].size(), 4u);
}

TEST(CliSolve, ZeroTableHasUniqueZeroSolution) {
  const CliResult r = run({"solve", fixture("zero_m1n1.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["measure"]["atoms"].empty());
  EXPECT_EQ(doc["note"], "unique solution μ≡0");
}

TEST(CliSolve, UnsolvableExitsTwo) {
  const CliResult r = run({"solve", fixture("unsolvable_m1n1.json"), "--json"});
  EXPECT_EQ(r.code, 2);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "unsolvable");
  EXPECT_FALSE(doc.contains("residual"));
}

TEST(CliSolve, SufficientConditionFailureExitsTwo) {
  const CliResult r = run({"solve", fixture("base_fail.json"), "--json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.out)["verdict"], "sufficient_condition_fails");
}

TEST(CliSolve, InputErrorsExitOneWithDistinctMessages) {
  TempDir dir;
  const std::string malformed = dir.write("bad.json", "{\"M\": 1, \"N\": ");
  const std::string dims = dir.write("dims.json", R"({"M": 4, "N": 4, "s": [[1,0,0,0,0],[0,0,0,0,0],[0,0,0,0,0],[0,0,0,0,0],[0,0,0,0,0]]})");
  const std::string nonfinite = dir.write("inf.json", R"({"M": 1, "N": 1, "s": [[1e999, 0], [0, 0]]})");
  const std::string shape = dir.write("shape.json", R"({"M": 1, "N": 1, "s": [[1, 0]]})");

  std::vector<std::string> messages;
  for (const auto& p : {malformed, dims, nonfinite, shape, dir.path("missing.json")}) {
    const CliResult r = run({"solve", p});
    EXPECT_EQ(r.code, 1) << p << ": " << r.err;
    EXPECT_FALSE(r.err.empty());
    messages.push_back(r.err.substr(r.err.find(':') + 1));
  }
  for (std::size_t i = 0; i < messages.size(); ++i)
    for (std::size_t j = i + 1; j < messages.size(); ++j) EXPECT_NE(messages[i], messages[j]);
  EXPECT_NE(run({"solve", dims}).err.find("unsupported dimensions"), std::string::npos);
}

TEST(CliSolve, BadFlagsExitOne) {
  EXPECT_EQ(run({"solve", fixture("rectangle_a1_b1.json"), "--a3-growth", "0.5"}).code, 1);
  EXPECT_EQ(run({"solve", fixture("rectangle_a1_b1.json"), "--tol", "abc"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST(CliSolve, HumanOutputListsMeasure) {
  const CliResult r = run({"solve", fixture("rank1_m1n2.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verdict: solved"), std::string::npos);
  EXPECT_NE(r.out.find("x1 = 3.0, x2 = 2.0, w = 1.0"), std::string::npos);
}

TEST(CliSolve, CompletionFlagsAreApplied) {
  TempDir dir;
  const std::string out = dir.path("out.json");
  const CliResult r = run({"solve", fixture("rectangle_a1_b1.json"), "--json", "--complete-s03", "0.25", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const Json doc = Json::parse(slurp(out));
  EXPECT_EQ(doc["diagnostics"]["completion_s_m3"][0], 0.25);
  const auto mu = ml::json::measure_from_json(doc["measure"]);
  EXPECT_NEAR(ml::moment_2d(mu, 0, 3), 0.25, 1e-9);
}

TEST(CliSolve, OutputIsDeterministic) {
  for (const char* f : {"rectangle_a1_b1.json", "rectangle_a2_b3.json", "rank1_m1n2.json"}) {
    const CliResult a = run({"solve", fixture(f), "--json"});
    const CliResult b = run({"solve", fixture(f), "--json"});
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(CliSolveVerify, RoundTripExitsZero) {
  TempDir dir;
  for (const char* f : {"rectangle_a1_b1.json", "rectangle_a2_b3.json", "rank1_m1n2.json", "zero_m1n1.json"}) {
    const CliResult s = run({"solve", fixture(f), "--json"});
    ASSERT_EQ(s.code, 0) << f << s.err;
    const std::string mpath = dir.write("measure.json", Json::parse(s.out)["measure"].dump());
    const CliResult v = run({"verify", mpath, fixture(f), "--json"});
    EXPECT_EQ(v.code, 0) << f << v.out;
  }
}

TEST(CliVerify, Examples) {
  const CliResult fail = run({"verify", fixture("empty_measure.json"), fixture("unit_mass.json"), "--json"});
  EXPECT_EQ(fail.code, 2);
  EXPECT_EQ(Json::parse(fail.out)["residual"], 1.0);

  TempDir dir;
  const std::string mu = dir.write("mu.json", R"({"atoms": [{"x1": 1, "x2": 2, "w": 0.5}]})");
  const std::string tab = dir.write("t.json", R"({"M": 1, "N": 1, "s": [[0.5, 1], [0.5, 1]]})");
  const CliResult ok = run({"verify", mu, tab, "--json"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(Json::parse(ok.out)["residual"], 0.0);

  const std::string neg = dir.write("neg.json", R"({"atoms": [{"x1": 1, "x2": 2, "w": -0.5}]})");
  EXPECT_EQ(run({"verify", neg, tab}).code, 1);
}

TEST(CliVerify, EnvironmentToleranceIsUsed) {
  ::setenv("MOMENTLINES_TOL", "2", 1);
  EXPECT_EQ(run({"verify", fixture("empty_measure.json"), fixture("unit_mass.json")}).code, 0);
  ::setenv("MOMENTLINES_TOL", "nope", 1);
  EXPECT_EQ(run({"verify", fixture("empty_measure.json"), fixture("unit_mass.json")}).code, 1);
  ::unsetenv("MOMENTLINES_TOL");
  EXPECT_EQ(run({"verify", fixture("empty_measure.json"), fixture("unit_mass.json"), "--tol", "2"}).code, 0);
}

TEST(CliRegion, ExampleEndpoints) {
  const CliResult r = run({"region", fixture("rectangle_a1_b1.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  ASSERT_EQ(doc["I1"].size(), 2u);
  EXPECT_EQ(doc["I1"][0]["hi"], doc["I1"][1]["lo"]);
  EXPECT_NEAR(doc["I1"][0]["hi"].get<double>(), 0.5773502691896258, 1e-12);
  EXPECT_TRUE(doc["I1"][1]["hi_inf"].get<bool>());
  EXPECT_TRUE(doc["I1"][1]["hi"].is_null());
  ASSERT_EQ(doc["admissible"].size(), 1u);
  EXPECT_EQ(doc["admissible"][0]["lo"], 0.0);
  EXPECT_NEAR(doc["admissible"][0]["hi"].get<double>(), 0.5773502691896258, 1e-12);
}

TEST(CliRegion, HumanFormat) {
  const CliResult r = run({"region", fixture("rectangle_a1_b1.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("I1: (0.000000, 0.577350) ∪ (0.577350, ∞)"), std::string::npos);
}

TEST(CliRegion, BaseFailureExitsTwoWithReason) {
  const CliResult r = run({"region", fixture("base_fail.json"), "--json"});
  EXPECT_EQ(r.code, 2);
  const Json doc = Json::parse(r.out);
  EXPECT_FALSE(doc["base_conditions"].get<bool>());
  EXPECT_FALSE(doc["reason"].get<std::string>().empty());
  EXPECT_EQ(run({"region", fixture("rank1_m1n2.json")}).code, 1);
}

TEST(CliSplit, Examples) {
  const CliResult r = run({"split", fixture("split_line_pair.json"), "--lines", "-1,1", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["W"], 2.0);
  EXPECT_EQ(doc["s"], Json::parse("[[0.5, 0.5]]"));

  const CliResult single = run({"split", fixture("unit_mass.json"), "--lines", "3", "--json"});
  ASSERT_EQ(single.code, 0);
  EXPECT_EQ(Json::parse(single.out)["s"], Json::parse("[[1.0]]"));

  EXPECT_EQ(run({"split", fixture("split_line_pair.json"), "--lines", "1,1"}).code, 1);
  EXPECT_EQ(run({"split", fixture("split_line_pair.json"), "--lines", "1,0"}).code, 1);
  EXPECT_EQ(run({"split", fixture("split_line_pair.json"), "--lines", "0,1,2"}).code, 1);
  EXPECT_EQ(run({"split", fixture("split_line_pair.json"), "--lines", "0,x"}).code, 1);
  EXPECT_EQ(run({"split", fixture("split_line_pair.json")}).code, 1);
}

TEST(CliBinary, ExitCodesFromRealProcess) {
  TempDir dir;
  const std::string bin = MOMENTLINES_BINARY;
  auto status = [&](const std::string& args) {
    const std::string cmd = "\"" + bin + "\" " + args + " >" + dir.path("o.txt") + " 2>" + dir.path("e.txt");
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("solve " + fixture("rectangle_a1_b1.json")), 0);
  EXPECT_EQ(status("solve " + fixture("unsolvable_m1n1.json")), 2);
  EXPECT_EQ(status("solve " + dir.write("bad.json", "not json")), 1);
  EXPECT_EQ(status("solve " + fixture("needs_search.json")), 0);
  EXPECT_EQ(status("solve " + fixture("needs_search.json") + " --a3-max-iters 0 --a3-margin 1.0000001"), 3);
  EXPECT_EQ(status("region " + fixture("rectangle_a1_b1.json") + " --json"), 0);
  EXPECT_NE(slurp(dir.path("o.txt")).find("\"I1\""), std::string::npos);
  EXPECT_EQ(status("region " + fixture("base_fail.json")), 2);
}
