#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gencluster/cli.hpp"

using namespace gencluster;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gencluster");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
  const auto r = run_cli(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

// Exit status of the installed binary.
int exit_status(const std::string& args) {
  const std::string cmd = std::string(GENCLUSTER_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("gencluster_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Mutate, EmptyWordEchoesTheCanonicalSeed) {
  const auto j = run_json({"mutate", "--example", "b2", "--word", ""});
  EXPECT_EQ(j["x"], (json{"x1", "x2"}));
  EXPECT_EQ(j["coefficients"]["y"], (json{"y1", "y2"}));
  EXPECT_EQ(j["B"], (json{{0, -1}, {1, 0}}));
  EXPECT_EQ(j["word"], json::array());
}

TEST(Mutate, DoubleStepIsTheIdentity) {
  const auto empty = run_json({"mutate", "--example", "b2", "--word", ""});
  auto twice = run_json({"mutate", "--example", "b2", "--word", "1,1"});
  EXPECT_EQ(twice["canonical"], empty["canonical"]);
  EXPECT_EQ(twice["x"], empty["x"]);
  EXPECT_EQ(twice["coefficients"], empty["coefficients"]);
}

TEST(Mutate, FirstStepMatchesTheTable) {
  const auto j = run_json({"mutate", "--example", "b2", "--word", "1"});
  const auto t = VariableTable::make({2, 1});
  auto parse = [&](const json& s) { return parse_expression(t, s.get<std::string>()); };
  ExpressionParser yh(t, OplusMode::universal);
  yh.with_exchange_matrix(IntMatrix{{0, -1}, {1, 0}});
  EXPECT_EQ(parse(j["x"][0]), yh.parse("x1^-1*(1 + z_1_1*yh1 + yh1^2)/(1 + z_1_1*y1 + y1^2)"));
  EXPECT_EQ(parse(j["coefficients"]["y"][0]), parse_expression(t, "y1^-1"));
  EXPECT_EQ(parse(j["coefficients"]["y"][1]), parse_expression(t, "y2*(1 + z_1_1*y1 + y1^2)"));
  EXPECT_EQ(j["word"], (json{1}));
}

TEST(Mutate, OutputFeedsBackAsInput) {
  const auto r = run_cli({"mutate", "--example", "b2", "--word", "1,2,1"});
  ASSERT_EQ(r.code, 0);
  const auto back = run_json({"mutate", "--input", r.out, "--word", "1,2,1"});
  const auto initial = run_json({"mutate", "--example", "b2"});
  EXPECT_EQ(back["canonical"], initial["canonical"]);
}

TEST(Mutate, PrincipalAndText) {
  const auto j = run_json({"mutate", "--example", "b2", "--semifield", "principal", "--word", "1"});
  EXPECT_EQ(j["coefficients"]["semifield"], "principal");
  EXPECT_EQ(j["coefficients"]["y"], (json{"y1^-1", "y2"}));
  const auto r = run_cli({"mutate", "--example", "b2", "--format", "text", "--word", "1,1", "--debug-epsilon"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("x1 = x1"), std::string::npos);
}

TEST(Pattern, B2DumpContainsC5) {
  const auto j = run_json({"pattern", "--example", "b2", "--depth", "6", "--semifield", "principal"});
  EXPECT_EQ(j["vertices"].size(), reduced_words(2, 6).size());
  bool found = false;
  for (const auto& v : j["vertices"])
    if (v["word"] == json{1, 2, 1, 2}) {
      EXPECT_EQ(v["C"], (json{{-1, 2}, {-1, 1}}));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Pattern, DepthZeroIsTheInitialVertex) {
  const auto j = run_json({"pattern", "--example", "b2", "--depth", "0"});
  ASSERT_EQ(j["vertices"].size(), 1u);
  EXPECT_EQ(j["vertices"][0]["C"], (json{{1, 0}, {0, 1}}));
  EXPECT_EQ(j["vertices"][0]["G"], (json{{1, 0}, {0, 1}}));
}

TEST(Pattern, RankOneHasTwoVertices) {
  const auto j = run_json({"pattern", "--input", R"({"n": 1, "B": [[0]], "d": [2], "coefficients": "principal"})",
                           "--depth", "1"});
  ASSERT_EQ(j["vertices"].size(), 2u);
  EXPECT_EQ(j["vertices"][1]["C"], (json{{-1}}));
  EXPECT_EQ(j["vertices"][1]["G"], (json{{-1}}));
}

TEST(Verify, B2AllPasses) {
  const auto r = run_cli({"verify", "--all", "--example", "b2"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["reports"].size(), check_names().size() + 1);
}

TEST(Verify, DualitySweep) {
  const auto r = run_cli({"verify", "--check", "duality", "--n", "2", "--seed", "42", "--format", "text"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST(Verify, ReportsAreReplayable) {
  const auto j = run_json({"verify", "--check", "laurent", "--instances", "2", "--seed", "3"});
  for (const auto& rep : j["reports"]) {
    EXPECT_EQ(rep["check"], "laurent");
    EXPECT_TRUE(rep.contains("params"));
    EXPECT_GT(rep["vertices_checked"].get<int>(), 0);
    EXPECT_TRUE(rep["failures"].empty());
  }
}

TEST(Verify, OutputIsDeterministic) {
  const std::vector<std::string> args{"verify", "--check", "two-route-g", "--instances", "3", "--seed", "5"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
  const std::vector<std::string> pattern{"pattern", "--example", "b2", "--depth", "3"};
  EXPECT_EQ(run_cli(pattern).out, run_cli(pattern).out);
}

TEST(Example, DefaultRunMatches) {
  const auto r = run_cli({"example"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("7/7 seeds match, 7 C, 7 G, 14 F-polynomials match"), std::string::npos);
  const auto j = run_json({"example", "--format", "json"});
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_FALSE(j.contains("first_mismatch"));
}

TEST(Example, CorruptedGoldenFileFails) {
  std::ifstream in(GENCLUSTER_GOLDEN);
  json golden = json::parse(in);
  golden["principal"][4]["C"][0][1] = 3;
  const auto path = temp_file("corrupt.json", golden.dump());
  const auto r = run_cli({"example", "--golden", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("first mismatch: t=5 C"), std::string::npos) << r.out;
  const auto j = json::parse(run_cli({"example", "--golden", path.string(), "--format", "json"}).out);
  EXPECT_EQ(j["first_mismatch"]["t"], 5);
  EXPECT_EQ(exit_status("example --golden " + path.string()), 1);
  std::filesystem::remove(path);
}

TEST(ExitCodes, Contract) {
  EXPECT_EQ(exit_status("example"), 0);
  EXPECT_EQ(exit_status("--help"), 0);
  EXPECT_EQ(exit_status(""), 2);
  EXPECT_EQ(exit_status("mutate --example b2 --word 3"), 2);
  EXPECT_EQ(exit_status("mutate --example b2 --format yaml"), 2);
  EXPECT_EQ(exit_status("mutate"), 2);
  EXPECT_EQ(exit_status("verify --check nonsense --example b2"), 2);
  const auto bad = temp_file("bad_b.json", R"({"n": 2, "B": [[0, 1], [1, 0]], "d": [1, 1]})");
  EXPECT_EQ(exit_status("mutate --input " + bad.string()), 2);
  std::filesystem::remove(bad);
  const auto broken = temp_file("broken.json", "{\"n\": 2, ");
  EXPECT_EQ(exit_status("mutate --input " + broken.string()), 2);
  std::filesystem::remove(broken);
}

TEST(ExitCodes, SignConditionMessage) {
  const auto r = run_cli({"mutate", "--input", R"({"n": 2, "B": [[0, 1], [1, 0]], "d": [1, 1]})"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sign"), std::string::npos) << r.err;
}
