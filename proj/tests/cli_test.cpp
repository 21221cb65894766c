#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldgof_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    write("counts.txt", "# observed\n3\n1\n");
    write("probs.txt", "1/2\n1/2\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& body) const { std::ofstream(path(name)) << body; }

  CliRun run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string cmd = std::string(LDGOF_CLI_PATH) + " " + args + " > " + out + " 2> " + path("stderr.txt");
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream body;
    body << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, body.str()};
  }

  nlohmann::json run_json(const std::string& args) const {
    const CliRun r = run(args);
    EXPECT_EQ(r.status, 0) << args;
    return nlohmann::json::parse(r.out);
  }

  fs::path dir_;
};

TEST_F(CliTest, PvalueWrapsChiSquare) {
  const auto j = run_json("pvalue --stat chi2 --counts " + path("counts.txt") + " --probs " + path("probs.txt"));
  EXPECT_DOUBLE_EQ(j["statistic"].get<double>(), 1.0);
  EXPECT_EQ(j["n"], 4);
  for (const char* key : {"x", "p_upper", "p_lower", "caps", "cap_ratios", "flags", "k_tilde", "x_max_assertion2"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["invocation"]["subcommand"], "pvalue");
  EXPECT_TRUE(j["invocation"].contains("version"));
  EXPECT_EQ(j["invocation"]["flags"]["--stat"], "chi2");
}

TEST_F(CliTest, PvalueSampleSizeMismatchIsValidationError) {
  EXPECT_EQ(run("pvalue --counts " + path("counts.txt") + " --n 5").status, 2);
  EXPECT_EQ(run("pvalue --counts " + path("counts.txt") + " --n 4 --format csv").status, 0);
  write("bad.txt", "3\nx\n");
  EXPECT_EQ(run("pvalue --counts " + path("bad.txt")).status, 2);
  EXPECT_EQ(run("pvalue --counts " + path("missing.txt")).status, 2);
}

TEST_F(CliTest, MomentsOrderSix) {
  const auto j = run_json("moments --order 6 --lambda 1 --exact-rational");
  EXPECT_DOUBLE_EQ(j["moment"].get<double>(), 41.0);
  EXPECT_EQ(j["moment_exact"], "41");
  ASSERT_EQ(j["coefficients"].size(), 3u);
  EXPECT_EQ(j["coefficients"][1]["numerator"], "5");
  EXPECT_EQ(j["coefficients"][1]["denominator"], "144");
  EXPECT_EQ(run("moments --order 41").status, 2);
}

TEST_F(CliTest, ExactTail) {
  const auto j = run_json("exact --n 2 --probs " + path("probs.txt") + " --stat chi2 --threshold 2");
  EXPECT_DOUBLE_EQ(j["tail"].get<double>(), 0.5);
  EXPECT_EQ(j["tail_exact"], "1/2");
  EXPECT_EQ(run("exact --n 60 --cells 10 --threshold 1").status, 3);
  const CliRun csv = run("exact --n 2 --probs " + path("probs.txt") + " --format csv");
  EXPECT_EQ(csv.out, "eta_1,eta_2,prob_num,prob_den\n2,0,1,4\n1,1,1,2\n0,2,1,4\n");
}

TEST_F(CliTest, CumulantsFromFile) {
  write("moments.txt", "0\n2\n2\n14\n42\n");
  const auto j = run_json("cumulants " + path("moments.txt"));
  EXPECT_EQ(j["values"], nlohmann::json::parse("[0.0, 2.0, 2.0, 2.0, 2.0]"));
  write("standard.json", "[0, 1, 0.5, 1.75, 4.375]");
  const auto s = run_json("cumulants " + path("standard.json"));
  EXPECT_TRUE(s.contains("delta"));
  const auto inv = run_json("cumulants --inverse --exact-rational " + path("moments.txt"));
  EXPECT_EQ(inv["values_exact"][1], "2");
}

TEST_F(CliTest, SimulateByteIdenticalAcrossThreads) {
  const std::string base = "simulate --stat lr --cells 30 --n 300 --x 0,1,2 --reps 3000 --seed 77 --format csv";
  const CliRun one = run(base + " --threads 1");
  const CliRun four = run(base + " --threads 4");
  ASSERT_EQ(one.status, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(one.out.rfind("kind,N,n,x,p_theory,p_hat,se,wilson_lo,wilson_hi,ratio,reps,seed\n", 0), 0u);
  const auto j = run_json("simulate --cells 30 --n 300 --x 1 --reps 1000 --seed 5");
  EXPECT_EQ(j["invocation"]["flags"]["--seed"], "5");
}

TEST_F(CliTest, SimulateRefusals) {
  EXPECT_EQ(run("simulate --cells 10 --n 10 --x 1 --reps 100").status, 2);
  EXPECT_EQ(run("simulate --cells 10 --n 10 --x 1 --reps 1000 --budget 999").status, 3);
  EXPECT_EQ(run("simulate --cells 10 --n 10 --x 2,1 --reps 1000").status, 2);
  EXPECT_EQ(run("simulate --cells-grid 10,20 --lambda 2 --x 1 --reps 1000 --format csv").status, 0);
}

TEST_F(CliTest, DiagnoseNeverFailsOnZones) {
  const auto j = run_json("diagnose --cells 100 --n 500 --x 2,50");
  ASSERT_EQ(j["diagnostics"].size(), 2u);
  EXPECT_EQ(j["diagnostics"][0]["flags"]["variance_ratio"], "near boundary");
  EXPECT_EQ(j["diagnostics"][1]["flags"]["zone"], "outside zone");
}

TEST_F(CliTest, ProfileReportsBothPaths) {
  const auto j = run_json("profile --stat chi2 --cells 100 --n 500");
  EXPECT_NEAR(j["profile"]["variance"].get<double>(), 200.0, 1e-9);
  EXPECT_NEAR(j["poisson_summation"]["variance"].get<double>(), 200.0, 1e-6);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("pvalue --counts " + path("counts.txt") + " --bogus").status, 2);
  EXPECT_EQ(run("pvalue --stat g --counts " + path("counts.txt")).status, 2);
  EXPECT_EQ(run("pvalue moments").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, HelpListsEveryFlag) {
  const std::pair<const char*, std::vector<const char*>> expected[] = {
      {"pvalue", {"--stat", "--counts", "--probs", "--n", "--centering", "--format", "--out", "--exact-rational"}},
      {"profile", {"--stat", "--probs", "--n", "--format", "--out"}},
      {"moments", {"--order", "--lambda", "--exact-rational", "--format", "--out"}},
      {"cumulants", {"--inverse", "--exact-rational", "--format", "--out"}},
      {"exact", {"--stat", "--probs", "--n", "--threshold", "--order", "--exact-rational", "--format", "--out"}},
      {"simulate", {"--stat", "--probs", "--n", "--x", "--reps", "--seed", "--threads", "--centering", "--format",
                    "--out"}},
      {"diagnose", {"--stat", "--probs", "--n", "--x", "--format", "--out"}},
  };
  for (const auto& [sub, flags] : expected) {
    const CliRun r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.status, 0);
    for (const char* flag : flags) EXPECT_NE(r.out.find(flag), std::string::npos) << sub << ' ' << flag;
  }
}

}  // namespace
