#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(HC_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, FixedPointsInterior) {
  const CliResult r = run("fixed-points --k 1,2,4,4");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["interior"]["status"], "inside");
  const std::array<double, 4> want{0.25, 0.125, 0.125, 0.5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(j["interior"]["P"][i].get<double>(), want[i]);
  for (const auto& s : j["segments"]) {
    const bool opposite = s["edge"] == "x1-x3" || s["edge"] == "x2-x4";
    EXPECT_EQ(s["fixed"].get<bool>(), opposite) << s["edge"];
  }
}

TEST(Cli, FixedPointsDegenerate) {
  const CliResult r = run("fixed-points --k 0,1,1,1");
  EXPECT_EQ(r.code, 3);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["interior"]["status"], "degenerate");
  for (const auto& s : j["segments"]) {
    if (s["edge"] == "x1-x4") EXPECT_TRUE(s["fixed"].get<bool>());
  }
  EXPECT_EQ(run("fixed-points --k -0.1,1,1,1").code, 0);
  EXPECT_EQ(json::parse(run("fixed-points --k -0.1,1,1,1").out)["interior"]["status"], "outside");
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("fixed-points --k 1,1,1").code, 2);
  EXPECT_EQ(run("fixed-points --k -1,1,1,1").code, 2);  // below k1*
  EXPECT_EQ(run("simulate --x0 0.5,0.5,0.5,0.5").code, 2);
  EXPECT_EQ(run("sweep --format yaml").code, 2);
  EXPECT_EQ(run("sweep --k1 0.01,0.1").code, 2);
  EXPECT_EQ(run("curve --k -0.1,1,1,1").code, 2);
  EXPECT_EQ(run("curve --k 0,1,1,1").code, 3);
  EXPECT_EQ(run("spectrum --k 0,1,1,1").code, 3);
}

TEST(Cli, SpectrumAtUnitRates) {
  const CliResult r = run("spectrum");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["delta"].get<double>(), 0.2);
  EXPECT_LE(j["max_deviation"].get<double>(), 1e-12);
  ASSERT_EQ(j["closed_form"].size(), 4u);
}

TEST(Cli, NormalFormExactAndDeterministic) {
  const CliResult a = run("normal-form");
  ASSERT_EQ(a.code, 0);
  const json j = json::parse(a.out);
  EXPECT_EQ(j["alpha1"]["re"], "-16/5");
  EXPECT_EQ(j["alpha1"]["im"], "-48/5");
  EXPECT_EQ(j["nu_resonant"]["re"], "64/5");
  EXPECT_EQ(j["kill_table"].size(), 18u);
  EXPECT_TRUE(j["cross_check"]["mismatches"].empty());
  EXPECT_EQ(run("normal-form").out, a.out);

  const CliResult steps = run("normal-form --show-steps");
  EXPECT_NE(steps.out.find("a200 = -4i"), std::string::npos);
  EXPECT_TRUE(json::parse(run("normal-form --show-steps --format json").out).contains("transcript"));
}

TEST(Cli, SimulateCsv) {
  const CliResult r = run("simulate --iters 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# schema=1\n", 0), 0u);
  EXPECT_NE(r.out.find("\nstep,x1,x2,x3,x4,phi\n"), std::string::npos);
  EXPECT_NE(r.out.find("\n5,"), std::string::npos);
}

TEST(Cli, CurveRefines) {
  const CliResult r = run("curve --k 0.05,1,1,1");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["estimate"]["classification"], "closed_curve");
  EXPECT_TRUE(j["refinement"]["converged"].get<bool>());
  EXPECT_LT(j["refinement"]["residual"].get<double>(), 1e-10);
  EXPECT_EQ(j["refinement"]["modes"][0].size(), 49u);
}

TEST(Cli, SweepOnlyRowAndSummaryFile) {
  const CliResult r = run("sweep --only --k1 0.01 --iters 2000");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# schema=1\n", 0), 0u);
  EXPECT_NE(r.out.find("k1,delta,radius_mean,radius_std,rotation,classification\n0.01,"), std::string::npos);
  EXPECT_NE(r.out.find(",closed_curve\n"), std::string::npos);

  const std::string csv = ::testing::TempDir() + "hc_sweep.csv";
  ASSERT_EQ(run("sweep --k1 0.01,0.02,0.05,0.1 --iters 2000 --gate --out " + csv).code, 0);
  const json summary = json::parse(slurp(::testing::TempDir() + "hc_sweep.json"));
  EXPECT_EQ(summary["fit"]["points"], 4);
  EXPECT_NEAR(summary["fit"]["slope"].get<double>(), 0.5, 0.1);
}
