#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("catcoh_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Outcome run(const std::string& args, const std::string& env = "") const {
    fs::path err = path("stderr.txt");
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" + CATCOH_CLI_PATH + "\" " + args + " 2>\"" +
                      err.string() + "\"";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = ::pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out, slurp(err)};
  }

  json density(const std::string& name) const { return json::parse(slurp(path(name))); }

  std::string q(const std::string& name) const { return "\"" + path(name).string() + "\""; }

  std::vector<std::vector<double>> csv_rows(const std::string& name) const {
    std::ifstream in(path(name));
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream ss(line);
      for (std::string f; std::getline(ss, f, ',');) row.push_back(std::stod(f));
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
};

double element(const json& rho, int m, int n) {
  int d = rho.at("dim");
  return rho.at("re").at(m * d + n).get<double>();
}

}  // namespace

TEST_F(CliTest, StateCatWritesOddCat) {
  Outcome r = run("state cat --alpha 1.06 --parity odd --out " + q("cat.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json rho = density("cat.json");
  EXPECT_EQ(rho.at("dim"), 12);
  EXPECT_NEAR(element(rho, 1, 1), 0.8169, 1e-3);
  EXPECT_DOUBLE_EQ(element(rho, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(element(rho, 2, 2), 0.0);
  json report = json::parse(r.out);
  EXPECT_FALSE(report.at("under_truncated").get<bool>());
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, LargeAmplitudeWarnsButSucceeds) {
  Outcome r = run("state cat --alpha 2.5 --out " + q("big.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("tail mass exceeds 1e-3"), std::string::npos);
  json report = json::parse(r.out);
  EXPECT_TRUE(report.at("under_truncated").get<bool>());
  EXPECT_GT(report.at("tail_mass").get<double>(), 1e-3);
}

TEST_F(CliTest, LosslessPipelineIsOdd) {
  Outcome r = run("state pipeline --prep-loss 0.0 --out " + q("p.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json rho = density("p.json");
  int d = rho.at("dim");
  for (int n = 0; n < d; n += 2) EXPECT_NEAR(element(rho, n, n), 0.0, 1e-15);
  EXPECT_NEAR(json::parse(r.out).at("purity").get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, MeasureOddCat) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  Outcome r = run("measure --in " + q("cat.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json m = json::parse(r.out);
  EXPECT_NEAR(m.at("c_rel_ent").get<double>(), 0.7496844164235889, 1e-9);
  EXPECT_NEAR(m.at("c_l1").get<double>(), 1.083145714264869, 1e-9);
  EXPECT_NEAR(m.at("negativity").get<double>(), -1.0 / M_PI, 1e-9);
  EXPECT_NEAR(m.at("fidelity").get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(m.at("alpha_ref").get<double>(), 1.06, 1e-4);
}

TEST_F(CliTest, MeasureVacuumIsIncoherent) {
  ASSERT_EQ(run("state coherent --alpha 0 --out " + q("vac.json")).code, 0);
  Outcome r = run("measure --in " + q("vac.json") + " --fields c_rel_ent,c_l1,negativity");
  ASSERT_EQ(r.code, 0) << r.err;
  json m = json::parse(r.out);
  EXPECT_NEAR(m.at("c_rel_ent").get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(m.at("c_l1").get<double>(), 0.0, 1e-12);
  EXPECT_EQ(m.at("negativity").get<double>(), 0.0);
  EXPECT_FALSE(m.contains("fidelity"));
}

TEST_F(CliTest, LossyCatMatchesRegression) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  Outcome c = run("channel --in " + q("cat.json") + " --eta 0.4 --out " + q("lossy.json"));
  ASSERT_EQ(c.code, 0) << c.err;
  Outcome r = run("measure --in " + q("lossy.json") + " --alpha-ref 1.06");
  ASSERT_EQ(r.code, 0) << r.err;
  json m = json::parse(r.out);
  // truncated input, so agreement with the untruncated values is only to ~1e-6
  EXPECT_NEAR(m.at("c_rel_ent").get<double>(), 0.35520620949534776, 1e-6);
  EXPECT_NEAR(m.at("c_l1").get<double>(), 0.5653925083530531, 1e-5);
  EXPECT_EQ(m.at("negativity").get<double>(), 0.0);
}

TEST_F(CliTest, LossAliasAndDomainError) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  EXPECT_EQ(run("loss --in " + q("cat.json") + " --eta 0.5 --out " + q("l.json")).code, 0);
  Outcome bad = run("channel --in " + q("cat.json") + " --eta 1.5 --out " + q("l2.json"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("error"), std::string::npos);
  EXPECT_EQ(run("state cat --alpha -1 --out " + q("x.json")).code, 1);
  EXPECT_EQ(run("state cat --alpha 1 --parity sideways --out " + q("x.json")).code, 1);
}

TEST_F(CliTest, MalformedInputsAreIoErrors) {
  std::ofstream(path("bad.json")) << "{\"dim\": 2, \"re\": [1, 0";
  Outcome r = run("measure --in " + q("bad.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(run("measure --in " + q("missing.json")).code, 2);
  std::ofstream(path("empty.csv")).close();
  EXPECT_EQ(run("tomo reconstruct --in " + q("empty.csv") + " --out " + q("r.json")).code, 2);
  std::ofstream(path("garbage.csv")) << "theta,x\n0,abc\n";
  EXPECT_EQ(run("tomo reconstruct --in " + q("garbage.csv") + " --out " + q("r.json")).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("state nonsense").code, 1);
  EXPECT_EQ(run("measure").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  Outcome v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}

TEST_F(CliTest, Fig4Rows) {
  Outcome r = run("fig4 --etas 0,0.5,1 --out " + q("f4.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows("f4.csv");
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_EQ(rows[0].size(), 5u);
  // eta = 1: ideal odd cat
  EXPECT_NEAR(rows[2][1], 0.7496844164235889, 1e-9);
  EXPECT_NEAR(rows[2][2], 1.083145714264869, 1e-9);
  EXPECT_NEAR(rows[2][3], 1.0, 1e-9);
  EXPECT_NEAR(rows[2][4], -1.0 / M_PI, 1e-9);
  // eta = 1/2: F = 1/2 exactly and no negativity
  EXPECT_NEAR(rows[1][3], 0.5, 1e-12);
  EXPECT_EQ(rows[1][4], 0.0);
  // eta = 0: vacuum
  for (int c = 1; c <= 4; ++c) EXPECT_NEAR(rows[0][c], 0.0, 1e-12);
}

TEST_F(CliTest, Fig4DefaultGridAndPipelineColumns) {
  Outcome r = run("fig4 --pipeline --out " + q("f4.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows("f4.csv");
  ASSERT_EQ(rows.size(), 101u);
  ASSERT_EQ(rows[0].size(), 9u);
  EXPECT_NEAR(rows[50][0], 0.5, 1e-12);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i][1], rows[i - 1][1] - 1e-12);
}

TEST_F(CliTest, Fig4IdealColumnsMatchMeasure) {
  // d = 32 so the truncated input agrees with the closed form
  ASSERT_EQ(run("state cat --alpha 1.06 --dim 32 --out " + q("cat.json")).code, 0);
  ASSERT_EQ(run("channel --in " + q("cat.json") + " --eta 0.7 --out " + q("l.json")).code, 0);
  json m = json::parse(run("measure --in " + q("l.json")).out);
  ASSERT_EQ(run("fig4 --etas 0.7 --dim 32 --out " + q("f4.csv")).code, 0);
  auto rows = csv_rows("f4.csv");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0][1], m.at("c_rel_ent").get<double>(), 1e-9);
  EXPECT_NEAR(rows[0][2], m.at("c_l1").get<double>(), 1e-9);
}

TEST_F(CliTest, Fig5Rows) {
  Outcome r = run("fig5 --alphas 0,1,2 --out " + q("f5.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("f5.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "alpha,c_rel_d12,c_rel_d16,c_l1_d12,c_l1_d16");
  auto rows = csv_rows("f5.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[1][1], rows[1][2], 1e-6);
  EXPECT_GT(rows[2][4], rows[2][3]);
  EXPECT_EQ(run("fig5 --alphas 3.5 --out " + q("f5b.csv")).code, 1);
}

TEST_F(CliTest, TomographyRoundTrip) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  Outcome s = run("tomo simulate --in " + q("cat.json") + " --n 50000 --seed 11 --out " + q("q.csv"));
  ASSERT_EQ(s.code, 0) << s.err;
  Outcome r = run("tomo reconstruct --in " + q("q.csv") + " --out " + q("rec.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json meta = json::parse(slurp(path("rec.meta.json")));
  EXPECT_GT(meta.at("iterations").get<int>(), 0);
  EXPECT_TRUE(meta.contains("final_loglik"));
  EXPECT_TRUE(meta.contains("converged"));
  json m = json::parse(run("measure --in " + q("rec.json") + " --alpha-ref 1.06 --fields fidelity").out);
  EXPECT_GE(m.at("fidelity").get<double>(), 0.98);
}

TEST_F(CliTest, SimulateIsDeterministicPerSeed) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  ASSERT_EQ(run("tomo simulate --in " + q("cat.json") + " --n 2000 --seed 5 --out " + q("a.csv")).code, 0);
  ASSERT_EQ(run("tomo simulate --in " + q("cat.json") + " --n 2000 --seed 5 --out " + q("b.csv")).code, 0);
  ASSERT_EQ(run("tomo simulate --in " + q("cat.json") + " --n 2000 --seed 6 --out " + q("c.csv")).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliTest, WignerAndMarginalCsv) {
  ASSERT_EQ(run("state cat --alpha 1.06 --out " + q("cat.json")).code, 0);
  Outcome w = run("wigner --in " + q("cat.json") + " --points 21 --out " + q("w.csv"));
  ASSERT_EQ(w.code, 0) << w.err;
  auto rows = csv_rows("w.csv");
  ASSERT_EQ(rows.size(), 441u);
  EXPECT_NEAR(rows[220][0], 0.0, 1e-12);
  EXPECT_NEAR(rows[220][1], 0.0, 1e-12);
  EXPECT_NEAR(rows[220][2], -1.0 / M_PI, 1e-9);
  Outcome m = run("marginal --in " + q("cat.json") + " --thetas 0,1.5707963267948966 --points 11 --out " +
              q("m.csv"));
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(csv_rows("m.csv").size(), 22u);
}

TEST_F(CliTest, PipelineReportAndPlot) {
  Outcome r = run("pipeline-report --prep-loss 0.2");
  ASSERT_EQ(r.code, 0) << r.err;
  json rep = json::parse(r.out);
  EXPECT_GT(rep.at("fidelity").get<double>(), 0.7);
  EXPECT_LT(rep.at("fidelity").get<double>(), 0.8);
  EXPECT_LT(rep.at("wigner_min").get<double>(), 0.0);
  ASSERT_EQ(run("fig4 --n-etas 11 --out " + q("f4.csv")).code, 0);
  Outcome p = run("plot --in " + q("f4.csv") + " --out " + q("f4.svg"));
  ASSERT_EQ(p.code, 0) << p.err;
  std::string svg = slurp(path("f4.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("c_l1_ideal"), std::string::npos);
  EXPECT_EQ(run("plot --in " + q("nothing.csv") + " --out " + q("x.svg")).code, 2);
}

TEST_F(CliTest, DefaultDimFromEnvironment) {
  Outcome r = run("state cat --alpha 1.06 --out " + q("d8.json"), "CATCOH_DEFAULT_DIM=8");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(density("d8.json").at("dim"), 8);
  Outcome explicit_dim = run("state cat --alpha 1.06 --dim 16 --out " + q("d16.json"), "CATCOH_DEFAULT_DIM=8");
  ASSERT_EQ(explicit_dim.code, 0);
  EXPECT_EQ(density("d16.json").at("dim"), 16);
  EXPECT_EQ(run("state cat --alpha 1 --out " + q("x.json"), "CATCOH_DEFAULT_DIM=zero").code, 1);
}
