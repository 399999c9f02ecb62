#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hoqmc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = hoqmc::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"matrices", "--d", "2"}).code, 1);
  EXPECT_EQ(run({"matrices", "--d", "2", "--m", "3", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"points", "--d", "1", "--m", "3", "--format", "json"}).code, 1);
}

TEST(Cli, MatricesJson) {
  const auto r = run({"matrices", "--d", "1", "--alpha", "2", "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = hoqmc::io::json::parse(r.out);
  EXPECT_EQ(j["t"], 1);
  EXPECT_EQ(j["matrices"][0], (hoqmc::io::json{"100", "111", "010", "010", "001", "001"}));
  EXPECT_EQ(hoqmc::io::parse_matrices(r.out).matrices, hoqmc::build_interlaced(1, 2, 3).matrices);
}

TEST(Cli, PointsCsvVanDerCorput) {
  const auto r = run({"points", "--d", "1", "--m", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6U);
  EXPECT_EQ(l[1], "n,x1_hex,x1");
  EXPECT_EQ(l[2], "0,0x0/2,0");
  EXPECT_EQ(l[3], "1,0x2/2,0.5");
  EXPECT_EQ(l[4], "2,0x1/2,0.25");
  EXPECT_EQ(l[5], "3,0x3/2,0.75");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"measure", "--d", "2", "--alpha", "2", "--m", "6", "--cross-check", "--threads", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> st{"study", "--m-min", "3", "--m-max", "6", "--non-powers", "--random", "3", "--seed", "7"};
  EXPECT_EQ(run(st).out, run(st).out);
}

TEST(Cli, MeasureMethodsAgree) {
  const auto k = hoqmc::io::json::parse(run({"measure", "--d", "2", "--alpha", "2", "--m", "4"}).out);
  const auto w = hoqmc::io::json::parse(run({"measure", "--d", "2", "--alpha", "2", "--m", "4", "--method", "walsh"}).out);
  EXPECT_EQ(k["method"], "kernel");
  EXPECT_EQ(w["method"], "walsh");
  EXPECT_LE(std::fabs(k["squared"].get<double>() - w["squared"].get<double>()), w["tail_bound"].get<double>());
  const auto x = hoqmc::io::json::parse(run({"measure", "--d", "1", "--m", "5", "--cross-check", "--truncation", "64"}).out);
  EXPECT_EQ(x["reports"].size(), 2U);
  EXPECT_LE(x["gap"].get<double>(), x["reports"][1]["tail_bound"].get<double>());
}

TEST(Cli, MeasureFromPointsFile) {
  const auto path = temp_path("hoqmc_cli_points.csv");
  ASSERT_EQ(run({"points", "--d", "1", "--m", "4", "--out", path}).code, 0);
  const auto a = hoqmc::io::json::parse(run({"measure", "--points", path, "--measure", "diaphony"}).out);
  const auto b = hoqmc::io::json::parse(run({"measure", "--d", "1", "--m", "4", "--measure", "diaphony"}).out);
  EXPECT_EQ(a["squared"], b["squared"]);
  std::filesystem::remove(path);
}

TEST(Cli, MeasureCsv) {
  const auto r = run({"measure", "--d", "1", "--m", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2U);
  EXPECT_EQ(l[0], "measure,method,value,squared,N,d,truncation,tail_bound,generator");
  EXPECT_EQ(l[1].rfind("per-l2,kernel,", 0), 0U);
}

TEST(Cli, WalshOnlyForGeneratorsAndPeriodicL2) {
  EXPECT_EQ(run({"measure", "--d", "1", "--m", "3", "--method", "walsh", "--measure", "diaphony"}).code, 1);
  EXPECT_EQ(run({"measure", "--d", "1", "--m", "3", "--method", "walsh", "--n", "6"}).code, 1);
}

TEST(Cli, Refusals) {
  EXPECT_EQ(run({"matrices", "--d", "1", "--alpha", "5", "--m", "13"}).code, 2);
  EXPECT_EQ(run({"study", "--alpha", "5", "--m-max", "14"}).code, 2);
  EXPECT_EQ(run({"measure", "--d", "3", "--alpha", "3", "--m", "3", "--method", "walsh", "--truncation", "20"}).code, 2);
}

TEST(Cli, IoErrors) {
  EXPECT_EQ(run({"measure", "--points", "/nonexistent/p.csv"}).code, 3);
  EXPECT_EQ(run({"tvalue", "--matrices", "/nonexistent/m.json"}).code, 3);
  EXPECT_EQ(run({"matrices", "--d", "1", "--m", "2", "--out", "/nonexistent/dir/x.json"}).code, 3);
  const auto bad = temp_path("hoqmc_cli_bad.json");
  hoqmc::io::write_file(bad, "{not json");
  EXPECT_EQ(run({"tvalue", "--matrices", bad}).code, 3);
  std::filesystem::remove(bad);
}

TEST(Cli, TvalueFromMatricesFile) {
  const auto path = temp_path("hoqmc_cli_matrices.json");
  ASSERT_EQ(run({"matrices", "--d", "2", "--m", "5", "--out", path}).code, 0);
  const auto r = run({"tvalue", "--matrices", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = hoqmc::io::json::parse(r.out);
  ASSERT_EQ(j.size(), 5U);
  for (const auto& rep : j) EXPECT_EQ(rep["t"], 0);
  std::filesystem::remove(path);
}

TEST(Cli, TvalueCsvWitness) {
  const auto r = run({"tvalue", "--d", "3", "--alpha", "2", "--m", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4U);
  EXPECT_EQ(l[0], "alpha,m,d,t,exhaustive,formula_t,witness");
  EXPECT_NE(l[3].find(':'), std::string::npos);
}

TEST(Cli, StudySumOfDigitsColumn) {
  const auto r = run({"study", "--m-min", "8", "--m-max", "8", "--non-powers"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5U);
  EXPECT_EQ(l[0].rfind("# study d=2 alpha=5 m=8..8", 0), 0U);
  EXPECT_EQ(l[1], "N,d,alpha,S,per_l2,diaphony,ratio");
  EXPECT_EQ(l[2].rfind("192,2,5,2,", 0), 0U);
  EXPECT_EQ(l[3].rfind("255,2,5,8,", 0), 0U);
  EXPECT_EQ(l[4].rfind("256,2,5,1,", 0), 0U);
}

TEST(Cli, StudySelfTestPasses) {
  EXPECT_EQ(run({"study", "--d", "1", "--m-min", "2", "--m-max", "7", "--non-powers", "--self-test"}).code, 0);
  EXPECT_EQ(run({"study", "--m-min", "2", "--m-max", "6", "--self-test", "--format", "json"}).code, 0);
}

TEST(Cli, OneDimensionalDiaphonyRatio) {
  const auto r = run({"study", "--d", "1", "--m-min", "3", "--m-max", "6", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  for (const auto& row : hoqmc::io::json::parse(r.out)["rows"]) {
    const double ratio = row["diaphony"].get<double>() / row["per_l2"].get<double>();
    EXPECT_NEAR(ratio, std::numbers::pi * std::numbers::sqrt2, 1e-12);
  }
}
