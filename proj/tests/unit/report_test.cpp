#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qtrack/experiment.hpp"
#include "qtrack/report.hpp"
#include "qtrack/trace.hpp"

using namespace qtrack;
namespace fs = std::filesystem;

namespace {

ExperimentTrace small_trace(double rate) {
  ExperimentTrace t;
  for (int k = 0; k <= 100; k += 10) {
    MetricRecord r;
    r.k = k;
    r.gap = std::pow(10.0, -rate * k);
    r.consensus_err = 0.5 / (k + 1);
    r.tracking_residual = 1e-17;
    r.alpha = 0.01;
    r.epoch = k / 50;
    t.records.push_back(r);
  }
  t.oracle = OracleInfo{Eigen::VectorXd::Zero(1), 0.125, 1e-13, 12, true};
  t.summary.alpha = 0.01;
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qtrack_report_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv(kOutputDirEnv);
    fs::remove_all(dir_);
  }
  fs::path write(const std::string& name, const ExperimentTrace& t) {
    const auto p = dir_ / name;
    std::ofstream out(p);
    write_trace_csv(out, t);
    return p;
  }
  fs::path dir_;
};

}  // namespace

TEST(TraceCsv, SchemaAndRoundTrip) {
  const auto t = small_trace(0.1);
  std::stringstream ss;
  write_trace_csv(ss, t);
  const std::string text = ss.str();
  EXPECT_NE(text.find("# Fstar=0.125\n"), std::string::npos);
  EXPECT_NE(text.find("# grad_norm="), std::string::npos);
  EXPECT_NE(text.find("\nk,gap,consensus_err,tracking_residual,alpha,epoch\n"), std::string::npos);

  const auto back = read_trace_csv(ss);
  ASSERT_EQ(back.rows.size(), t.records.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].k, t.records[i].k);
    EXPECT_EQ(back.rows[i].gap, t.records[i].gap);
    EXPECT_EQ(back.rows[i].consensus_err, t.records[i].consensus_err);
    EXPECT_EQ(back.rows[i].epoch, t.records[i].epoch);
  }
  ASSERT_NE(back.find_meta("Fstar"), nullptr);
  EXPECT_EQ(std::stod(*back.find_meta("Fstar")), 0.125);
}

TEST(TraceCsv, RejectsMalformed) {
  std::istringstream bad_header("k,gap\n0,1\n");
  EXPECT_THROW(read_trace_csv(bad_header), Error);
  std::istringstream short_row("k,gap,consensus_err,tracking_residual,alpha,epoch\n0,1,2\n");
  EXPECT_THROW(read_trace_csv(short_row), Error);
  std::istringstream nan_row("k,gap,consensus_err,tracking_residual,alpha,epoch\n0,nan,0,0,0.1,0\n");
  EXPECT_THROW(read_trace_csv(nan_row), Error);
}

TEST(Slope, LinearInLogScale) {
  std::vector<TraceRow> rows;
  for (int k = 0; k <= 200; k += 10) rows.push_back({k, std::pow(10.0, -0.05 * k), 0, 0, 0.1, 0});
  EXPECT_NEAR(final_half_log_slope(rows), -0.05, 1e-12);
  EXPECT_TRUE(std::isnan(final_half_log_slope({})));
}

TEST_F(TempDir, CompareTwoTraces) {
  const auto fast = write("fast.csv", small_trace(0.1));
  const auto slow = write("slow.csv", small_trace(0.02));
  const auto report = compare_report({fast.string(), slow.string()});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].label, "fast");
  EXPECT_LT(report.rows[0].final_gap, report.rows[1].final_gap);
  EXPECT_NEAR(report.rows[0].slope, -0.1, 1e-9);
  EXPECT_NE(report.svg.find("<polyline"), std::string::npos);
  EXPECT_NE(report.svg.find(">slow</text>"), std::string::npos);
  std::ostringstream table;
  print_compare_table(table, report);
  EXPECT_NE(table.str().find("fast"), std::string::npos);
}

TEST_F(TempDir, CompareIdenticalTraces) {
  const auto a = write("a.csv", small_trace(0.05));
  const auto b = write("b.csv", small_trace(0.05));
  const auto report = compare_report({a.string(), b.string()});
  EXPECT_EQ(report.rows[0].final_gap, report.rows[1].final_gap);
  EXPECT_EQ(report.rows[0].slope - report.rows[1].slope, 0.0);
}

TEST_F(TempDir, CompareErrors) {
  const auto a = write("a.csv", small_trace(0.05));
  EXPECT_THROW(compare_report({a.string()}), Error);
  auto other = small_trace(0.05);
  other.records.pop_back();
  const auto b = write("b.csv", other);
  EXPECT_THROW(compare_report({a.string(), b.string()}), Error);
}

TEST_F(TempDir, OutputDirectoryOverride) {
  ExperimentConfig cfg;
  cfg.name = "env_probe";
  cfg.output_dir = dir_ / "configured";
  EXPECT_EQ(output_directory(cfg), cfg.output_dir);
  setenv(kOutputDirEnv, (dir_ / "override").c_str(), 1);
  EXPECT_EQ(output_directory(cfg), dir_ / "override");
  const auto files = write_outputs(cfg, small_trace(0.1));
  EXPECT_TRUE(fs::exists(dir_ / "override" / "env_probe.csv"));
  EXPECT_TRUE(fs::exists(files.svg));
  EXPECT_FALSE(fs::exists(dir_ / "configured"));
}

TEST_F(TempDir, BundledConfigRerunIsByteIdentical) {
  auto cfg = load_config(QTRACK_SOURCE_DIR "/configs/switching_exponential_logq.ini");
  cfg.iterations = 400;
  setenv(kOutputDirEnv, (dir_ / "one").c_str(), 1);
  const auto first = run_experiment(cfg);
  const auto f1 = write_outputs(cfg, first.trace);
  setenv(kOutputDirEnv, (dir_ / "two").c_str(), 1);
  const auto f2 = write_outputs(cfg, run_experiment(cfg).trace);
  EXPECT_EQ(slurp(f1.csv), slurp(f2.csv));
  EXPECT_EQ(slurp(f1.svg), slurp(f2.svg));

  const auto parsed = read_trace_csv_file(f1.csv.string());
  EXPECT_LT(final_half_log_slope(parsed.rows), 0.0);
  EXPECT_LT(parsed.rows.back().gap, parsed.rows.front().gap);
}

TEST_F(TempDir, LogBeatsUniformBundledPair) {
  auto log_cfg = load_config(QTRACK_SOURCE_DIR "/configs/quant_log_rho16.ini");
  auto uni_cfg = load_config(QTRACK_SOURCE_DIR "/configs/quant_uniform_rho16.ini");
  const double log_gap = run_experiment(log_cfg).trace.summary.final_gap;
  const double uni_gap = run_experiment(uni_cfg).trace.summary.final_gap;
  EXPECT_LE(log_gap, uni_gap);
}

TEST(Svg, HandlesEmptyAndNonPositive) {
  const auto svg = render_svg({Series{"flat", {0, 1, 2}, {0.0, -1.0, 0.0}}}, "t & <x>");
  EXPECT_NE(svg.find("t &amp; &lt;x&gt;"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
