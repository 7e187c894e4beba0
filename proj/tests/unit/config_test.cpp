#include <algorithm>
#include <filesystem>

#include <gtest/gtest.h>

#include "qtrack/config.hpp"

using namespace qtrack;

namespace {

const std::string kMinimal = R"(
[cost]
kind = academic
)";

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& field) {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& s) { return s.rfind(field, 0) == 0; });
}

}  // namespace

TEST(ParseReal, DecimalsAndFractions) {
  EXPECT_EQ(parse_real("0.25"), 0.25);
  EXPECT_EQ(parse_real("1/128"), 1.0 / 128);
  EXPECT_EQ(parse_real(" 3 / 4 "), 0.75);
  EXPECT_THROW(parse_real("1/0"), DomainError);
  EXPECT_THROW(parse_real("abc"), DomainError);
  EXPECT_THROW(parse_real("1.5x"), DomainError);
}

TEST(Config, Defaults) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.cost, CostKind::academic);
  EXPECT_EQ(cfg.graph.kind, GraphKind::exponential);
  EXPECT_EQ(cfg.graph.n, 16);
  EXPECT_EQ(cfg.graph.scale, 0.5);
  EXPECT_TRUE(cfg.schedule.is_static());
  EXPECT_FALSE(cfg.alpha);
  EXPECT_EQ(cfg.safety, 0.5);
  EXPECT_EQ(cfg.stride, 10);
  EXPECT_EQ(cfg.academic.samples_per_node, 1);
  EXPECT_FALSE(cfg.independent_b);
}

TEST(Config, FullAcademic) {
  const auto cfg = parse_config(R"(
# comment
[experiment]
name = demo
output_dir = results

[cost]
kind = academic
samples_per_node = 3
coef_seed = 9

[graph]
kind = er
p = 0.4
seed = 5

[schedule]
period = 100
mode = resample
independent_b = true

[nonlinearity]
kind = log
rho = 1/128

[run]
iterations = 300
stride = 5
seed = 2
alpha = 0.001
)",
                                "/base");
  EXPECT_EQ(cfg.name, "demo");
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("/base/results"));
  EXPECT_EQ(cfg.academic.samples_per_node, 3);
  EXPECT_EQ(cfg.graph.kind, GraphKind::erdos_renyi);
  EXPECT_EQ(cfg.graph.p, 0.4);
  EXPECT_EQ(cfg.graph.seed, 5u);
  EXPECT_EQ(cfg.schedule.seed, 2u);
  EXPECT_EQ(cfg.schedule.period, 100);
  EXPECT_EQ(cfg.schedule.mode, SwitchMode::resample);
  EXPECT_TRUE(cfg.independent_b);
  EXPECT_EQ(cfg.nonlinearity, NonlinearityKind::log_scale);
  EXPECT_EQ(cfg.rho, 1.0 / 128);
  ASSERT_TRUE(cfg.alpha);
  EXPECT_EQ(*cfg.alpha, 0.001);
}

TEST(Config, FieldLevelErrors) {
  const auto issues = issues_of(R"(
[cost]
kind = academic
colour = blue

[graph]
n = twelve

[nonlinearity]
kind = log

[run]
stride = 0

[extras]
x = 1
)");
  EXPECT_TRUE(mentions(issues, "cost.colour")) << issues.size();
  EXPECT_TRUE(mentions(issues, "graph.n"));
  EXPECT_TRUE(mentions(issues, "extras"));
}

TEST(Config, CrossFieldErrors) {
  const auto issues = issues_of(R"(
[cost]
kind = academic
[graph]
n = 12
scale = 1.2
[nonlinearity]
kind = log
[run]
stride = 0
safety = 0
alpha = -1
)");
  for (const char* field : {"graph.n", "graph.scale", "nonlinearity.rho", "run.stride", "run.safety", "run.alpha"})
    EXPECT_TRUE(mentions(issues, field)) << field;
}

TEST(Config, MnistNeedsFiles) {
  const auto issues = issues_of(R"(
[cost]
kind = mnist
images = nowhere/images
total = 30
)");
  EXPECT_TRUE(mentions(issues, "cost.images"));
  EXPECT_TRUE(mentions(issues, "cost.labels"));
  EXPECT_TRUE(mentions(issues, "cost.total"));
}

TEST(Config, MissingCostSection) { EXPECT_TRUE(mentions(issues_of("[graph]\nn = 8\n"), "cost")); }

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/cfg.ini"), ConfigError); }

TEST(Config, BundledConfigsValidate) {
  for (const auto& entry : std::filesystem::directory_iterator(QTRACK_SOURCE_DIR "/configs")) {
    if (entry.path().extension() != ".ini" || entry.path().stem() == "mnist_full_12000") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
  }
}
