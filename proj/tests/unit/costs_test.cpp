#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qtrack/costs.hpp"

using namespace qtrack;

namespace {

// Central differences with step 1e-6; relative error against max(1, |g|).
double fd_error(const CostModel& c, int node, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(c.dimension());
  c.value_grad(node, x, g);
  double worst = 0.0;
  for (int j = 0; j < c.dimension(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += 1e-6;
    xm(j) -= 1e-6;
    const double fd = (c.value(node, xp) - c.value(node, xm)) / 2e-6;
    worst = std::max(worst, std::abs(fd - g(j)) / std::max(1.0, std::abs(g(j))));
  }
  return worst;
}

LogisticData random_logistic(int n, int m, int d, std::uint64_t seed, double lambda) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pix(0.0, 1.0);
  LogisticData data;
  data.lambda = lambda;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd x(m, d);
    Eigen::VectorXd y(m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < d; ++k) x(j, k) = pix(rng);
      y(j) = pix(rng) < 0.5 ? -1.0 : 1.0;
    }
    data.features.push_back(x);
    data.labels.push_back(y);
  }
  return data;
}

// Exact Hessian-vector product of f_i at w.
Eigen::VectorXd logistic_hvp(const LogisticData& data, int node, const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  const auto& x = data.features[node];
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd xa(x.rows(), d + 1);
  xa << x, Eigen::VectorXd::Ones(x.rows());
  const Eigen::VectorXd margin = xa * w;
  Eigen::VectorXd s(x.rows());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double sig = 1.0 / (1.0 + std::exp(-margin(j)));
    s(j) = sig * (1.0 - sig);
  }
  Eigen::VectorXd hv = xa.transpose() * (s.asDiagonal() * (xa * v)) / static_cast<double>(x.rows());
  hv.head(d) += data.lambda * v.head(d);
  return hv;
}

}  // namespace

TEST(AcademicGenerate, ZeroSumDeadBandRange) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (int m : {1, 3, 10}) {
      const auto p = academic_generate(16, m, seed);
      for (const auto* mat : {&p.a, &p.b}) {
        EXPECT_LE(std::abs(mat->sum()), 1e-12);
        EXPECT_GE(mat->cwiseAbs().minCoeff(), 0.1);
        EXPECT_LE(mat->cwiseAbs().maxCoeff(), 10.0);
      }
    }
  }
}

TEST(AcademicGenerate, SeedThreeSingleSample) {
  const auto p = academic_generate(16, 1, 3);
  ASSERT_EQ(p.a.size(), 16);
  for (Eigen::Index k = 0; k < 16; ++k) {
    EXPECT_NE(p.a(k), 0.0);
    EXPECT_LE(std::abs(p.a(k)), 10.0);
  }
}

TEST(AcademicGenerate, AmplitudeOne) {
  const auto p = academic_generate(16, 4, 5, 1.0);
  EXPECT_LE(p.a.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(p.b.cwiseAbs().maxCoeff(), 1.0);
}

TEST(AcademicGenerate, Errors) {
  EXPECT_THROW(academic_generate(1, 1, 0), DomainError);
  EXPECT_THROW(academic_generate(4, 1, 0, 0.05), DomainError);
}

TEST(AcademicParams, TextRoundTrip) {
  const auto p = academic_generate(5, 3, 8);
  std::stringstream ss;
  write_academic_params(ss, p);
  const auto q = read_academic_params(ss);
  EXPECT_EQ(p.a, q.a);
  EXPECT_EQ(p.b, q.b);
}

TEST(AcademicCost, ValueAndGradientAtZero) {
  AcademicParams p{Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 2)};
  p.a << 1.0, 3.0, -1.0, -3.0;
  p.b << 0.5, 1.5, -0.5, -1.5;
  const AcademicCost c(p);
  Eigen::VectorXd g(1);
  const double v = c.value_grad(0, Eigen::VectorXd::Zero(1), g);
  EXPECT_DOUBLE_EQ(v, 2.0);
  EXPECT_DOUBLE_EQ(g(0), 1.0);
}

TEST(AcademicCost, GradientMatchesFiniteDifferences) {
  const AcademicCost c(academic_generate(16, 3, 21));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pt(-5.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, pt(rng));
    EXPECT_LT(fd_error(c, t % 16, x), 1e-5);
  }
}

TEST(AcademicCost, SmoothnessBound) {
  const AcademicParams zero{Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(2, 1)};
  EXPECT_DOUBLE_EQ(AcademicCost(zero).smoothness(), 14.0);

  AcademicParams ten{Eigen::MatrixXd(2, 1), Eigen::MatrixXd::Zero(2, 1)};
  ten.a << 10.0, -10.0;
  EXPECT_DOUBLE_EQ(AcademicCost(ten).smoothness(), 24.0);

  const AcademicCost c(academic_generate(16, 1, 2));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pt(-10.0, 10.0);
  for (int t = 0; t < 10000; ++t) {
    const int i = t % 16;
    const double x = pt(rng);
    const double f2 = 8.0 + 6.0 * std::cos(2 * x) - c.row_mean_a(i) * std::cos(x);
    EXPECT_GE(c.smoothness(), std::abs(f2));
  }
}

TEST(AcademicCost, ZeroSumCancellation) {
  const AcademicCost c(academic_generate(16, 4, 6));
  for (double x : {-3.0, -0.7, 0.0, 0.2, 1.0, 2.5, 9.0}) {
    const double expected = 4 * x * x + 3 * std::sin(x) * std::sin(x);
    EXPECT_NEAR(c.global_value(Eigen::VectorXd::Constant(1, x)), expected, 1e-12 * std::max(1.0, expected));
  }
}

TEST(AcademicCost, LocalNonConvexityGlobalConvexity) {
  AcademicParams p{Eigen::MatrixXd(2, 1), Eigen::MatrixXd::Zero(2, 1)};
  p.a << 10.0, -10.0;
  const AcademicCost c(p);
  // f'' = 2 + 12 cos^2 x - a cos x is smallest at cos x = a / 24, where it
  // equals 2 - a^2 / 48 < 0 for a = 10.
  const double x = std::acos(10.0 / 24.0);
  const double f2_node0 = 8.0 + 6.0 * std::cos(2 * x) - c.row_mean_a(0) * std::cos(x);
  EXPECT_NEAR(f2_node0, 2.0 - 100.0 / 48.0, 1e-12);
  EXPECT_LT(f2_node0, 0.0);
  for (double t = -10.0; t <= 10.0; t += 0.01) EXPECT_GE(8.0 + 6.0 * std::cos(2 * t), 2.0 - 1e-12);
}

TEST(AcademicCost, DifferenceMatchesValues) {
  const AcademicCost c(academic_generate(8, 2, 3));
  for (double u : {-2.0, 0.1, 1.7}) {
    for (double v : {-0.5, 0.0, 2.2}) {
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, u), r = Eigen::VectorXd::Constant(1, v);
      for (int i = 0; i < 8; ++i) EXPECT_NEAR(c.value_difference(i, x, r), c.value(i, x) - c.value(i, r), 1e-12);
    }
  }
  // Near the reference the linear terms cancel across nodes only up to
  // rounding (about eps * |b| * |x|), far below the value-based error of ~1e-15.
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(1), tiny = Eigen::VectorXd::Constant(1, 1e-9);
  const double exact = 4e-18 + 3 * std::sin(1e-9) * std::sin(1e-9);
  EXPECT_NEAR(c.global_difference(tiny, z), exact, 1e-6 * exact);
}

TEST(QuadraticCost, DifferenceAndGradient) {
  Eigen::MatrixXd centers(3, 2);
  centers << 1, 2, -1, 0, 4, 4;
  const QuadraticCost c(centers);
  const Eigen::Vector2d x(0.3, -0.2), r(1.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(c.value_difference(i, x, r), c.value(i, x) - c.value(i, r), 1e-13);
    EXPECT_LT(fd_error(c, i, x), 1e-7);
  }
}

TEST(LogisticCost, ZeroWeights) {
  const auto data = random_logistic(3, 7, 4, 1, 0.1);
  const LogisticCost c(data);
  Eigen::VectorXd g(5);
  for (int i = 0; i < 3; ++i) {
    const double v = c.value_grad(i, Eigen::VectorXd::Zero(5), g);
    EXPECT_NEAR(v, std::log(2.0), 1e-15);
    EXPECT_NEAR(g(4), -data.labels[i].sum() / 7.0 / 2.0, 1e-15);
  }
}

TEST(LogisticCost, SingleSampleInterceptGradient) {
  LogisticData data;
  data.lambda = 0.0;
  data.features.push_back(Eigen::MatrixXd::Zero(1, 1));
  data.labels.push_back(Eigen::VectorXd::Ones(1));
  const LogisticCost c(data);
  for (double cval : {-3.0, 0.0, 0.4, 5.0}) {
    Eigen::VectorXd g(2);
    c.value_grad(0, Eigen::Vector2d(0.7, cval), g);
    EXPECT_NEAR(g(1), -1.0 / (1.0 + std::exp(cval)), 1e-15);
    EXPECT_EQ(g(0), 0.0);
  }
  EXPECT_DOUBLE_EQ(c.smoothness(), 0.25);
  data.lambda = 0.01;
  EXPECT_DOUBLE_EQ(LogisticCost(data).smoothness(), 0.26);
}

TEST(LogisticCost, GradientMatchesFiniteDifferences) {
  const LogisticCost c(random_logistic(4, 20, 6, 2, 0.01));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd w(7);
    for (int k = 0; k < 7; ++k) w(k) = nd(rng);
    EXPECT_LT(fd_error(c, t % 4, w), 1e-5);
  }
}

TEST(LogisticCost, LargeMarginsStayFinite) {
  const LogisticCost c(random_logistic(1, 5, 3, 3, 0.0));
  Eigen::VectorXd g(4);
  const double v = c.value_grad(0, Eigen::VectorXd::Constant(4, 1e4), g);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_TRUE(g.allFinite());
}

TEST(LogisticCost, SmoothnessBoundsHessianAndConvexity) {
  const auto data = random_logistic(3, 15, 5, 9, 0.01);
  const LogisticCost c(data);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd w(6), v(6);
    for (int k = 0; k < 6; ++k) w(k) = 0.5 * nd(rng), v(k) = nd(rng);
    const int node = t % 3;
    // Power iteration on the PSD Hessian.
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
      v.normalize();
      const Eigen::VectorXd hv = logistic_hvp(data, node, w, v);
      lam = v.dot(hv);
      EXPECT_GE(lam, 0.0);
      v = hv;
    }
    EXPECT_LE(lam, c.smoothness() * (1 + 1e-12));
  }
}

TEST(LogisticCost, RejectsBadData) {
  auto data = random_logistic(2, 3, 2, 1, 0.1);
  data.labels[1](0) = 0.0;
  EXPECT_THROW(LogisticCost{data}, DomainError);
  auto short_labels = random_logistic(2, 3, 2, 1, 0.1);
  short_labels.labels.pop_back();
  EXPECT_THROW(LogisticCost{short_labels}, DomainError);
}

TEST(LogisticCost, Accuracy) {
  LogisticData data;
  data.features.push_back((Eigen::MatrixXd(2, 1) << -1.0, 1.0).finished());
  data.labels.push_back((Eigen::VectorXd(2) << -1.0, 1.0).finished());
  const LogisticCost c(data);
  EXPECT_EQ(c.accuracy(Eigen::Vector2d(1.0, 0.0)), 1.0);
  EXPECT_EQ(c.accuracy(Eigen::Vector2d(-1.0, 0.0)), 0.0);
}
