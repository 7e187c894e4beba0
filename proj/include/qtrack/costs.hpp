#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/error.hpp"

namespace qtrack {

using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;
using VectorRef = Eigen::Ref<Eigen::VectorXd>;

/// Collection of private local costs f_1..f_n on R^p. The global cost is
/// F(x) = (1/n) sum_i f_i(x). Implementations are immutable and reentrant.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual int nodes() const = 0;
  virtual int dimension() const = 0;

  /// Writes grad f_i(x) into `grad` and returns f_i(x).
  virtual double value_grad(int node, const ConstVectorRef& x, VectorRef grad) const = 0;
  virtual double value(int node, const ConstVectorRef& x) const;
  /// f_i(x) - f_i(ref). Models override this to avoid cancelling two large
  /// values when x is close to ref.
  virtual double value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const;

  /// Upper bound on the largest Hessian eigenvalue of any f_i.
  virtual double smoothness() const = 0;
  /// Strong-convexity modulus of F (possibly a lower estimate). Reporting only.
  virtual double strong_convexity() const = 0;

  double global_value(const ConstVectorRef& x) const;
  Eigen::VectorXd global_gradient(const ConstVectorRef& x) const;
  double global_value_grad(const ConstVectorRef& x, VectorRef grad) const;
  /// F(x) - F(ref) from the per-node differences.
  double global_difference(const ConstVectorRef& x, const ConstVectorRef& ref) const;
};

/// f_i(x) = ||x - c_i||^2. Minimizer of F is the mean of the centers.
class QuadraticCost final : public CostModel {
 public:
  /// One center per row; dimension = number of columns.
  explicit QuadraticCost(Eigen::MatrixXd centers);

  int nodes() const override { return static_cast<int>(centers_.rows()); }
  int dimension() const override { return static_cast<int>(centers_.cols()); }
  double value_grad(int node, const ConstVectorRef& x, VectorRef grad) const override;
  double value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const override;
  double smoothness() const override { return 2.0; }
  double strong_convexity() const override { return 2.0; }

 private:
  Eigen::MatrixXd centers_;
};

/// Coefficients of the scalar benchmark
///   f_{i,j}(x) = 4x^2 + 3 sin^2 x + a_{i,j} cos x + b_{i,j} x,
/// with both coefficient matrices summing to zero.
struct AcademicParams {
  Eigen::MatrixXd a;  // n x m
  Eigen::MatrixXd b;  // n x m

  int nodes() const { return static_cast<int>(a.rows()); }
  int samples_per_node() const { return static_cast<int>(a.cols()); }
};

/// Uniform entries in [-amplitude, amplitude] with |entry| >= 0.1, then each
/// matrix is shifted to zero mean. Draws that leave the range or the
/// dead-band after the shift are repeated (at most 1000 times).
AcademicParams academic_generate(int n, int m, std::uint64_t seed, double amplitude = 10.0);

/// `n m` header, then the n rows of a, then the n rows of b.
void write_academic_params(std::ostream& out, const AcademicParams& params);
AcademicParams read_academic_params(std::istream& in);

class AcademicCost final : public CostModel {
 public:
  explicit AcademicCost(AcademicParams params);

  int nodes() const override { return params_.nodes(); }
  int dimension() const override { return 1; }
  double value_grad(int node, const ConstVectorRef& x, VectorRef grad) const override;
  double value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const override;
  /// 8 + 6 + max_i |mean_j a_{i,j}|.
  double smoothness() const override;
  double strong_convexity() const override { return 2.0; }

  const AcademicParams& params() const { return params_; }
  double row_mean_a(int node) const { return a_mean_(node); }
  double row_mean_b(int node) const { return b_mean_(node); }

 private:
  AcademicParams params_;
  Eigen::VectorXd a_mean_;
  Eigen::VectorXd b_mean_;
};

/// Per-node labelled samples for binary logistic regression.
struct LogisticData {
  /// features[i] is m_i x d; labels[i] has m_i entries in {-1, +1}.
  std::vector<Eigen::MatrixXd> features;
  std::vector<Eigen::VectorXd> labels;
  double lambda = 0.01;

  int nodes() const { return static_cast<int>(features.size()); }
  int feature_dim() const { return features.empty() ? 0 : static_cast<int>(features[0].cols()); }
};

/// f_i(b, c) = (1/m_i) sum_j log(1 + exp(-(b.x_ij + c) y_ij)) + (lambda/2) ||b||^2.
/// Decision vector layout: w = (b_1..b_d, c), so p = d + 1. The intercept is
/// not regularized.
class LogisticCost final : public CostModel {
 public:
  explicit LogisticCost(LogisticData data);

  int nodes() const override { return data_.nodes(); }
  int dimension() const override { return data_.feature_dim() + 1; }
  double value_grad(int node, const ConstVectorRef& w, VectorRef grad) const override;
  double value(int node, const ConstVectorRef& w) const override;
  /// max_i (1 / (4 m_i)) sum_j ||(x_ij, 1)||^2 + lambda.
  double smoothness() const override { return smoothness_; }
  double strong_convexity() const override { return data_.lambda; }

  const LogisticData& data() const { return data_; }

  /// Fraction of all samples with sign(b.x + c) equal to the label.
  double accuracy(const ConstVectorRef& w) const;

 private:
  LogisticData data_;
  double smoothness_ = 0.0;
};

}  // namespace qtrack
