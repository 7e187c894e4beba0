#include "qtrack/costs.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "rng.hpp"

namespace qtrack {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_node(const CostModel& c, int node) {
  if (node < 0 || node >= c.nodes())
    throw DomainError("node index " + std::to_string(node) + " out of range");
}

}  // namespace

double CostModel::value(int node, const ConstVectorRef& x) const {
  Eigen::VectorXd g(dimension());
  return value_grad(node, x, g);
}

double CostModel::value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const {
  return value(node, x) - value(node, ref);
}

double CostModel::global_difference(const ConstVectorRef& x, const ConstVectorRef& ref) const {
  double s = 0.0;
  for (int i = 0; i < nodes(); ++i) s += value_difference(i, x, ref);
  return s / nodes();
}

double CostModel::global_value(const ConstVectorRef& x) const {
  double s = 0.0;
  for (int i = 0; i < nodes(); ++i) s += value(i, x);
  return s / nodes();
}

Eigen::VectorXd CostModel::global_gradient(const ConstVectorRef& x) const {
  Eigen::VectorXd g(dimension());
  global_value_grad(x, g);
  return g;
}

double CostModel::global_value_grad(const ConstVectorRef& x, VectorRef grad) const {
  grad.setZero();
  Eigen::VectorXd gi(dimension());
  double s = 0.0;
  for (int i = 0; i < nodes(); ++i) {
    s += value_grad(i, x, gi);
    grad += gi;
  }
  grad /= nodes();
  return s / nodes();
}

// ---------------------------------------------------------------------------

QuadraticCost::QuadraticCost(Eigen::MatrixXd centers) : centers_(std::move(centers)) {
  if (centers_.rows() < 1 || centers_.cols() < 1) throw DomainError("QuadraticCost: empty centers");
}

double QuadraticCost::value_grad(int node, const ConstVectorRef& x, VectorRef grad) const {
  check_node(*this, node);
  const Eigen::VectorXd d = x - centers_.row(node).transpose();
  grad = 2.0 * d;
  return d.squaredNorm();
}

double QuadraticCost::value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const {
  check_node(*this, node);
  const Eigen::VectorXd c = centers_.row(node).transpose();
  return (x - ref).dot(x + ref - 2.0 * c);
}

// ---------------------------------------------------------------------------

AcademicParams academic_generate(int n, int m, std::uint64_t seed, double amplitude) {
  constexpr double dead_band = 0.1;
  if (n < 1 || m < 1 || n * m < 2) throw DomainError("academic_generate: need n * m >= 2");
  if (!(amplitude > dead_band)) throw DomainError("academic_generate: amplitude must exceed 0.1");

  auto rng = detail::make_rng(seed, {0x61636164ULL});
  std::uniform_real_distribution<double> draw(-amplitude, amplitude);
  auto fill = [&](Eigen::MatrixXd& mat) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (Eigen::Index k = 0; k < mat.size(); ++k) {
        double v;
        do {
          v = draw(rng);
        } while (std::abs(v) < dead_band);
        mat.data()[k] = v;
      }
      mat.array() -= mat.mean();
      const double lo = mat.cwiseAbs().minCoeff();
      const double hi = mat.cwiseAbs().maxCoeff();
      if (lo >= dead_band && hi <= amplitude) return;
    }
    throw DomainError("academic_generate: redraw cap exhausted for seed " + std::to_string(seed));
  };
  AcademicParams p{Eigen::MatrixXd(n, m), Eigen::MatrixXd(n, m)};
  fill(p.a);
  fill(p.b);
  return p;
}

void write_academic_params(std::ostream& out, const AcademicParams& params) {
  const auto old = out.precision(17);
  out << params.nodes() << ' ' << params.samples_per_node() << '\n';
  for (const auto* mat : {&params.a, &params.b}) {
    for (Eigen::Index i = 0; i < mat->rows(); ++i) {
      for (Eigen::Index j = 0; j < mat->cols(); ++j) out << (j ? " " : "") << (*mat)(i, j);
      out << '\n';
    }
  }
  out.precision(old);
}

AcademicParams read_academic_params(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m) || n < 1 || m < 1) throw DomainError("academic params: bad 'n m' header");
  AcademicParams p{Eigen::MatrixXd(n, m), Eigen::MatrixXd(n, m)};
  for (auto* mat : {&p.a, &p.b})
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (!(in >> (*mat)(i, j))) throw DomainError("academic params: truncated matrix");
  return p;
}

AcademicCost::AcademicCost(AcademicParams params) : params_(std::move(params)) {
  if (params_.a.rows() != params_.b.rows() || params_.a.cols() != params_.b.cols() ||
      params_.a.size() == 0)
    throw DomainError("AcademicCost: a and b must be non-empty with equal shape");
  a_mean_ = params_.a.rowwise().mean();
  b_mean_ = params_.b.rowwise().mean();
}

double AcademicCost::value_grad(int node, const ConstVectorRef& x, VectorRef grad) const {
  check_node(*this, node);
  const double v = x(0);
  const double s = std::sin(v), c = std::cos(v);
  grad(0) = 8.0 * v + 3.0 * std::sin(2.0 * v) - a_mean_(node) * s + b_mean_(node);
  return 4.0 * v * v + 3.0 * s * s + a_mean_(node) * c + b_mean_(node) * v;
}

double AcademicCost::value_difference(int node, const ConstVectorRef& x, const ConstVectorRef& ref) const {
  check_node(*this, node);
  const double u = x(0), v = ref(0);
  const double d = u - v, s = u + v;
  // sin^2 u - sin^2 v = sin(u - v) sin(u + v); cos u - cos v = -2 sin(s/2) sin(d/2).
  return 4.0 * d * s + 3.0 * std::sin(d) * std::sin(s) - 2.0 * a_mean_(node) * std::sin(0.5 * s) * std::sin(0.5 * d) +
         b_mean_(node) * d;
}

double AcademicCost::smoothness() const { return 14.0 + a_mean_.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------

LogisticCost::LogisticCost(LogisticData data) : data_(std::move(data)) {
  if (data_.features.empty() || data_.features.size() != data_.labels.size())
    throw DomainError("LogisticCost: need one label vector per node");
  if (!(data_.lambda >= 0.0)) throw DomainError("LogisticCost: lambda must be >= 0");
  const auto d = data_.features[0].cols();
  for (std::size_t i = 0; i < data_.features.size(); ++i) {
    const auto& x = data_.features[i];
    const auto& y = data_.labels[i];
    if (x.rows() < 1) throw DomainError("LogisticCost: node " + std::to_string(i) + " has no samples");
    if (x.cols() != d) throw DomainError("LogisticCost: inconsistent feature dimension");
    if (y.size() != x.rows()) throw DomainError("LogisticCost: label count mismatch");
    for (Eigen::Index j = 0; j < y.size(); ++j)
      if (y(j) != 1.0 && y(j) != -1.0) throw DomainError("LogisticCost: labels must be -1 or +1");
    const double row_sum = (x.rowwise().squaredNorm().array() + 1.0).sum();
    smoothness_ = std::max(smoothness_, row_sum / (4.0 * static_cast<double>(x.rows())));
  }
  smoothness_ += data_.lambda;
}

double LogisticCost::value_grad(int node, const ConstVectorRef& w, VectorRef grad) const {
  check_node(*this, node);
  const auto& x = data_.features[node];
  const auto& y = data_.labels[node];
  const Eigen::Index d = x.cols();
  const auto m = static_cast<double>(x.rows());
  const auto b = w.head(d);
  const double c = w(d);

  const Eigen::VectorXd margin = (x * b).array() + c;
  Eigen::VectorXd weight(x.rows());
  double loss = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double z = -y(j) * margin(j);
    loss += softplus(z);
    weight(j) = -y(j) * sigmoid(z);
  }
  grad.head(d).noalias() = x.transpose() * weight / m;
  grad.head(d) += data_.lambda * b;
  grad(d) = weight.sum() / m;
  return loss / m + 0.5 * data_.lambda * b.squaredNorm();
}

double LogisticCost::value(int node, const ConstVectorRef& w) const {
  check_node(*this, node);
  const auto& x = data_.features[node];
  const auto& y = data_.labels[node];
  const Eigen::Index d = x.cols();
  const auto b = w.head(d);
  const Eigen::VectorXd margin = (x * b).array() + w(d);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) loss += softplus(-y(j) * margin(j));
  return loss / static_cast<double>(x.rows()) + 0.5 * data_.lambda * b.squaredNorm();
}

double LogisticCost::accuracy(const ConstVectorRef& w) const {
  const Eigen::Index d = data_.feature_dim();
  std::size_t correct = 0, total = 0;
  for (int i = 0; i < nodes(); ++i) {
    const Eigen::VectorXd margin = (data_.features[i] * w.head(d)).array() + w(d);
    for (Eigen::Index j = 0; j < margin.size(); ++j) {
      const double predicted = margin(j) >= 0 ? 1.0 : -1.0;
      correct += predicted == data_.labels[i](j) ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace qtrack
