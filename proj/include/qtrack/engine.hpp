#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/costs.hpp"
#include "qtrack/error.hpp"
#include "qtrack/graph.hpp"
#include "qtrack/quantize.hpp"
#include "qtrack/schedule.hpp"

namespace qtrack {

/// One row per node.
using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Primal estimates, gradient trackers and the cached local gradients used
/// for the tracker increment grad f_i(x_i^{k+1}) - grad f_i(x_i^k).
struct SwarmState {
  std::int64_t k = 0;
  NodeMatrix x;
  NodeMatrix y;
  NodeMatrix grad_prev;

  int nodes() const { return static_cast<int>(x.rows()); }
  int dimension() const { return static_cast<int>(x.cols()); }

  /// k = 0, Y = 0 and a zero gradient cache. With the zero cache the first
  /// tracker increment is the full local gradient, so sum_i y_i equals
  /// sum_i grad f_i(x_i) from k = 1 on.
  static SwarmState initial(NodeMatrix x0);
};

/// Standard-normal n x p matrix from `seed`.
NodeMatrix random_initial_x(int n, int p, std::uint64_t seed);

/// Applies out_i = sum_j a_ij (h_j - h_i) with a fixed summation order.
class ConsensusOperator {
 public:
  ConsensusOperator() = default;
  explicit ConsensusOperator(const WeightedDigraph& g);

  int nodes() const { return n_; }
  void apply(const NodeMatrix& h, NodeMatrix& out) const;

 private:
  struct Incoming {
    int from;
    double weight;
  };
  int n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Incoming> incoming_;
};

/// Admissible step-size bound min(lambda2A, lambda2B) / (L * K_upper).
double step_size_bound(double lambda2_a, double lambda2_b, double smoothness, double k_upper);

struct StepConfig {
  double alpha = 0.0;
  double alpha_bar = 0.0;
  double safety = 0.5;
  bool auto_sized = true;
};

/// alpha = safety * step_size_bound(...); requires 0 < safety <= 1 so that
/// alpha < alpha_bar.
StepConfig auto_step(double lambda2_a, double lambda2_b, double smoothness, double k_upper,
                     double safety = 0.5);

/// Everything one synchronous round needs besides the state.
struct StepInputs {
  const CostModel& costs;
  const LinkNonlinearity& nonlinearity;
  const ConsensusOperator& a_weights;
  const ConsensusOperator& b_weights;
  double alpha;
};

/// Per-round invariant residuals, both relative.
struct StepDiagnostics {
  /// || sum x^{k+1} - sum x^k + alpha sum y^k || / max(1, sum||x_i^k|| + alpha sum||y_i^k||)
  double conservation = 0.0;
  /// || sum y^{k+1} - sum grad f(x^{k+1}) || / max(1, ||G^{k+1}||_F)
  double tracking = 0.0;
  std::size_t clamps = 0;
};

struct ExperimentTrace;

/// Raised when an entry of x or y becomes non-finite or exceeds 1e12 in
/// magnitude. Carries the partial trace when thrown out of run().
class DivergenceError : public Error {
 public:
  DivergenceError(std::int64_t iteration, int node, int coordinate, const char* variable, double value);

  std::int64_t iteration() const { return iteration_; }
  int node() const { return node_; }
  int coordinate() const { return coordinate_; }

  const ExperimentTrace* partial_trace() const { return trace_.get(); }
  void attach_trace(std::shared_ptr<const ExperimentTrace> trace) { trace_ = std::move(trace); }

 private:
  std::int64_t iteration_;
  int node_;
  int coordinate_;
  std::shared_ptr<const ExperimentTrace> trace_;
};

inline constexpr double kDivergenceLimit = 1e12;

/// One lock-step round: every node reads h(x^k), h(y^k) of its in-neighbors,
///   x^{k+1} = x^k + sum_j a_ij (h(x_j) - h(x_i)) - alpha y^k
///   y^{k+1} = y^k + sum_j b_ij (h(y_j) - h(y_i)) + grad f(x^{k+1}) - grad f(x^k)
SwarmState iterate(const SwarmState& state, const StepInputs& in, StepDiagnostics* diag = nullptr);

struct MetricRecord {
  std::int64_t k = 0;
  double gap = 0.0;
  bool gap_floored = false;
  double consensus_err = 0.0;
  double tracking_residual = 0.0;
  double alpha = 0.0;
  std::int64_t epoch = 0;
};

inline constexpr double kGapFloor = -1e-12;

/// Gap F(xbar) - f_star (floored at -1e-12 and flagged when negative),
/// max_i ||x_i - xbar||, and ||sum y_i - sum grad f_i(x_i)||. With a
/// reference minimizer the gap is F(xbar) - F(x_star) summed node by node,
/// which keeps its relative accuracy as xbar approaches x_star.
MetricRecord gap_and_residuals(const SwarmState& state, const CostModel& costs, double f_star,
                               const Eigen::VectorXd* x_star = nullptr);

struct OracleInfo {
  Eigen::VectorXd x_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
  std::int64_t iterations = 0;
  bool converged = true;
};

struct TraceSummary {
  double final_gap = 0.0;
  std::int64_t iterations = 0;
  double alpha = 0.0;
  double alpha_bar = 0.0;
  double lambda2 = 0.0;
  double smoothness = 0.0;
  std::optional<double> k_upper;  // empty for uncertified (uniform) links
  bool stopped_on_tolerance = false;
  bool diverged = false;
  std::size_t clamp_count = 0;
  std::size_t floored_gaps = 0;
  double max_conservation_residual = 0.0;
  double max_tracking_residual = 0.0;  // over k >= 1
  Eigen::VectorXd final_x_bar;
};

struct ExperimentTrace {
  std::vector<MetricRecord> records;
  TraceSummary summary;
  std::optional<OracleInfo> oracle;
};

struct RunOptions {
  std::int64_t iterations = 1000;
  std::int64_t stride = 10;
  std::uint64_t seed = 1;
  std::optional<double> alpha;  // explicit step; auto-sized when empty
  double safety = 0.5;
  int lambda2_samples = 16;
  double gap_tolerance = 0.0;  // stop once a recorded gap is below this; 0 disables
  double f_star = 0.0;
  std::optional<Eigen::VectorXd> x_star;  // when set, the gap is measured against F(x_star)
  std::optional<NodeMatrix> initial_x;  // overrides the seeded draw
};

/// Seeded initial X, Y = 0, then `iterations` rounds with the graphs of
/// `topology` in force at each k. Rows are recorded at k = 0, every
/// `stride` iterations and at the last iteration.
ExperimentTrace run(const CostModel& costs, TopologySchedule& topology,
                    const LinkNonlinearity& nonlinearity, const RunOptions& options);

}  // namespace qtrack
