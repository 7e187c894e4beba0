#include "qtrack/engine.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "rng.hpp"

namespace qtrack {

SwarmState SwarmState::initial(NodeMatrix x0) {
  SwarmState s;
  s.k = 0;
  s.y = NodeMatrix::Zero(x0.rows(), x0.cols());
  s.grad_prev = NodeMatrix::Zero(x0.rows(), x0.cols());
  s.x = std::move(x0);
  return s;
}

NodeMatrix random_initial_x(int n, int p, std::uint64_t seed) {
  auto rng = detail::make_rng(seed, {0x696e6974ULL});
  std::normal_distribution<double> normal(0.0, 1.0);
  NodeMatrix x(n, p);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return x;
}

ConsensusOperator::ConsensusOperator(const WeightedDigraph& g) : n_(g.size()) {
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& l : g.links()) ++offsets_[static_cast<std::size_t>(l.to) + 1];
  for (int i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  incoming_.resize(g.links().size());
  auto fill = offsets_;
  // Links are sorted by (from, to), so each node's list is ordered by sender.
  for (const auto& l : g.links()) incoming_[fill[l.to]++] = {l.from, l.weight};
}

void ConsensusOperator::apply(const NodeMatrix& h, NodeMatrix& out) const {
  out.setZero(h.rows(), h.cols());
  for (int i = 0; i < n_; ++i) {
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      const auto& in = incoming_[e];
      out.row(i) += in.weight * (h.row(in.from) - h.row(i));
    }
  }
}

double step_size_bound(double lambda2_a, double lambda2_b, double smoothness, double k_upper) {
  if (!(lambda2_a > 0.0) || !(lambda2_b > 0.0) || !(smoothness > 0.0) || !(k_upper > 0.0))
    throw DomainError("step_size_bound: all inputs must be positive");
  return std::min(lambda2_a, lambda2_b) / (smoothness * k_upper);
}

StepConfig auto_step(double lambda2_a, double lambda2_b, double smoothness, double k_upper,
                     double safety) {
  if (!(safety > 0.0) || safety > 1.0) throw DomainError("auto_step: safety must lie in (0, 1]");
  StepConfig cfg;
  cfg.alpha_bar = step_size_bound(lambda2_a, lambda2_b, smoothness, k_upper);
  // safety == 1 would sit on the open boundary; step just inside it.
  cfg.alpha = safety < 1.0 ? safety * cfg.alpha_bar : std::nextafter(cfg.alpha_bar, 0.0);
  cfg.safety = safety;
  cfg.auto_sized = true;
  return cfg;
}

namespace {

std::string divergence_message(std::int64_t iteration, int node, int coordinate, const char* variable,
                               double value) {
  std::ostringstream os;
  os << "run diverged at iteration " << iteration << ": " << variable << "[" << node << "][" << coordinate
     << "] = " << value;
  return os.str();
}

void check_bounded(const NodeMatrix& m, std::int64_t iteration, const char* variable) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit)
        throw DivergenceError(iteration, static_cast<int>(i), static_cast<int>(j), variable, v);
    }
  }
}

std::size_t apply_link(const LinkNonlinearity& h, const NodeMatrix& in, NodeMatrix& out) {
  out.resize(in.rows(), in.cols());
  return h.apply(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
                 std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

double row_norm_sum(const NodeMatrix& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += m.row(i).norm();
  return s;
}

}  // namespace

DivergenceError::DivergenceError(std::int64_t iteration, int node, int coordinate, const char* variable,
                                 double value)
    : Error(divergence_message(iteration, node, coordinate, variable, value)),
      iteration_(iteration),
      node_(node),
      coordinate_(coordinate) {}

SwarmState iterate(const SwarmState& state, const StepInputs& in, StepDiagnostics* diag) {
  const int n = state.nodes();
  const int p = state.dimension();
  if (in.costs.nodes() != n || in.costs.dimension() != p)
    throw DomainError("iterate: state shape does not match the cost model");
  if (in.a_weights.nodes() != n || in.b_weights.nodes() != n)
    throw DomainError("iterate: weight graphs do not match the node count");

  // Everything on the right-hand side is read from round k.
  NodeMatrix hx, hy, mix_x, mix_y;
  std::size_t clamps = apply_link(in.nonlinearity, state.x, hx);
  clamps += apply_link(in.nonlinearity, state.y, hy);
  in.a_weights.apply(hx, mix_x);
  in.b_weights.apply(hy, mix_y);

  SwarmState next;
  next.k = state.k + 1;
  next.x = state.x + mix_x - in.alpha * state.y;
  check_bounded(next.x, next.k, "x");

  next.grad_prev.resize(n, p);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd g(p);
    in.costs.value_grad(i, next.x.row(i).transpose(), g);
    next.grad_prev.row(i) = g.transpose();
  }
  next.y = state.y + mix_y + (next.grad_prev - state.grad_prev);
  check_bounded(next.y, next.k, "y");

  if (diag) {
    const Eigen::RowVectorXd drift =
        next.x.colwise().sum() - state.x.colwise().sum() + in.alpha * state.y.colwise().sum();
    const double scale_c = std::max(1.0, row_norm_sum(state.x) + in.alpha * row_norm_sum(state.y));
    diag->conservation = drift.norm() / scale_c;
    const Eigen::RowVectorXd track = next.y.colwise().sum() - next.grad_prev.colwise().sum();
    diag->tracking = track.norm() / std::max(1.0, next.grad_prev.norm());
    diag->clamps = clamps;
  }
  return next;
}

MetricRecord gap_and_residuals(const SwarmState& state, const CostModel& costs, double f_star,
                               const Eigen::VectorXd* x_star) {
  MetricRecord r;
  r.k = state.k;
  const Eigen::VectorXd x_bar = state.x.colwise().mean().transpose();
  const double gap = x_star ? costs.global_difference(x_bar, *x_star) : costs.global_value(x_bar) - f_star;
  r.gap_floored = gap < 0.0;
  r.gap = std::max(gap, kGapFloor);
  double worst = 0.0;
  for (int i = 0; i < state.nodes(); ++i)
    worst = std::max(worst, (state.x.row(i).transpose() - x_bar).norm());
  r.consensus_err = worst;

  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(state.dimension());
  Eigen::VectorXd g(state.dimension());
  for (int i = 0; i < state.nodes(); ++i) {
    costs.value_grad(i, state.x.row(i).transpose(), g);
    grad_sum += g;
  }
  r.tracking_residual = (state.y.colwise().sum().transpose() - grad_sum).norm();
  return r;
}

ExperimentTrace run(const CostModel& costs, TopologySchedule& topology,
                    const LinkNonlinearity& nonlinearity, const RunOptions& options) {
  if (options.iterations < 0) throw DomainError("run: iteration budget must be >= 0");
  if (options.stride < 1) throw DomainError("run: stride must be >= 1");
  if (topology.spec().n != costs.nodes())
    throw DomainError("run: graph has " + std::to_string(topology.spec().n) +
                      " nodes but the cost model has " + std::to_string(costs.nodes()));

  auto trace = std::make_shared<ExperimentTrace>();
  auto& summary = trace->summary;
  summary.smoothness = costs.smoothness();
  summary.lambda2 = topology.min_algebraic_connectivity(options.lambda2_samples);
  const auto bounds = nonlinearity.sector_bounds();
  if (bounds) summary.k_upper = bounds->upper;
  // Uniform quantization has no sector certificate; size it like the linear case.
  const double k_upper = bounds ? bounds->upper : 1.0;
  const auto auto_cfg = auto_step(summary.lambda2, summary.lambda2, summary.smoothness, k_upper,
                                  options.safety);
  summary.alpha_bar = auto_cfg.alpha_bar;
  summary.alpha = options.alpha ? *options.alpha : auto_cfg.alpha;
  if (!(summary.alpha > 0.0)) throw DomainError("run: alpha must be positive");
  if (options.x_star && options.x_star->size() != costs.dimension())
    throw DomainError("run: x_star has the wrong dimension");

  NodeMatrix x0 = options.initial_x ? *options.initial_x
                                    : random_initial_x(costs.nodes(), costs.dimension(), options.seed);
  if (x0.rows() != costs.nodes() || x0.cols() != costs.dimension())
    throw DomainError("run: initial_x has the wrong shape");
  SwarmState state = SwarmState::initial(std::move(x0));

  topology.advance_to(0);
  ConsensusOperator a_op(topology.a_graph());
  ConsensusOperator b_op(topology.b_graph());

  auto record = [&](const SwarmState& s) {
    MetricRecord r = gap_and_residuals(s, costs, options.f_star, options.x_star ? &*options.x_star : nullptr);
    r.alpha = summary.alpha;
    r.epoch = topology.epoch(s.k);
    if (r.gap_floored) ++summary.floored_gaps;
    trace->records.push_back(r);
    return r.gap;
  };

  double gap = record(state);
  try {
    while (state.k < options.iterations) {
      if (options.gap_tolerance > 0.0 && gap < options.gap_tolerance && trace->records.back().k == state.k) {
        summary.stopped_on_tolerance = true;
        break;
      }
      if (topology.advance_to(state.k)) {
        a_op = ConsensusOperator(topology.a_graph());
        b_op = ConsensusOperator(topology.b_graph());
      }
      StepDiagnostics diag;
      state = iterate(state, StepInputs{costs, nonlinearity, a_op, b_op, summary.alpha}, &diag);
      summary.clamp_count += diag.clamps;
      summary.max_conservation_residual = std::max(summary.max_conservation_residual, diag.conservation);
      summary.max_tracking_residual = std::max(summary.max_tracking_residual, diag.tracking);
      if (state.k % options.stride == 0 || state.k == options.iterations) gap = record(state);
    }
  } catch (DivergenceError& e) {
    summary.diverged = true;
    summary.iterations = state.k;
    summary.final_gap = trace->records.back().gap;
    summary.final_x_bar = state.x.colwise().mean().transpose();
    e.attach_trace(trace);
    throw;
  }
  if (trace->records.back().k != state.k) record(state);
  summary.iterations = state.k;
  summary.final_gap = trace->records.back().gap;
  summary.final_x_bar = state.x.colwise().mean().transpose();
  return std::move(*trace);
}

}  // namespace qtrack
