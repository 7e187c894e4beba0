#include "qtrack/oracle.hpp"

#include <cmath>
#include <limits>

namespace qtrack {

namespace {

// Near the minimizer successive values differ by less than their rounding
// error, so "no decrease" is judged with a few ulps of slack.
bool increased(double f_next, double f_prev) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return f_next - f_prev > 8.0 * eps * (std::abs(f_next) + std::abs(f_prev));
}

}  // namespace

OracleResult solve_centralized(const CostModel& costs, const OracleOptions& options) {
  const int p = costs.dimension();
  if (!(options.tol > 0.0)) throw DomainError("solve_centralized: tol must be positive");

  Eigen::VectorXd x = options.start ? *options.start : Eigen::VectorXd::Zero(p);
  if (x.size() != p) throw DomainError("solve_centralized: start has the wrong dimension");

  Eigen::VectorXd gx(p), gy(p), x_next(p), g_next(p);
  double fx = costs.global_value_grad(x, gx);
  double step = 1.0 / costs.smoothness();
  const double min_step = step * 1e-20;

  Eigen::VectorXd y = x;  // extrapolated point
  double t = 1.0;
  bool momentum = false;

  std::int64_t it = 0;
  for (; it < options.max_iter; ++it) {
    if (gx.norm() <= options.tol) break;
    if (momentum)
      costs.global_value_grad(y, gy);
    else
      gy = gx;
    x_next = y - step * gy;
    const double f_next = costs.global_value_grad(x_next, g_next);
    // Confirm an apparent increase with the model's own difference, which
    // stays accurate where F itself is dominated by cancellation error.
    if (increased(f_next, fx) && costs.global_difference(x_next, x) > 0.0) {
      if (momentum) {
        y = x;
        t = 1.0;
        momentum = false;
        continue;
      }
      step *= 0.5;
      if (step < min_step) break;
      continue;
    }
    if (options.accelerate) {
      // Gradient restart: drop the momentum once it points uphill.
      if (momentum && gy.dot(x_next - x) > 0.0) {
        t = 1.0;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = x_next + ((t - 1.0) / t_next) * (x_next - x);
      t = t_next;
      momentum = true;
    }
    x = x_next;
    fx = f_next;
    gx = g_next;
    if (!momentum) y = x;
  }

  OracleResult out;
  out.x_star = x;
  out.f_star = fx;
  out.grad_norm = gx.norm();
  out.iterations = it;
  out.converged = out.grad_norm <= options.tol;
  return out;
}

}  // namespace qtrack
