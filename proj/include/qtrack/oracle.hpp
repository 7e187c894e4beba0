#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "qtrack/costs.hpp"

namespace qtrack {

struct OracleResult {
  Eigen::VectorXd x_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

struct OracleOptions {
  double tol = 1e-12;
  std::int64_t max_iter = 200000;
  /// Nesterov momentum, restarted when F increases or the momentum points
  /// uphill. Plain gradient descent when false.
  bool accelerate = true;
  std::optional<Eigen::VectorXd> start;  // zero vector when empty
};

/// Centralized minimizer of F = (1/n) sum_i f_i: gradient steps of length
/// 1/L (halved whenever a plain step fails to decrease F) until
/// ||grad F|| <= tol. When the budget runs out the last accepted iterate is
/// returned with converged = false.
OracleResult solve_centralized(const CostModel& costs, const OracleOptions& options = {});

}  // namespace qtrack
