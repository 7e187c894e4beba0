#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "qtrack/error.hpp"

namespace qtrack {

/// sgn(z) * exp(rho * round(log|z| / rho)), rounding half away from zero.
/// Returns 0 for z == 0. Results that would overflow to infinity or underflow
/// to zero are moved one level toward the representable range.
/// Throws DomainError for non-finite z or rho <= 0.
double quantize_log(double z, double rho);

/// rho * round(z / rho), rounding half away from zero.
double quantize_uniform(double z, double rho);

enum class NonlinearityKind { identity, log_scale, uniform };

/// Parses `none`, `log` or `uniform`.
NonlinearityKind parse_nonlinearity_kind(std::string_view s);
std::string_view to_string(NonlinearityKind kind);

struct SectorBounds {
  double lower = 1.0;
  double upper = 1.0;
};

/// Elementwise link map applied to every transmitted vector.
class LinkNonlinearity {
 public:
  LinkNonlinearity() = default;
  LinkNonlinearity(NonlinearityKind kind, double rho);

  static LinkNonlinearity identity() { return {}; }
  static LinkNonlinearity log_scale(double rho) { return {NonlinearityKind::log_scale, rho}; }
  static LinkNonlinearity uniform(double rho) { return {NonlinearityKind::uniform, rho}; }

  NonlinearityKind kind() const { return kind_; }
  double rho() const { return rho_; }

  double operator()(double z) const;

  /// out[i] = h(in[i]). Returns how many entries hit the log-scale range
  /// clamp. `in` and `out` may alias.
  std::size_t apply(std::span<const double> in, std::span<double> out) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& v) const;

  /// (e^{-rho/2}, e^{rho/2}) for log-scale, (1, 1) for identity, nothing for
  /// uniform quantization, which has no sector certificate.
  std::optional<SectorBounds> sector_bounds() const;

  std::string describe() const;

 private:
  NonlinearityKind kind_ = NonlinearityKind::identity;
  double rho_ = 0.0;
};

}  // namespace qtrack
