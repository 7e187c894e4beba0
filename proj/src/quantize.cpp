#include "qtrack/quantize.hpp"

#include <cmath>
#include <sstream>

namespace qtrack {

namespace {

void require_finite(double z, const char* what) {
  if (!std::isfinite(z)) throw DomainError(std::string(what) + ": non-finite input");
}

void require_rho(double rho, const char* what) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw DomainError(std::string(what) + ": quantization level rho must be positive and finite");
}

double quantize_log_impl(double z, double rho, bool& clamped) {
  if (z == 0.0) return 0.0;
  const double mag = std::abs(z);
  const double level = std::round(std::log(mag) / rho);
  if (!std::isfinite(level)) {
    // rho is finer than double resolution of log|z|.
    clamped = true;
    return z;
  }
  double step = level;
  double out = std::exp(rho * step);
  // Keep the result finite and nonzero so the map stays sign-preserving.
  for (int guard = 0; guard < 64 && std::isinf(out); ++guard) {
    clamped = true;
    step -= 1.0;
    out = std::exp(rho * step);
  }
  for (int guard = 0; guard < 64 && out == 0.0; ++guard) {
    clamped = true;
    step += 1.0;
    out = std::exp(rho * step);
  }
  if (std::isinf(out) || out == 0.0) {
    clamped = true;
    out = mag;
  }
  return std::signbit(z) ? -out : out;
}

}  // namespace

double quantize_log(double z, double rho) {
  require_finite(z, "quantize_log");
  require_rho(rho, "quantize_log");
  bool clamped = false;
  return quantize_log_impl(z, rho, clamped);
}

double quantize_uniform(double z, double rho) {
  require_finite(z, "quantize_uniform");
  require_rho(rho, "quantize_uniform");
  const double level = std::round(z / rho);
  if (!std::isfinite(level)) return z;
  return rho * level;
}

NonlinearityKind parse_nonlinearity_kind(std::string_view s) {
  if (s == "none" || s == "identity") return NonlinearityKind::identity;
  if (s == "log") return NonlinearityKind::log_scale;
  if (s == "uniform") return NonlinearityKind::uniform;
  throw DomainError("unknown nonlinearity '" + std::string(s) + "' (expected none|log|uniform)");
}

std::string_view to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::identity:
      return "none";
    case NonlinearityKind::log_scale:
      return "log";
    case NonlinearityKind::uniform:
      return "uniform";
  }
  return "?";
}

LinkNonlinearity::LinkNonlinearity(NonlinearityKind kind, double rho) : kind_(kind), rho_(rho) {
  if (kind_ != NonlinearityKind::identity) require_rho(rho_, "LinkNonlinearity");
}

double LinkNonlinearity::operator()(double z) const {
  switch (kind_) {
    case NonlinearityKind::identity:
      require_finite(z, "identity link");
      return z;
    case NonlinearityKind::log_scale:
      return quantize_log(z, rho_);
    case NonlinearityKind::uniform:
      return quantize_uniform(z, rho_);
  }
  return z;
}

std::size_t LinkNonlinearity::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != out.size()) throw DomainError("LinkNonlinearity::apply: length mismatch");
  std::size_t clamps = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double z = in[i];
    require_finite(z, "LinkNonlinearity::apply");
    switch (kind_) {
      case NonlinearityKind::identity:
        out[i] = z;
        break;
      case NonlinearityKind::log_scale: {
        bool clamped = false;
        out[i] = quantize_log_impl(z, rho_, clamped);
        clamps += clamped ? 1 : 0;
        break;
      }
      case NonlinearityKind::uniform:
        out[i] = quantize_uniform(z, rho_);
        break;
    }
  }
  return clamps;
}

Eigen::MatrixXd LinkNonlinearity::apply(const Eigen::MatrixXd& v) const {
  Eigen::MatrixXd out(v.rows(), v.cols());
  apply(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
        std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

std::optional<SectorBounds> LinkNonlinearity::sector_bounds() const {
  switch (kind_) {
    case NonlinearityKind::identity:
      return SectorBounds{1.0, 1.0};
    case NonlinearityKind::log_scale:
      return SectorBounds{std::exp(-rho_ / 2.0), std::exp(rho_ / 2.0)};
    case NonlinearityKind::uniform:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string LinkNonlinearity::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ != NonlinearityKind::identity) os << "(rho=" << rho_ << ")";
  return os.str();
}

}  // namespace qtrack
