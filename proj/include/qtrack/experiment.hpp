#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "qtrack/config.hpp"
#include "qtrack/costs.hpp"
#include "qtrack/engine.hpp"
#include "qtrack/quantize.hpp"

namespace qtrack {

/// Environment variable that, when set and non-empty, replaces the
/// configured output directory.
inline constexpr const char* kOutputDirEnv = "QTRACK_OUTPUT_DIR";

std::unique_ptr<CostModel> build_cost(const ExperimentConfig& cfg);
LinkNonlinearity build_nonlinearity(const ExperimentConfig& cfg);

struct ExperimentResult {
  ExperimentTrace trace;
  std::optional<double> accuracy;  // logistic models only, at the averaged iterate
};

/// Builds cost, schedule and link map, solves for F*, then runs the engine.
/// Divergence propagates as DivergenceError with the partial trace attached.
/// A supplied `oracle` skips the centralized solve (runs sharing one cost).
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::optional<OracleInfo> oracle = std::nullopt);

/// Centralized reference for the config's cost model.
OracleInfo solve_oracle(const ExperimentConfig& cfg, const CostModel& costs);

/// The configured directory, or $QTRACK_OUTPUT_DIR when set.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

struct WrittenFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path summary;
};

WrittenFiles write_outputs(const ExperimentConfig& cfg, const ExperimentTrace& trace,
                           std::optional<double> accuracy = std::nullopt);

}  // namespace qtrack
