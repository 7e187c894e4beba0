#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtrack/error.hpp"
#include "qtrack/quantize.hpp"
#include "qtrack/schedule.hpp"

namespace qtrack {

/// Raised for an invalid experiment description. `issues()` lists one
/// `section.key: problem` entry per offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class CostKind { academic, mnist };

struct AcademicSettings {
  int samples_per_node = 1;
  std::uint64_t coef_seed = 1;
  double amplitude = 10.0;
  std::optional<std::filesystem::path> params_file;  // overrides the seeded draw
};

struct MnistSettings {
  std::filesystem::path images;
  std::filesystem::path labels;
  int digit_neg = 0;
  int digit_pos = 1;
  int total = 2000;
  double lambda = 0.01;
  std::uint64_t partition_seed = 1;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path output_dir = ".";

  CostKind cost = CostKind::academic;
  AcademicSettings academic;
  MnistSettings mnist;

  TopologySpec graph;
  SwitchingSchedule schedule;
  bool independent_b = false;

  NonlinearityKind nonlinearity = NonlinearityKind::identity;
  double rho = 0.0;

  std::int64_t iterations = 1000;
  std::int64_t stride = 10;
  std::uint64_t seed = 1;
  std::optional<double> alpha;  // empty: auto-sized
  double safety = 0.5;
  double gap_tolerance = 0.0;
  int lambda2_samples = 16;

  double oracle_tol = 0.0;  // 0 picks the per-model default
  std::int64_t oracle_max_iter = 200000;
};

/// Parses an INI-style experiment file. Relative paths are resolved against
/// the file's directory. Throws ConfigError listing every bad field.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Cross-field checks (n vs graph family, rho vs kind, ...). Also run by
/// load_config; exposed for programmatically built configs.
void validate_config(const ExperimentConfig& cfg);

/// Accepts decimals and simple fractions such as "1/128".
double parse_real(const std::string& text);

}  // namespace qtrack
