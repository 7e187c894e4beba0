#include "qtrack/experiment.hpp"

#include <cstdlib>
#include <fstream>

#include "qtrack/idx.hpp"
#include "qtrack/oracle.hpp"
#include "qtrack/report.hpp"
#include "qtrack/trace.hpp"

namespace qtrack {

std::unique_ptr<CostModel> build_cost(const ExperimentConfig& cfg) {
  if (cfg.cost == CostKind::academic) {
    AcademicParams params;
    if (cfg.academic.params_file) {
      std::ifstream in(*cfg.academic.params_file);
      if (!in) throw Error("cannot open '" + cfg.academic.params_file->string() + "'");
      params = read_academic_params(in);
      if (params.nodes() != cfg.graph.n)
        throw ConfigError({"cost.params_file: has " + std::to_string(params.nodes()) + " rows but graph.n is " +
                           std::to_string(cfg.graph.n)});
    } else {
      params = academic_generate(cfg.graph.n, cfg.academic.samples_per_node, cfg.academic.coef_seed,
                                 cfg.academic.amplitude);
    }
    return std::make_unique<AcademicCost>(std::move(params));
  }
  const auto& m = cfg.mnist;
  const IdxDataset ds = load_idx(m.images.string(), m.labels.string());
  return std::make_unique<LogisticCost>(
      select_and_partition(ds, m.digit_neg, m.digit_pos, m.total, cfg.graph.n, m.partition_seed, m.lambda));
}

LinkNonlinearity build_nonlinearity(const ExperimentConfig& cfg) {
  if (cfg.nonlinearity == NonlinearityKind::identity) return LinkNonlinearity::identity();
  return {cfg.nonlinearity, cfg.rho};
}

OracleInfo solve_oracle(const ExperimentConfig& cfg, const CostModel& costs) {
  OracleOptions opts;
  opts.tol = cfg.oracle_tol > 0.0 ? cfg.oracle_tol : (cfg.cost == CostKind::academic ? 1e-12 : 1e-10);
  opts.max_iter = cfg.oracle_max_iter;
  const auto r = solve_centralized(costs, opts);
  return {r.x_star, r.f_star, r.grad_norm, r.iterations, r.converged};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::optional<OracleInfo> oracle) {
  validate_config(cfg);
  const auto costs = build_cost(cfg);
  const auto link = build_nonlinearity(cfg);
  TopologySchedule topology(cfg.graph, cfg.schedule, cfg.independent_b);
  if (!oracle) oracle = solve_oracle(cfg, *costs);

  RunOptions opts;
  opts.iterations = cfg.iterations;
  opts.stride = cfg.stride;
  opts.seed = cfg.seed;
  opts.alpha = cfg.alpha;
  opts.safety = cfg.safety;
  opts.lambda2_samples = cfg.lambda2_samples;
  opts.gap_tolerance = cfg.gap_tolerance;
  opts.f_star = oracle->f_star;
  if (oracle->x_star.size() == costs->dimension()) opts.x_star = oracle->x_star;

  ExperimentResult result;
  try {
    result.trace = run(*costs, topology, link, opts);
  } catch (DivergenceError& e) {
    if (e.partial_trace()) {
      auto partial = std::make_shared<ExperimentTrace>(*e.partial_trace());
      partial->oracle = oracle;
      e.attach_trace(partial);
    }
    throw;
  }
  result.trace.oracle = oracle;
  if (const auto* logistic = dynamic_cast<const LogisticCost*>(costs.get()))
    result.accuracy = logistic->accuracy(result.trace.summary.final_x_bar);
  return result;
}

std::filesystem::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

WrittenFiles write_outputs(const ExperimentConfig& cfg, const ExperimentTrace& trace,
                           std::optional<double> accuracy) {
  const auto dir = output_directory(cfg);
  std::filesystem::create_directories(dir);
  WrittenFiles files{dir / (cfg.name + ".csv"), dir / (cfg.name + ".svg"), dir / (cfg.name + ".summary.txt")};

  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    return out;
  };
  {
    auto out = open(files.csv);
    write_trace_csv(out, trace);
  }
  {
    Series s{cfg.name, {}, {}};
    for (const auto& r : trace.records) {
      s.k.push_back(static_cast<double>(r.k));
      s.value.push_back(r.gap);
    }
    auto out = open(files.svg);
    out << render_svg({s}, cfg.name);
  }
  {
    auto out = open(files.summary);
    write_summary(out, trace, cfg.name);
    if (accuracy) out << "training_accuracy: " << *accuracy << '\n';
  }
  return files;
}

}  // namespace qtrack
