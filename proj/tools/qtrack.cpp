// qtrack command-line front end.
//
// Exit status: 0 success, 1 runtime error, 2 invalid configuration,
// 3 run diverged (partial trace still written).

#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "qtrack/config.hpp"
#include "qtrack/engine.hpp"
#include "qtrack/experiment.hpp"
#include "qtrack/graph.hpp"
#include "qtrack/report.hpp"
#include "qtrack/schedule.hpp"
#include "qtrack/trace.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const auto cfg = qtrack::load_config(config_path);
  try {
    const auto result = qtrack::run_experiment(cfg);
    const auto files = qtrack::write_outputs(cfg, result.trace, result.accuracy);
    qtrack::write_summary(std::cout, result.trace, cfg.name);
    if (result.accuracy) std::cout << "training_accuracy: " << *result.accuracy << '\n';
    std::cout << "wrote " << files.csv.string() << "\nwrote " << files.svg.string() << '\n';
    return 0;
  } catch (const qtrack::DivergenceError& e) {
    std::cerr << "qtrack: " << e.what() << '\n';
    if (e.partial_trace()) {
      const auto files = qtrack::write_outputs(cfg, *e.partial_trace());
      std::cerr << "partial trace written to " << files.csv.string() << '\n';
    }
    return 3;
  }
}

int cmd_compare(const std::vector<std::string>& traces, const std::string& out_svg) {
  const auto report = qtrack::compare_report(traces);
  qtrack::print_compare_table(std::cout, report);
  std::ofstream out(out_svg, std::ios::binary);
  if (!out) throw qtrack::Error("cannot write '" + out_svg + "'");
  out << report.svg;
  std::cout << "wrote " << out_svg << '\n';
  return 0;
}

int cmd_spectrum(const std::string& path, double smoothness, double k_upper, bool show_all) {
  std::ifstream in(path);
  if (!in) throw qtrack::Error("cannot open edge list '" + path + "'");
  const auto g = qtrack::read_edge_list(in);
  const auto spec = qtrack::spectrum(qtrack::laplacian(g));
  std::cout << std::setprecision(12);
  std::cout << "nodes: " << g.size() << "\nlinks: " << g.links().size() << '\n';
  std::cout << "weight_balanced: " << (qtrack::is_weight_balanced(g) ? "yes" : "no") << '\n';
  std::cout << "strongly_connected: " << (qtrack::is_strongly_connected(g) ? "yes" : "no") << '\n';
  std::cout << "lambda2: " << spec.lambda2_real_abs << '\n';
  std::cout << "alpha_bar: " << qtrack::step_size_bound(spec.lambda2_real_abs, spec.lambda2_real_abs, smoothness, k_upper)
            << "  (L=" << smoothness << ", K_upper=" << k_upper << ")\n";
  if (show_all)
    for (const auto& ev : spec.eigenvalues) std::cout << "  " << ev.real() << ' ' << ev.imag() << '\n';
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = qtrack::load_config(config_path);
  std::cout << config_path << ": ok (" << cfg.name << ")\n";
  return 0;
}

int cmd_graph(const std::string& kind, int n, double radius, double p, double scale, std::uint64_t seed,
              const std::string& out_path) {
  qtrack::TopologySpec spec;
  spec.kind = qtrack::parse_graph_kind(kind);
  spec.n = n;
  spec.radius = radius;
  spec.p = p;
  spec.scale = scale;
  spec.seed = seed;
  const auto g = qtrack::assign_weights(qtrack::generate_topology(spec, seed), scale);
  if (out_path == "-") {
    qtrack::write_edge_list(std::cout, g);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw qtrack::Error("cannot write '" + out_path + "'");
  qtrack::write_edge_list(out, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient tracking over weight-balanced digraphs with quantized links"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment config and write <name>.csv/.svg");
  run->add_option("config", config_path, "Experiment config file")->required();

  std::vector<std::string> traces;
  std::string out_svg;
  auto* compare = app.add_subcommand("compare", "Tabulate final gaps and slopes of several traces");
  compare->add_option("traces", traces, "Trace CSV files")->required();
  compare->add_option("--out", out_svg, "Combined SVG chart")->required();

  std::string edge_list;
  double smoothness = 1.0, k_upper = 1.0;
  bool show_all = false;
  auto* spectrum = app.add_subcommand("spectrum", "Print lambda2 of an edge list and the step bound");
  spectrum->add_option("edgelist", edge_list, "Edge-list file")->required();
  spectrum->add_option("-L,--smoothness", smoothness, "Smoothness constant L")->check(CLI::PositiveNumber);
  spectrum->add_option("-K,--k-upper", k_upper, "Upper sector bound of the link map")->check(CLI::PositiveNumber);
  spectrum->add_flag("--all", show_all, "Also list every eigenvalue");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config file")->required();

  std::string kind = "exponential", graph_out = "-";
  int n = 16;
  double radius = 0.45, p = 0.3, scale = 0.5;
  std::uint64_t seed = 1;
  auto* graph = app.add_subcommand("graph", "Write a generated, uniformly weighted graph as an edge list");
  graph->add_option("--kind", kind, "exponential | geometric | er");
  graph->add_option("--n", n, "Node count");
  graph->add_option("--radius", radius, "Geometric connection radius");
  graph->add_option("--p", p, "Erdos-Renyi link probability");
  graph->add_option("--scale", scale, "Incoming weight cap per node");
  graph->add_option("--seed", seed, "Generator seed");
  graph->add_option("-o,--out", graph_out, "Output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*compare) return cmd_compare(traces, out_svg);
    if (*spectrum) return cmd_spectrum(edge_list, smoothness, k_upper, show_all);
    if (*validate) return cmd_validate(config_path);
    if (*graph) return cmd_graph(kind, n, radius, p, scale, seed, graph_out);
  } catch (const qtrack::ConfigError& e) {
    std::cerr << "qtrack: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qtrack: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
