#include "qtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qtrack {

namespace pt = boost::property_tree;

namespace {

std::string join(const std::vector<std::string>& issues) {
  std::string s = "invalid configuration:";
  for (const auto& i : issues) s += "\n  " + i;
  return s;
}

std::string strip(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw DomainError("expected true or false, got '" + s + "'");
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw DomainError("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& s) {
  if (s.empty() || s[0] == '-') throw DomainError("expected a non-negative integer, got '" + s + "'");
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw DomainError("expected a non-negative integer, got '" + s + "'");
  return v;
}

// Reads keys of one section, recording unknown keys and conversion failures.
class Section {
 public:
  Section(const pt::ptree& root, std::string name, std::set<std::string> known, std::vector<std::string>& issues)
      : name_(std::move(name)), issues_(issues) {
    if (auto child = root.get_child_optional(name_)) tree_ = &*child;
    if (!tree_) return;
    for (const auto& [key, value] : *tree_) {
      if (!value.empty()) issues_.push_back(name_ + "." + key + ": nested keys are not supported");
      if (!known.count(key)) issues_.push_back(name_ + "." + key + ": unknown key");
    }
  }

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return strip(*v);
  }

  template <class T, class F>
  void read(const std::string& key, T& target, F convert) const {
    auto v = raw(key);
    if (!v) return;
    try {
      target = convert(*v);
    } catch (const std::exception& e) {
      issues_.push_back(name_ + "." + key + ": " + e.what());
    }
  }

 private:
  std::string name_;
  std::vector<std::string>& issues_;
  const pt::ptree* tree_ = nullptr;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues) : Error(join(issues)), issues_(std::move(issues)) {}

double parse_real(const std::string& text) {
  const std::string s = strip(text);
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || !std::isfinite(v))
      throw DomainError("expected a number, got '" + s + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return number(s);
  const double den = number(strip(s.substr(slash + 1)));
  if (den == 0.0) throw DomainError("zero denominator in '" + s + "'");
  return number(strip(s.substr(0, slash))) / den;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({"syntax error on line " + std::to_string(e.line()) + ": " + e.message()});
  }

  std::vector<std::string> issues;
  const std::set<std::string> sections{"experiment", "cost", "graph", "schedule", "nonlinearity", "run", "oracle"};
  for (const auto& [key, value] : root) {
    if (value.empty())
      issues.push_back(key + ": keys must live inside a section");
    else if (!sections.count(key))
      issues.push_back(key + ": unknown section");
  }

  ExperimentConfig cfg;
  auto path_in = [&](const std::string& s) {
    std::filesystem::path p(s);
    return p.is_absolute() ? p : base_dir / p;
  };
  auto as_string = [](const std::string& s) { return s; };
  auto as_int = [](const std::string& s) { return static_cast<int>(parse_int(s)); };

  Section exp(root, "experiment", {"name", "output_dir"}, issues);
  exp.read("name", cfg.name, as_string);
  exp.read("output_dir", cfg.output_dir, path_in);

  Section cost(root, "cost",
               {"kind", "samples_per_node", "coef_seed", "amplitude", "params_file", "images", "labels", "digits",
                "total", "lambda", "partition_seed"},
               issues);
  if (!cost.present()) issues.push_back("cost: section is required");
  cost.read("kind", cfg.cost, [](const std::string& s) {
    if (s == "academic") return CostKind::academic;
    if (s == "mnist") return CostKind::mnist;
    throw DomainError("expected academic or mnist, got '" + s + "'");
  });
  cost.read("samples_per_node", cfg.academic.samples_per_node, as_int);
  cost.read("coef_seed", cfg.academic.coef_seed, parse_seed);
  cost.read("amplitude", cfg.academic.amplitude, parse_real);
  if (auto v = cost.raw("params_file")) cfg.academic.params_file = path_in(*v);
  cost.read("images", cfg.mnist.images, path_in);
  cost.read("labels", cfg.mnist.labels, path_in);
  cost.read("digits", cfg.mnist, [&](const std::string& s) {
    auto m = cfg.mnist;
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("expected two digits 'd1,d2', got '" + s + "'");
    m.digit_neg = static_cast<int>(parse_int(strip(s.substr(0, comma))));
    m.digit_pos = static_cast<int>(parse_int(strip(s.substr(comma + 1))));
    return m;
  });
  cost.read("total", cfg.mnist.total, as_int);
  cost.read("lambda", cfg.mnist.lambda, parse_real);
  cost.read("partition_seed", cfg.mnist.partition_seed, parse_seed);

  Section graph(root, "graph", {"kind", "n", "radius", "p", "scale", "seed"}, issues);
  graph.read("kind", cfg.graph.kind, [](const std::string& s) { return parse_graph_kind(s); });
  graph.read("n", cfg.graph.n, as_int);
  graph.read("radius", cfg.graph.radius, parse_real);
  graph.read("p", cfg.graph.p, parse_real);
  graph.read("scale", cfg.graph.scale, parse_real);

  Section sched(root, "schedule", {"period", "mode", "seed", "independent_b"}, issues);
  sched.read("period", cfg.schedule.period, parse_int);
  sched.read("mode", cfg.schedule.mode, [](const std::string& s) { return parse_switch_mode(s); });
  sched.read("independent_b", cfg.independent_b, parse_bool);

  Section nl(root, "nonlinearity", {"kind", "rho"}, issues);
  nl.read("kind", cfg.nonlinearity, [](const std::string& s) { return parse_nonlinearity_kind(s); });
  nl.read("rho", cfg.rho, parse_real);

  Section run(root, "run",
              {"iterations", "stride", "seed", "alpha", "safety", "gap_tolerance", "lambda2_samples"}, issues);
  run.read("iterations", cfg.iterations, parse_int);
  run.read("stride", cfg.stride, parse_int);
  run.read("seed", cfg.seed, parse_seed);
  run.read("alpha", cfg.alpha, [](const std::string& s) -> std::optional<double> {
    if (s == "auto") return std::nullopt;
    return parse_real(s);
  });
  run.read("safety", cfg.safety, parse_real);
  run.read("gap_tolerance", cfg.gap_tolerance, parse_real);
  run.read("lambda2_samples", cfg.lambda2_samples, as_int);

  // Graph and schedule seeds default to the run seed.
  cfg.graph.seed = cfg.seed;
  cfg.schedule.seed = cfg.seed;
  graph.read("seed", cfg.graph.seed, parse_seed);
  sched.read("seed", cfg.schedule.seed, parse_seed);

  Section oracle(root, "oracle", {"tol", "max_iter"}, issues);
  oracle.read("tol", cfg.oracle_tol, parse_real);
  oracle.read("max_iter", cfg.oracle_max_iter, parse_int);

  if (!issues.empty()) throw ConfigError(std::move(issues));
  validate_config(cfg);
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) issues.push_back(what);
  };

  check(!cfg.name.empty() && cfg.name.find_first_of("/\\") == std::string::npos,
        "experiment.name: must be a non-empty file stem");

  const int n = cfg.graph.n;
  check(n >= 2, "graph.n: need at least 2 nodes");
  if (cfg.graph.kind == GraphKind::exponential)
    check(n >= 2 && (n & (n - 1)) == 0, "graph.n: exponential graphs need a power of two");
  if (cfg.graph.kind == GraphKind::geometric)
    check(cfg.graph.radius > 0.0 && cfg.graph.radius <= std::sqrt(2.0), "graph.radius: must lie in (0, sqrt 2]");
  if (cfg.graph.kind == GraphKind::erdos_renyi) check(cfg.graph.p > 0.0 && cfg.graph.p <= 1.0, "graph.p: must lie in (0, 1]");
  check(cfg.graph.scale > 0.0 && cfg.graph.scale < 1.0, "graph.scale: must lie in (0, 1)");
  check(cfg.schedule.period >= 0, "schedule.period: must be >= 0 (0 = static)");
  if (cfg.schedule.mode == SwitchMode::resample)
    check(cfg.graph.kind != GraphKind::exponential, "schedule.mode: resample needs a random graph family");

  if (cfg.nonlinearity == NonlinearityKind::identity)
    check(cfg.rho == 0.0, "nonlinearity.rho: not used by the identity link");
  else
    check(cfg.rho > 0.0, "nonlinearity.rho: must be positive");

  check(cfg.iterations >= 0, "run.iterations: must be >= 0");
  check(cfg.stride >= 1, "run.stride: must be >= 1");
  if (cfg.alpha) check(*cfg.alpha > 0.0, "run.alpha: must be positive or 'auto'");
  check(cfg.safety > 0.0 && cfg.safety <= 1.0, "run.safety: must lie in (0, 1]");
  check(cfg.gap_tolerance >= 0.0, "run.gap_tolerance: must be >= 0");
  check(cfg.lambda2_samples >= 1, "run.lambda2_samples: must be >= 1");
  check(cfg.oracle_tol >= 0.0, "oracle.tol: must be >= 0");
  check(cfg.oracle_max_iter >= 1, "oracle.max_iter: must be >= 1");

  if (cfg.cost == CostKind::academic) {
    check(cfg.academic.samples_per_node >= 1, "cost.samples_per_node: must be >= 1");
    check(n * cfg.academic.samples_per_node >= 2, "cost.samples_per_node: need n * m >= 2");
    check(cfg.academic.amplitude > 0.1, "cost.amplitude: must exceed 0.1");
    if (cfg.academic.params_file)
      check(std::filesystem::exists(*cfg.academic.params_file),
            "cost.params_file: '" + cfg.academic.params_file->string() + "' does not exist");
  } else {
    const auto& m = cfg.mnist;
    check(!m.images.empty(), "cost.images: required for mnist");
    check(!m.labels.empty(), "cost.labels: required for mnist");
    if (!m.images.empty())
      check(std::filesystem::exists(m.images), "cost.images: '" + m.images.string() + "' does not exist");
    if (!m.labels.empty())
      check(std::filesystem::exists(m.labels), "cost.labels: '" + m.labels.string() + "' does not exist");
    check(m.digit_neg != m.digit_pos && m.digit_neg >= 0 && m.digit_neg <= 9 && m.digit_pos >= 0 &&
              m.digit_pos <= 9,
          "cost.digits: need two distinct digits in 0..9");
    check(m.total >= n && n >= 1 && m.total % n == 0, "cost.total: must be a positive multiple of graph.n");
    check(m.lambda > 0.0, "cost.lambda: must be positive (strong convexity)");
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  return cfg;
}

}  // namespace qtrack
