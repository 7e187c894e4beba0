#include <filesystem>
#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qtrack/config.hpp"
#include "qtrack/costs.hpp"
#include "qtrack/engine.hpp"
#include "qtrack/experiment.hpp"
#include "qtrack/graph.hpp"
#include "qtrack/quantize.hpp"

namespace py = pybind11;
using namespace qtrack;

namespace {

py::dict trace_to_dict(const ExperimentResult& r) {
  const auto& recs = r.trace.records;
  const auto n = static_cast<Eigen::Index>(recs.size());
  Eigen::VectorXd k(n), gap(n), cons(n), track(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i) = static_cast<double>(recs[i].k);
    gap(i) = recs[i].gap;
    cons(i) = recs[i].consensus_err;
    track(i) = recs[i].tracking_residual;
  }
  const auto& s = r.trace.summary;
  py::dict d;
  d["k"] = k;
  d["gap"] = gap;
  d["consensus_err"] = cons;
  d["tracking_residual"] = track;
  d["alpha"] = s.alpha;
  d["alpha_bar"] = s.alpha_bar;
  d["lambda2"] = s.lambda2;
  d["L"] = s.smoothness;
  d["K_upper"] = s.k_upper ? py::cast(*s.k_upper) : py::none();
  d["iterations"] = s.iterations;
  d["final_gap"] = s.final_gap;
  d["x_bar"] = s.final_x_bar;
  d["max_conservation_residual"] = s.max_conservation_residual;
  d["max_tracking_residual"] = s.max_tracking_residual;
  d["f_star"] = r.trace.oracle ? py::cast(r.trace.oracle->f_star) : py::none();
  d["accuracy"] = r.accuracy ? py::cast(*r.accuracy) : py::none();
  return d;
}

WeightedDigraph edge_list_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gradient tracking over weight-balanced switching digraphs with quantized links";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("quantize_log", &quantize_log, py::arg("z"), py::arg("rho"));
  m.def("quantize_uniform", &quantize_uniform, py::arg("z"), py::arg("rho"));
  m.def("step_size_bound", &step_size_bound, py::arg("lambda2_a"), py::arg("lambda2_b"),
        py::arg("smoothness"), py::arg("k_upper"));

  m.def(
      "edge_list_lambda2", [](const std::string& text) { return algebraic_connectivity(edge_list_from_string(text)); },
      py::arg("text"), "|Re lambda_2| of the Laplacian of an edge list in the CLI text format.");
  m.def(
      "exponential_edge_list",
      [](int n, double scale) {
        std::ostringstream out;
        write_edge_list(out, assign_weights(gen_exponential(n), scale));
        return out.str();
      },
      py::arg("n"), py::arg("scale") = 0.5);

  m.def(
      "validate", [](const std::filesystem::path& path) { load_config(path); }, py::arg("config"),
      "Raises ValueError listing every problem in the config.");

  m.def(
      "run",
      [](const std::filesystem::path& path, std::optional<std::int64_t> iterations, bool write) {
        auto cfg = load_config(path);
        if (iterations) cfg.iterations = *iterations;
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
          if (write) write_outputs(cfg, r.trace, r.accuracy);
        }
        return trace_to_dict(r);
      },
      py::arg("config"), py::arg("iterations") = py::none(), py::arg("write") = false,
      "Runs an experiment config and returns its trace as arrays.");

  m.def(
      "academic_value_grad",
      [](int n, int m, std::uint64_t seed, double x) {
        const AcademicCost c(academic_generate(n, m, seed));
        Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
        const Eigen::VectorXd g = c.global_gradient(xv);
        return py::make_tuple(c.global_value(xv), g(0));
      },
      py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("x"),
      "Global value and derivative of the seeded scalar benchmark.");

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      std::string msg;
      for (const auto& s : e.issues()) msg += s + "\n";
      PyErr_SetString(PyExc_ValueError, msg.c_str());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
}
