#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mnlmix/errors.hpp"
#include "mnlmix/experiments.hpp"
#include "mnlmix/identify.hpp"
#include "mnlmix/io.hpp"
#include "mnlmix/learn.hpp"
#include "mnlmix/polyalg.hpp"

namespace py = pybind11;
using namespace mnlmix;

namespace {

// Models cross the boundary as JSON text; exact inputs keep their rationals.
std::string dump(const json& j) { return j.dump(); }

std::vector<Slate> resolve_slates(int n, const std::vector<std::vector<int>>& slates) {
  if (slates.empty()) return all_slates(n);
  std::vector<Slate> out;
  for (const auto& s : slates) {
    std::vector<int> zero;
    for (int i : s) zero.push_back(i - 1);
    out.push_back(make_slate(zero, n));
  }
  return out;
}

std::string identify(const std::string& model, bool exact) {
  const json j = json::parse(model);
  if (exact || model_json_is_exact(j)) return dump(report_to_json(check_identifiability(rational_model_from_json(j))));
  return dump(report_to_json(check_identifiability(model_from_json(j))));
}

std::string learn(const std::string& model, const std::string& mode, int k, double eps, std::int64_t samples,
                  std::uint64_t seed) {
  const MixtureModel m = model_from_json(json::parse(model));
  LearnConfig cfg;
  cfg.k = k;
  cfg.eps = eps;
  cfg.samples_per_slate = samples;
  cfg.seed = seed;
  if (mode == "oracle") return dump(learn_report_to_json(learn_from_oracle(m, cfg)));
  if (mode == "samples") return dump(learn_report_to_json(learn_from_samples(m, cfg)));
  throw ParameterError("mode must be oracle or samples");
}

std::string oracle(const std::string& model, const std::vector<std::vector<int>>& slates) {
  const MixtureModel m = model_from_json(json::parse(model));
  return dump(oracle_to_json(oracle_table(m, resolve_slates(m.n(), slates))));
}

std::string sample(const std::string& model, const std::vector<std::vector<int>>& slates, std::int64_t samples,
                   std::uint64_t seed) {
  const MixtureModel m = model_from_json(json::parse(model));
  std::vector<EmpiricalRow> rows;
  for (const Slate& s : resolve_slates(m.n(), slates)) rows.push_back(sample_empirical(m, s, samples, seed));
  return dump(empirical_to_json(rows, m.n(), m.lambda));
}

std::vector<std::complex<double>> roots(const std::vector<double>& coeffs) {
  return solve_polynomial(Polynomial<double>(coeffs)).roots;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mixtures of two multinomial logits: identifiability and learning";
  py::register_exception<Error>(m, "MnlmixError", PyExc_ValueError);

  m.def("random_instance", [](int n, double lambda, std::uint64_t seed) {
    return dump(model_to_json(random_instance(n, lambda, seed)));
  }, py::arg("n"), py::arg("lam"), py::arg("seed"));
  m.def("counterexample", [] { return dump(model_to_json(counterexample_model())); });
  m.def("oracle", &oracle, py::arg("model"), py::arg("slates") = std::vector<std::vector<int>>{});
  m.def("sample", &sample, py::arg("model"), py::arg("slates"), py::arg("samples"), py::arg("seed"));
  m.def("identify", &identify, py::arg("model"), py::arg("exact") = false);
  m.def("learn", &learn, py::arg("model"), py::arg("mode") = "oracle", py::arg("k") = 4, py::arg("eps") = 0.05,
        py::arg("samples") = 0, py::arg("seed") = 0);
  m.def("query_offset", &query_offset, py::arg("k"));
  m.def("solve_polynomial", &roots, py::arg("coeffs"));

  m.def("three_roots", [](bool exact) { return dump(to_json(run_three_roots(exact))); }, py::arg("exact") = false);
  m.def("counterexample_report", [](bool exact) { return dump(to_json(run_counterexample(exact))); },
        py::arg("exact") = false);
  m.def("discriminant_max", [](double lambda, int restarts, std::uint64_t seed) {
    return dump(to_json(experiment_discriminant_max(lambda, restarts, seed)));
  }, py::arg("lam"), py::arg("restarts"), py::arg("seed"));
  m.def("lambda_threshold", [](const std::vector<double>& grid, int restarts, std::uint64_t seed, int refine) {
    return dump(to_json(experiment_lambda_threshold(grid, restarts, seed, refine)));
  }, py::arg("grid"), py::arg("restarts"), py::arg("seed"), py::arg("refine") = 0);
  m.def("identifiability_sweep", [](int n, double lambda, int trials, std::uint64_t seed) {
    return dump(to_json(experiment_identifiability_sweep(n, lambda, trials, seed)));
  }, py::arg("n"), py::arg("lam"), py::arg("trials"), py::arg("seed"));
  m.def("sample_complexity", [](int n, double lambda, const std::vector<double>& eps, int trials,
                                std::uint64_t seed, std::int64_t n0, int grid_points) {
    return dump(to_json(experiment_sample_complexity(n, lambda, eps, trials, seed, n0, grid_points)));
  }, py::arg("n"), py::arg("lam"), py::arg("eps"), py::arg("trials"), py::arg("seed"), py::arg("n0") = 10000,
     py::arg("grid_points") = 10);
}
