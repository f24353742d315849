#include "mnlmix/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

namespace mnlmix {
namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json one_based(const std::vector<int>& items) {
  json j = json::array();
  for (int i : items) j.push_back(i + 1);
  return j;
}

std::vector<int> zero_based(const json& j) {
  std::vector<int> out;
  for (const auto& v : j) out.push_back(v.get<int>() - 1);
  return out;
}

Rational rational_of(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParameterError("expected a number or rational string");
}

double double_of(const json& v) {
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  return v.get<double>();
}

void check_size(const json& j, std::size_t n) {
  if (!j.contains("a") || !j.contains("b")) throw ParameterError("model file needs a and b");
  if (j["a"].size() != n || j["b"].size() != n) throw ParameterError("model file: a and b must have n entries");
}

json candidate_json(const CandidateSolution<double>& c) {
  json j;
  j["items"] = one_based(c.items);
  j["a"] = c.a;
  j["b"] = c.b;
  j["residual"] = number_or_null(c.residual);
  j["admissible"] = c.admissible;
  j["degenerate"] = c.degenerate;
  if (c.exact_root) j["exact"] = true;
  return j;
}

json candidate_json(const CandidateSolution<Rational>& c) {
  json j;
  j["items"] = one_based(c.items);
  j["a"] = json::array();
  j["b"] = json::array();
  for (const auto& v : c.a) j["a"].push_back(format_rational(v));
  for (const auto& v : c.b) j["b"].push_back(format_rational(v));
  j["residual"] = number_or_null(c.residual);
  j["admissible"] = c.admissible;
  j["degenerate"] = c.degenerate;
  j["exact"] = c.exact_root;
  return j;
}

}  // namespace

json model_to_json(const MixtureModel& model) {
  json j;
  j["schema"] = kModelSchema;
  j["n"] = model.n();
  j["lambda"] = model.lambda;
  j["a"] = model.a;
  j["b"] = model.b;
  return j;
}

json model_to_json(const RationalMixtureModel& model) {
  json j;
  j["schema"] = kModelSchema;
  j["n"] = model.n();
  j["lambda"] = format_rational(model.lambda);
  j["a"] = json::array();
  j["b"] = json::array();
  for (const auto& v : model.a) j["a"].push_back(format_rational(v));
  for (const auto& v : model.b) j["b"].push_back(format_rational(v));
  return j;
}

MixtureModel model_from_json(const json& j) {
  MixtureModel m;
  const std::size_t n = j.at("n").get<std::size_t>();
  check_size(j, n);
  m.lambda = double_of(j.at("lambda"));
  for (const auto& v : j["a"]) m.a.push_back(double_of(v));
  for (const auto& v : j["b"]) m.b.push_back(double_of(v));
  validate_model(m);
  return m;
}

RationalMixtureModel rational_model_from_json(const json& j) {
  RationalMixtureModel m;
  const std::size_t n = j.at("n").get<std::size_t>();
  check_size(j, n);
  m.lambda = rational_of(j.at("lambda"));
  for (const auto& v : j["a"]) m.a.push_back(rational_of(v));
  for (const auto& v : j["b"]) m.b.push_back(rational_of(v));
  validate_model(m);
  return m;
}

bool model_json_is_exact(const json& j) {
  if (!j.contains("a")) return false;
  for (const auto& v : j["a"])
    if (!v.is_string()) return false;
  return true;
}

json oracle_to_json(const OracleTable& table) {
  json j;
  j["schema"] = kOracleSchema;
  j["n"] = table.n();
  j["lambda"] = table.lambda();
  j["slates"] = json::array();
  for (const auto& [slate, row] : table.entries()) j["slates"].push_back({{"items", one_based(slate)}, {"C", row}});
  return j;
}

OracleTable oracle_from_json(const json& j) {
  OracleTable t(j.at("n").get<int>(), double_of(j.at("lambda")));
  for (const auto& s : j.at("slates")) {
    const Slate slate = make_slate(zero_based(s.at("items")), t.n(), 2);
    std::vector<double> row;
    for (const auto& v : s.at("C")) row.push_back(double_of(v));
    if (row.size() != slate.size()) throw ParameterError("oracle row length does not match slate");
    t.set(slate, row);
  }
  return t;
}

json empirical_to_json(const std::vector<EmpiricalRow>& rows, int n, double lambda) {
  json j;
  j["schema"] = kEmpiricalSchema;
  j["n"] = n;
  j["lambda"] = lambda;
  j["slates"] = json::array();
  for (const auto& row : rows)
    j["slates"].push_back({{"items", one_based(row.slate)},
                           {"samples", row.samples},
                           {"seed", row.seed},
                           {"counts", row.counts},
                           {"C", row.C}});
  return j;
}

json report_to_json(const IdentifiabilityReport& report) {
  json j;
  j["schema"] = kReportSchema;
  j["unique"] = report.unique;
  j["pair_level_unique"] = report.pair_level_unique;
  j["collapse"] = report.collapse;
  j["swap_note"] = report.swap_note;
  j["solutions"] = json::array();
  for (const auto& c : report.solutions) j["solutions"].push_back(candidate_json(c));
  j["pair_solutions"] = json::array();
  for (const auto& c : report.pair_solutions) j["pair_solutions"].push_back(candidate_json(c));
  j["gates"] = json::array();
  for (const auto& g : report.gates) {
    json gj;
    gj["kind"] = g.kind == GateKind::kCross ? "cross" : "pair-slate";
    gj["j"] = g.j + 1;
    if (g.kind == GateKind::kCross) gj["k"] = g.k + 1;
    gj["value"] = number_or_null(g.value);
    j["gates"].push_back(gj);
  }
  j["codes"] = report.codes;
  j["exit_code"] = report.exit_code();
  return j;
}

json learn_report_to_json(const LearnReport& report) {
  json j;
  j["schema"] = kLearnSchema;
  j["a_hat"] = report.a_hat;
  j["b_hat"] = report.b_hat;
  j["queries"] = report.queries;
  j["block_queries"] = report.block_queries;
  j["extension_queries"] = report.extension_queries;
  j["distinct_slates"] = report.distinct_slates;
  j["samples"] = report.samples;
  j["samples_per_slate"] = report.samples_per_slate;
  j["max_rel_error"] = report.max_rel_error ? number_or_null(*report.max_rel_error) : json(nullptr);
  j["status"] = report.status;
  return j;
}

json to_json(const DiscriminantMaxReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "discriminant-max";
  j["lambda"] = r.lambda;
  j["best"] = number_or_null(r.best);
  j["argmax"] = r.argmax;
  j["evaluations"] = r.evaluations;
  j["start_values"] = json::array();
  for (double v : r.start_values) j["start_values"].push_back(number_or_null(v));
  j["restart_values"] = json::array();
  for (double v : r.restart_values) j["restart_values"].push_back(number_or_null(v));
  return j;
}

json to_json(const LambdaThresholdReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "lambda-threshold";
  j["lambdas"] = r.lambdas;
  j["best_values"] = json::array();
  j["signs"] = json::array();
  for (double v : r.best_values) j["best_values"].push_back(number_or_null(v));
  for (int s : r.signs) j["signs"].push_back(s > 0 ? "+" : (s < 0 ? "-" : "0"));
  j["sign_tolerance"] = kSignTolerance;
  j["bracket"] = r.bracket ? json::array({r.bracket->first, r.bracket->second}) : json(nullptr);
  return j;
}

json to_json(const SweepReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "identifiability-sweep";
  j["n"] = r.n;
  j["lambda"] = r.lambda;
  j["trials"] = r.trials;
  j["unique"] = r.unique;
  j["non_unique_full"] = r.non_unique_full;
  j["non_unique_pair"] = r.non_unique_pair;
  j["collapse"] = r.collapse;
  if (!r.min_gates.empty()) {
    std::vector<double> g;
    for (double v : r.min_gates)
      if (std::isfinite(v)) g.push_back(v);
    std::sort(g.begin(), g.end());
    if (!g.empty()) {
      j["min_gate"] = {{"min", g.front()}, {"median", g[g.size() / 2]}, {"max", g.back()}};
      // Decade histogram of the per-instance minimum gate.
      std::map<int, int> hist;
      for (double v : g) hist[v > 0 ? static_cast<int>(std::floor(std::log10(v))) : -400]++;
      json h = json::object();
      for (const auto& [dec, count] : hist) h["1e" + std::to_string(dec)] = count;
      j["min_gate_histogram"] = h;
    }
  }
  j["non_unique_seeds"] = r.non_unique_seeds;
  j["counterexamples"] = json::array();
  for (const auto& m : r.counterexamples) j["counterexamples"].push_back(model_to_json(m));
  return j;
}

json to_json(const SampleComplexityReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "sample-complexity";
  j["n"] = r.n;
  j["lambda"] = r.lambda;
  j["trials"] = r.trials;
  j["grid"] = r.grid;
  j["rows"] = json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"eps", row.eps}, {"n_star", row.n_star ? json(*row.n_star) : json(nullptr)}});
  j["slope"] = r.slope ? number_or_null(*r.slope) : json(nullptr);
  return j;
}

json to_json(const ThreeRootsReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "three-roots";
  j["lambda"] = r.lambda;
  j["point"] = r.point;
  j["cubic"] = r.cubic;
  j["real_roots"] = r.real_roots;
  j["discriminant"] = number_or_null(r.discriminant);
  if (r.exact_real_roots >= 0) {
    j["exact_real_roots"] = r.exact_real_roots;
    j["exact_discriminant_sign"] = r.exact_discriminant_sign;
  }
  j["consistent"] = r.consistent;
  return j;
}

json to_json(const CounterexampleReport& r) {
  json j;
  j["schema"] = kExperimentSchema;
  j["kind"] = "counterexample";
  j["double_candidates"] = json::array();
  for (const auto& c : r.double_candidates) j["double_candidates"].push_back(candidate_json(c));
  if (!r.exact_candidates.empty()) {
    j["exact_candidates"] = json::array();
    for (const auto& c : r.exact_candidates) j["exact_candidates"].push_back(candidate_json(c));
    j["max_mode_gap"] = r.max_mode_gap;
  }
  j["consistent"] = r.consistent;
  j["identify"] = report_to_json(r.identify);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace mnlmix
