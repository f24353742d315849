#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/errors.hpp"
#include "mnlmix/experiments.hpp"
#include "mnlmix/identify.hpp"
#include "mnlmix/io.hpp"
#include "mnlmix/learn.hpp"

using namespace mnlmix;

namespace {

// Exit codes. Identify: 0 unique, 2 non-unique, 3 collapse. Learn: 0 ok (warnings
// included), 4..7 for the fatal statuses. 1 runtime error, 64 usage error.
constexpr int kExitError = 1;
constexpr int kExitUsage = 64;

int learn_exit_code(const LearnReport& r) {
  if (r.has(status::kKViolation)) return 4;
  if (r.has(status::kOracleInconsistent)) return 5;
  if (r.has(status::kDegenerateInstance)) return 6;
  if (r.has(status::kTooNoisy)) return 7;
  return 0;
}

constexpr const char* kModelNames =
    "Named instances:\n"
    "  counterexample  lambda=2, a=(2/5,2/5,1/10,1/10), b=(3/10,3/10,1/5,1/5); its pair system\n"
    "                  has the second solution (5/19,5/19,7/19,7/19)\n"
    "  three-roots     lambda=5, (a1,a2,b1,b2)=(0.0389099,0.000870832,0.0565171,0.943483) with\n"
    "                  third coordinates 1 - sum; emitted as a 3-item oracle table\n"
    "  witness3        a 3-item model with two admissible solutions (searched from --seed)\n";

struct Common {
  std::optional<double> lambda;
  std::optional<double> mu;
  std::uint64_t seed = 0;
  int n = 4;
  int jobs = 1;
  std::string out = "-";

  double resolved_lambda(double fallback) const {
    if (mu) return lambda_from_mu(*mu);
    return lambda.value_or(fallback);
  }
};

void add_lambda(CLI::App* app, Common& c) {
  auto* l = app->add_option("--lambda", c.lambda, "Mixing parameter lambda > 0");
  auto* m = app->add_option("--mu", c.mu, "Mixing weight mu = 1/(1+lambda)");
  l->excludes(m);
}

void add_seed(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed")->envname("MNLMIX_DEFAULT_SEED");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError("not a number: " + tok);
    }
  }
  return out;
}

std::vector<Slate> parse_slates(const std::vector<std::string>& specs, int n) {
  std::vector<Slate> out;
  for (const std::string& spec : specs) {
    if (spec == "all") {
      for (const Slate& s : all_slates(n)) out.push_back(s);
    } else if (spec == "full") {
      out.push_back(full_slate(n));
    } else {
      std::vector<int> items;
      for (double v : parse_list(spec)) items.push_back(static_cast<int>(v) - 1);
      out.push_back(make_slate(items, n, 2));
    }
  }
  return out;
}

struct LoadedModel {
  MixtureModel model;
  std::optional<RationalMixtureModel> exact;
};

LoadedModel load_model(const std::string& file, const std::string& name, bool exact, const Common& c) {
  LoadedModel lm;
  if (!file.empty()) {
    const json j = read_json_file(file);
    if (exact || model_json_is_exact(j)) {
      lm.exact = rational_model_from_json(j);
      lm.model = to_double(*lm.exact);
    } else {
      lm.model = model_from_json(j);
    }
  } else if (name == "counterexample") {
    lm.exact = counterexample_model();
    lm.model = to_double(*lm.exact);
  } else if (name == "witness3") {
    const auto w = find_nonidentifiable_3item(c.resolved_lambda(2), c.seed);
    if (!w) throw DegenerateInstanceError("no 3-item witness found for this seed");
    lm.model = *w;
  } else if (name.empty()) {
    lm.model = random_instance(c.n, c.resolved_lambda(2), c.seed);
  } else {
    throw InputError("named instance " + name + " is not a model");
  }
  return lm;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiability and learning for mixtures of two multinomial logits"};
  app.footer(std::string(kModelNames) +
             "Exit codes: 0 success/unique, 1 error, 2 non-unique, 3 collapse,\n"
             "  4 k-identifiability-violation, 5 oracle-inconsistent, 6 degenerate-instance,\n"
             "  7 sampling-too-noisy, 64 usage.");
  app.require_subcommand(1);

  Common c;
  std::string model_name;
  std::string model_file;
  bool exact = false;
  double tol = Tolerances{}.residual;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Write a model (or a sampled empirical table)");
  std::int64_t sim_samples = 0;
  std::vector<std::string> sim_slates;
  std::string sim_model_out;
  sim->add_option("--n", c.n, "Number of items")->check(CLI::Range(3, 1000));
  add_lambda(sim, c);
  add_seed(sim, c);
  sim->add_option("--model", model_name, "Named instance")
      ->check(CLI::IsMember({"counterexample", "three-roots", "witness3"}));
  sim->add_option("--samples", sim_samples, "Samples per slate; writes an empirical table")
      ->check(CLI::PositiveNumber);
  sim->add_option("--slate", sim_slates, "Slate to sample: 1-based list \"1,2,4\", \"full\" or \"all\"");
  sim->add_option("--model-out", sim_model_out, "With --samples, also write the model here");
  sim->add_option("--out", c.out, "Output path (- for stdout)");

  // identify
  auto* idf = app.add_subcommand("identify", "Check identifiability of a model");
  idf->add_option("file", model_file, "Model JSON file")->check(CLI::ExistingFile);
  idf->add_option("--model", model_name, "Named instance")->check(CLI::IsMember({"counterexample", "witness3"}));
  idf->add_option("--n", c.n, "Items of a random model when no file is given")->check(CLI::Range(3, 12));
  add_lambda(idf, c);
  add_seed(idf, c);
  idf->add_option("--tol", tol, "Residual tolerance for accepting a solution")->check(CLI::PositiveNumber);
  idf->add_flag("--exact", exact, "Read the model as exact rationals and solve exactly where possible");
  idf->add_option("--out", c.out, "Output path (- for stdout)");

  // learn
  auto* lrn = app.add_subcommand("learn", "Recover (a, b) from oracle queries or samples");
  std::string mode = "oracle";
  LearnConfig cfg;
  lrn->add_option("file", model_file, "Model JSON file")->check(CLI::ExistingFile);
  lrn->add_option("--model", model_name, "Named instance")->check(CLI::IsMember({"counterexample", "witness3"}));
  lrn->add_option("--mode", mode, "oracle or samples")->check(CLI::IsMember({"oracle", "samples"}));
  lrn->add_option("--n", c.n, "Items of a random model when no file is given")->check(CLI::Range(3, 1000));
  add_lambda(lrn, c);
  add_seed(lrn, c);
  lrn->add_option("--k", cfg.k, "Block size (>= 3)")->check(CLI::Range(3, 16));
  lrn->add_option("--eps", cfg.eps, "Target accuracy; sets the default sample count")->check(CLI::Range(1e-6, 0.2));
  lrn->add_option("--samples", cfg.samples_per_slate, "Samples per queried slate (0: ceil(8 n^3 / eps^2))")
      ->check(CLI::NonNegativeNumber);
  lrn->add_option("--tol", tol, "Residual tolerance for accepting a solution")->check(CLI::PositiveNumber);
  lrn->add_option("--out", c.out, "Output path (- for stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment");
  std::string kind;
  int restarts = 500;
  int trials = 100;
  int refine = 0;
  int grid_points = 10;
  std::int64_t n0 = 10000;
  std::string lambda_grid = "2,5";
  std::string eps_grid = "0.1,0.05,0.025";
  std::vector<std::string> starts;
  std::string dump_prefix;
  bool csv = false;
  exp->add_option("kind", kind, "Experiment kind")
      ->required()
      ->check(CLI::IsMember({"discriminant-max", "three-roots", "counterexample", "identifiability-sweep",
                             "sample-complexity", "lambda-threshold"}));
  exp->add_option("--n", c.n, "Number of items")->check(CLI::Range(3, 1000));
  add_lambda(exp, c);
  add_seed(exp, c);
  exp->add_option("--restarts", restarts, "Restarts per lambda")->check(CLI::PositiveNumber);
  exp->add_option("--trials", trials, "Trials")->check(CLI::NonNegativeNumber);
  exp->add_option("--eps", eps_grid, "Comma-separated eps grid (sample-complexity)");
  exp->add_option("--grid", lambda_grid, "Comma-separated ascending lambda grid (lambda-threshold)");
  exp->add_option("--refine", refine, "Bisection steps inside the sign-change bracket")
      ->check(CLI::NonNegativeNumber);
  exp->add_option("--n0", n0, "First point of the doubling sample grid")->check(CLI::PositiveNumber);
  exp->add_option("--grid-points", grid_points, "Points on the doubling sample grid")->check(CLI::Range(1, 40));
  exp->add_option("--start", starts, "Extra start \"a1,a2,b1,b2\" or \"three-roots\" (discriminant-max)");
  exp->add_option("--dump-prefix", dump_prefix, "Write each sweep counterexample to <prefix><seed>.json");
  exp->add_flag("--csv", csv, "Sample-complexity output as CSV");
  exp->add_flag("--exact", exact, "Also run the exact-rational path (three-roots, counterexample)");
  exp->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_option("--out", c.out, "Output path (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      if (model_name == "three-roots") {
        const ThreeRootsInstance inst = three_roots_instance();
        write_text(c.out, dump(oracle_to_json(formal_three_item_oracle(inst.lambda, inst.point))));
        return 0;
      }
      if (!model_name.empty() && sim_samples > 0 && model_name != "witness3" && model_name != "counterexample")
        throw InputError("cannot sample from " + model_name);
      const LoadedModel lm = load_model("", model_name, false, c);
      const json model_json = lm.exact ? model_to_json(*lm.exact) : model_to_json(lm.model);
      if (sim_samples == 0) {
        if (!sim_slates.empty()) throw InputError("--slate needs --samples");
        write_text(c.out, dump(model_json));
        return 0;
      }
      if (sim_slates.empty()) sim_slates.push_back("full");
      std::vector<EmpiricalRow> rows;
      for (const Slate& s : parse_slates(sim_slates, lm.model.n()))
        rows.push_back(sample_empirical(lm.model, s, sim_samples, c.seed));
      if (!sim_model_out.empty()) write_text(sim_model_out, dump(model_json));
      write_text(c.out, dump(empirical_to_json(rows, lm.model.n(), lm.model.lambda)));
      return 0;
    }

    if (idf->parsed()) {
      IdentifyOptions opts;
      opts.tol.residual = tol;
      const LoadedModel lm = load_model(model_file, model_name, exact, c);
      const IdentifiabilityReport rep =
          exact && lm.exact ? check_identifiability(*lm.exact, opts) : check_identifiability(lm.model, opts);
      write_text(c.out, dump(report_to_json(rep)));
      return rep.exit_code();
    }

    if (lrn->parsed()) {
      cfg.seed = c.seed;
      cfg.tol.residual = tol;
      const LoadedModel lm = load_model(model_file, model_name, false, c);
      const LearnReport rep = mode == "oracle" ? learn_from_oracle(lm.model, cfg) : learn_from_samples(lm.model, cfg);
      write_text(c.out, dump(learn_report_to_json(rep)));
      std::cerr << "queries " << rep.queries << " (block " << rep.block_queries << ", extension "
                << rep.extension_queries << "), samples " << rep.samples << ", max_rel_error ";
      if (rep.max_rel_error) {
        std::cerr << *rep.max_rel_error << '\n';
      } else {
        std::cerr << "n/a\n";
      }
      return learn_exit_code(rep);
    }

    if (exp->parsed()) {
      if (kind == "discriminant-max") {
        std::vector<std::array<double, 4>> extra;
        for (const std::string& s : starts) {
          if (s == "three-roots") {
            extra.push_back(three_roots_instance().point);
            continue;
          }
          const std::vector<double> v = parse_list(s);
          if (v.size() != 4) throw InputError("--start needs four values");
          extra.push_back({v[0], v[1], v[2], v[3]});
        }
        const auto rep = experiment_discriminant_max(c.resolved_lambda(2), restarts, c.seed, extra, c.jobs);
        write_text(c.out, dump(to_json(rep)));
      } else if (kind == "three-roots") {
        write_text(c.out, dump(to_json(run_three_roots(exact))));
      } else if (kind == "counterexample") {
        write_text(c.out, dump(to_json(run_counterexample(exact))));
      } else if (kind == "identifiability-sweep") {
        const auto rep = experiment_identifiability_sweep(c.n, c.resolved_lambda(2), trials, c.seed, c.jobs);
        if (!dump_prefix.empty())
          for (std::size_t i = 0; i < rep.counterexamples.size(); ++i)
            write_text(dump_prefix + std::to_string(rep.non_unique_seeds[i]) + ".json",
                       dump(model_to_json(rep.counterexamples[i])));
        write_text(c.out, dump(to_json(rep)));
      } else if (kind == "sample-complexity") {
        const auto rep = experiment_sample_complexity(exp->count("--n") ? c.n : 6,
                                                      c.resolved_lambda(2), parse_list(eps_grid), trials, c.seed,
                                                      n0, grid_points, c.jobs);
        write_text(c.out, csv ? rep.to_csv() : dump(to_json(rep)));
      } else if (kind == "lambda-threshold") {
        const auto rep = experiment_lambda_threshold(parse_list(lambda_grid), restarts, c.seed, refine, c.jobs);
        write_text(c.out, dump(to_json(rep)));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "mnlmix: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "mnlmix: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
