// Copyright 2026 The ROAR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "roar/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "roar/cost.hpp"
#include "roar/datagen.hpp"
#include "roar/error.hpp"
#include "roar/harness.hpp"
#include "roar/io.hpp"
#include "roar/model_io.hpp"
#include "roar/parallel.hpp"
#include "roar/random.hpp"
#include "roar/recourse.hpp"
#include "roar/theory.hpp"

namespace roar::cli {

namespace {

namespace fs = std::filesystem;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + " is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// generate-data

struct GenerateOptions {
  std::uint64_t seed = 0;
  std::size_t n = 1000;
  double alpha = 0.0;
  double beta = 0.0;
  double class1_prob = 0.5;
  int pfc_comparisons = 0;
  fs::path out_dir;
};

void generate_data(const GenerateOptions& o, RunManifest& manifest) {
  const SyntheticDataSpec base;
  const ShiftSpec shift{o.alpha, o.beta};
  const Dataset d1 = generate_synthetic(o.n, base.class0, base.class1, derive_seed(o.seed, 1), o.class1_prob);
  const Dataset d2 = generate_synthetic(o.n, apply_shift(base.class0, shift), base.class1,
                                        derive_seed(o.seed, 2), o.class1_prob);
  DatasetSchema schema;
  for (const auto& name : d1.feature_names) schema.features.push_back({name});
  schema.label = "label";
  manifest.set_config({{"n", o.n},
                       {"alpha", o.alpha},
                       {"beta", o.beta},
                       {"class1_prob", o.class1_prob},
                       {"pfc_comparisons", o.pfc_comparisons}});
  manifest.set_seeds({o.seed});
  manifest.write_artifact(o.out_dir / "d1.csv", dataset_to_csv(d1));
  manifest.write_artifact(o.out_dir / "d2.csv", dataset_to_csv(d2));
  manifest.write_artifact(o.out_dir / "schema.json", dump(schema.to_json()));
  if (o.pfc_comparisons > 0) {
    const auto comparisons = simulate_comparisons(static_cast<int>(d1.dim()), o.pfc_comparisons,
                                                  derive_seed(o.seed, 5));
    manifest.write_artifact(o.out_dir / "comparisons.csv", comparisons_to_csv(comparisons));
  }
  manifest.write(o.out_dir / "manifest.json");
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  fs::path data, schema, out;
  std::string model = "lr";
  std::vector<int> layers{50, 100, 200};
  TrainingConfig training;
};

void train(const TrainOptions& o, RunManifest& manifest) {
  const DatasetSchema schema = load_schema(o.schema);
  const Dataset data = load_csv(o.data, schema);
  Model model;
  if (o.model == "lr") {
    model = train_logistic(data, o.training);
  } else if (o.model == "mlp") {
    model = train_mlp(data, o.training, o.layers);
  } else {
    throw DataError("unknown model '" + o.model + "'");
  }
  manifest.set_config({{"data", o.data.string()},
                       {"schema", o.schema.string()},
                       {"model", o.model},
                       {"layers", o.layers},
                       {"learning_rate", o.training.learning_rate},
                       {"epochs", o.training.epochs},
                       {"batch_size", o.training.batch_size},
                       {"train_accuracy", accuracy(model, data)}});
  manifest.set_seeds({o.training.seed});
  manifest.write_artifact(o.out, dump(model_to_json(model)));
  manifest.write(fs::path(o.out.string() + ".manifest.json"));
}

// ---------------------------------------------------------------------------
// recourse

struct RecourseOptions {
  fs::path model, data, schema, out;
  std::optional<fs::path> comparisons;
  std::string method = "roar";
  std::string cost = "l1";
  std::string norm = "l2";
  double lambda = 0.1;
  double delta_max = 0.1;
  double learning_rate = 0.01;
  int max_iterations = 1000;
  double grid_step = 0.1;
  double max_change = 5.0;
  std::size_t limit = 0;
  std::uint64_t seed = 0;
};

void recourse(const RecourseOptions& o, RunManifest& manifest) {
  const Model model = load_model(o.model);
  const DatasetSchema schema = load_schema(o.schema);
  const Dataset data = load_csv(o.data, schema);
  if (data.dim() != input_dim(model)) throw DataError("model and data dimensions differ");
  const Method method = method_from_string(o.method);
  const bool linear = std::holds_alternative<LinearModel>(model);
  if (!linear && (method == Method::kRoar || method == Method::kAr)) {
    throw DataError(o.method + " needs a linear model; use " + o.method + "_lime");
  }

  CostModel cost_model = CostModel::l1();
  if (o.cost == "pfc") {
    const auto comparisons =
        o.comparisons ? read_comparisons_csv(*o.comparisons, static_cast<int>(data.dim()))
                      : simulate_comparisons(static_cast<int>(data.dim()), 200, derive_seed(o.seed, 5));
    cost_model = fit_bradley_terry(comparisons);
  } else if (o.cost != "l1") {
    throw DataError("unknown cost '" + o.cost + "'");
  }

  RecourseConfig config;
  config.lambda = o.lambda;
  config.learning_rate = o.learning_rate;
  config.max_iterations = o.max_iterations;
  config.record_trace = false;
  config.actionability = schema.actionability(schema.standardizer ? &*schema.standardizer : nullptr);
  if (o.norm == "box") {
    config.delta_set = PerturbationSet::box(-o.delta_max, o.delta_max);
  } else if (o.norm == "l1" || o.norm == "l2" || o.norm == "linf") {
    const double p = o.norm == "l1" ? 1.0 : o.norm == "l2" ? 2.0 : std::numeric_limits<double>::infinity();
    config.delta_set = PerturbationSet::norm_ball(p, o.delta_max);
  } else {
    throw DataError("unknown norm '" + o.norm + "'");
  }
  try {
    config.validate(data.dim());
  } catch (const Error& e) {
    throw DataError(e.what());
  }
  ArGridConfig grid;
  grid.grid_step = o.grid_step;
  grid.max_change = o.max_change;
  SurrogateConfig surrogate;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (o.limit != 0 && rows.size() >= o.limit) break;
    if (predict_label(model, data.row(i)) == 0) rows.push_back(i);
  }
  std::vector<nlohmann::json> records(rows.size());
  parallel_for(rows.size(), Execution::kParallel, [&](std::size_t k) {
    const FeatureVector x = data.row(rows[k]);
    nlohmann::json rec;
    try {
      RecourseResult r;
      SurrogateConfig local = surrogate;
      local.seed = derive_seed(o.seed, rows[k]);
      switch (method) {
        case Method::kCfe: r = cfe(model, x, cost_model, config); break;
        case Method::kRoar: r = roar(std::get<LinearModel>(model), x, cost_model, config); break;
        case Method::kAr:
          r = ar_grid(std::get<LinearModel>(model), x, cost_model, config.actionability, grid);
          break;
        case Method::kRoarLime: r = roar_lime(model, x, cost_model, config, local); break;
        case Method::kArLime: r = ar_lime(model, x, cost_model, config.actionability, grid, local); break;
      }
      rec = recourse_to_json(r);
    } catch (const Error& e) {
      rec = {{"x", to_std(x)}, {"error", e.what()}};
    }
    rec["index"] = rows[k];
    records[k] = std::move(rec);
  });
  std::string lines;
  for (const auto& r : records) lines += r.dump() + "\n";

  manifest.set_config({{"model", o.model.string()},
                       {"data", o.data.string()},
                       {"schema", o.schema.string()},
                       {"method", o.method},
                       {"cost", o.cost},
                       {"norm", o.norm},
                       {"lambda", o.lambda},
                       {"delta_max", o.delta_max},
                       {"learning_rate", o.learning_rate},
                       {"max_iterations", o.max_iterations},
                       {"grid_step", o.grid_step},
                       {"max_change", o.max_change},
                       {"limit", o.limit}});
  manifest.set_seeds({o.seed});
  manifest.write_artifact(o.out, lines);
  manifest.write(fs::path(o.out.string() + ".manifest.json"));
}

// ---------------------------------------------------------------------------
// evaluate / sweep

struct SpecOptions {
  fs::path spec;
  fs::path out_dir;
  std::optional<double> delta_max;
  std::optional<std::string> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> folds;
  bool instances = true;
};

ExperimentSpec load_with_overrides(const SpecOptions& o) {
  if (!fs::exists(o.spec)) throw DataError("experiment spec not found: " + o.spec.string());
  nlohmann::json j = read_json(o.spec);
  if (o.delta_max) j["delta_max"] = *o.delta_max;
  if (o.lambda) {
    if (*o.lambda == "auto") {
      j["lambda"] = "auto";
    } else {
      try {
        j["lambda"] = std::stod(*o.lambda);
      } catch (const std::exception&) {
        throw DataError("--lambda must be a number or 'auto'");
      }
    }
  }
  if (o.seed) j["seeds"] = {*o.seed};
  if (o.folds) j["folds"] = *o.folds;
  return ExperimentSpec::from_json(j, o.spec.parent_path());
}

void evaluate(const SpecOptions& o, RunManifest& manifest) {
  const ExperimentSpec spec = load_with_overrides(o);
  const EvaluationReport report = run_shift_experiment(spec);
  manifest.set_config(spec.to_json());
  manifest.set_seeds(spec.seeds);
  manifest.write_artifact(o.out_dir / "report.json", dump(report.to_json(o.instances)));
  manifest.write(o.out_dir / "manifest.json");
}

void run_sweep(const SpecOptions& o, RunManifest& manifest) {
  const ExperimentSpec spec = load_with_overrides(o);
  if (spec.sweep.empty()) throw DataError("experiment spec has no sweep grid");
  const auto points = sweep(spec, spec.sweep);
  nlohmann::json all = nlohmann::json::array();
  for (const auto& p : points) {
    all.push_back({{"alpha", p.shift.alpha},
                   {"beta", p.shift.beta},
                   {"report", p.report.to_json(o.instances)}});
  }
  manifest.set_config(spec.to_json());
  manifest.set_seeds(spec.seeds);
  manifest.write_artifact(o.out_dir / "sweep.json", dump(all));
  manifest.write_artifact(o.out_dir / "plotdata.csv", sweep_plot_csv(points));
  manifest.write(o.out_dir / "manifest.json");
}

// ---------------------------------------------------------------------------
// verify-theory

struct TheoryOptions {
  std::string cases = "default";
  fs::path out;
  long long samples = 1000000;
  std::uint64_t seed = 0;
};

struct NamedInput {
  std::string name;
  GaussianTheoryInput input;
};

std::vector<NamedInput> default_gaussian_cases(std::uint64_t seed) {
  std::vector<NamedInput> cases;
  cases.push_back({"worked", GaussianTheoryInput(Eigen::Vector2d(1, 0), Eigen::Vector2d(-2, 0),
                                                 Eigen::Vector2d(1, 0), Eigen::Matrix2d::Identity())});
  Rng rng(derive_seed(seed, 0x77));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index d = 1 + k % 4;
    auto draw = [&](Eigen::Index n) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
      return v;
    };
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) a.col(i) = draw(d);
    Eigen::MatrixXd sigma = a * a.transpose() / static_cast<double>(d) +
                            0.2 * Eigen::MatrixXd::Identity(d, d);
    sigma = 0.5 * (sigma + sigma.transpose());
    const Eigen::VectorXd w = draw(d);
    const Eigen::VectorXd delta = draw(d);
    const Eigen::VectorXd mu = draw(d);
    cases.push_back({"random_" + std::to_string(k), GaussianTheoryInput(w, delta, mu, sigma)});
  }
  return cases;
}

std::vector<std::pair<std::string, RemarkCase>> default_remark_cases() {
  CategoricalRemark cat;
  cat.weights = Eigen::Vector3d(0.2, 0.6, 0.9);
  cat.tau = 0.5;
  cat.shift = Eigen::Vector3d(0.0, -0.2, 0.0);
  return {{"bernoulli", BernoulliRemark{0.5, 0.5, 0.3}},
          {"uniform", UniformRemark{0.0, 1.0, 0.5, 0.3}},
          {"categorical", cat}};
}

nlohmann::json remark_params(const RemarkCase& remark) {
  return std::visit(
      [](const auto& r) -> nlohmann::json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BernoulliRemark>) {
          return {{"kind", "bernoulli"}, {"p", r.p}, {"tau", r.tau}, {"shift", r.shift}};
        } else if constexpr (std::is_same_v<T, UniformRemark>) {
          return {{"kind", "uniform"}, {"a", r.a}, {"b", r.b}, {"tau", r.tau}, {"shift", r.shift}};
        } else {
          return {{"kind", "categorical"}, {"weights", to_std(r.weights)}, {"tau", r.tau},
                  {"shift", to_std(r.shift)}};
        }
      },
      remark);
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void load_cases(const fs::path& path, std::vector<NamedInput>& gaussian,
                std::vector<std::pair<std::string, RemarkCase>>& remarks) {
  const nlohmann::json j = read_json(path);
  try {
    int k = 0;
    for (const auto& c : j.value("gaussian", nlohmann::json::array())) {
      const Eigen::VectorXd w = json_vector(c.at("w"));
      const auto rows = c.at("sigma").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd sigma(static_cast<Eigen::Index>(rows.size()), w.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != w.size()) throw DataError("sigma row length mismatch");
        for (Eigen::Index col = 0; col < w.size(); ++col) {
          sigma(static_cast<Eigen::Index>(r), col) = rows[r][static_cast<std::size_t>(col)];
        }
      }
      gaussian.push_back({c.value("name", "case_" + std::to_string(k++)),
                          GaussianTheoryInput(w, json_vector(c.at("delta")), json_vector(c.at("mu")), sigma)});
    }
    for (const auto& r : j.value("remarks", nlohmann::json::array())) {
      const std::string kind = r.at("kind").get<std::string>();
      if (kind == "bernoulli") {
        remarks.push_back({kind, BernoulliRemark{r.at("p"), r.at("tau"), r.at("shift")}});
      } else if (kind == "uniform") {
        remarks.push_back({kind, UniformRemark{r.at("a"), r.at("b"), r.at("tau"), r.at("shift")}});
      } else if (kind == "categorical") {
        CategoricalRemark cat;
        cat.weights = json_vector(r.at("weights"));
        cat.tau = r.at("tau");
        cat.shift = json_vector(r.at("shift"));
        remarks.push_back({kind, cat});
      } else {
        throw DataError("unknown remark kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed theory cases: " + std::string(e.what()));
  } catch (const Error& e) {
    throw DataError(e.what());
  }
}

void verify_theory(const TheoryOptions& o, RunManifest& manifest) {
  if (o.samples < 1) throw DataError("--samples must be >= 1");
  std::vector<NamedInput> gaussian;
  std::vector<std::pair<std::string, RemarkCase>> remarks;
  if (o.cases == "default") {
    gaussian = default_gaussian_cases(o.seed);
    remarks = default_remark_cases();
  } else {
    load_cases(o.cases, gaussian, remarks);
  }
  nlohmann::json cases = nlohmann::json::array();
  for (std::size_t k = 0; k < gaussian.size(); ++k) {
    const auto& [name, input] = gaussian[k];
    BoundaryConstants c;
    try {
      c = boundary_constants(input);
    } catch (const Error& e) {
      throw DataError("case " + name + ": " + e.what());
    }
    const auto mc = monte_carlo_invalidation(input, o.samples, derive_seed(o.seed, 1000 + k));
    const auto bound = theorem1_lower_bound(input);
    nlohmann::json entry = {{"name", name},
                            {"dim", input.dim()},
                            {"c1", c.c1},
                            {"c2", c.c2},
                            {"exact", exact_invalidation_probability(input)},
                            {"region_probability", region_probability(input)},
                            {"mc_estimate", mc.estimate},
                            {"mc_se", mc.standard_error},
                            {"applicable", bound.applicable}};
    entry["bound"] = bound.applicable ? nlohmann::json(bound.value) : nlohmann::json(nullptr);
    entry["bound_beta"] = bound.applicable ? nlohmann::json(bound.beta) : nlohmann::json(nullptr);
    cases.push_back(entry);
  }
  nlohmann::json remark_out = nlohmann::json::array();
  for (std::size_t k = 0; k < remarks.size(); ++k) {
    const auto& remark = remarks[k].second;
    double closed;
    try {
      closed = remark_invalidation(remark);
    } catch (const Error& e) {
      throw DataError("remark " + remarks[k].first + ": " + e.what());
    }
    const auto mc = remark_monte_carlo(remark, o.samples, derive_seed(o.seed, 2000 + k));
    nlohmann::json entry = remark_params(remark);
    entry["closed_form"] = closed;
    entry["mc_estimate"] = mc.estimate;
    entry["mc_se"] = mc.standard_error;
    remark_out.push_back(entry);
  }
  const nlohmann::json report = {{"samples", o.samples}, {"seed", o.seed}, {"cases", cases},
                                 {"remarks", remark_out}};
  manifest.set_config({{"cases", o.cases}, {"samples", o.samples}});
  manifest.set_seeds({o.seed});
  manifest.write_artifact(o.out, dump(report));
  manifest.write(fs::path(o.out.string() + ".manifest.json"));
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kData: return kDataOrConfig;
    case ErrorKind::kNumerical:
    case ErrorKind::kNoRecourse: return kNumerical;
  }
  return kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust algorithmic recourse under model shifts", "roar"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker cap for parallel kernels (default: ROAR_JOBS or all cores)")
      ->check(CLI::NonNegativeNumber);

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate-data", "Write synthetic D1/D2 CSVs and a schema");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--n", gen.n, "Samples per dataset")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "Mean shift of class 0 along feature 0")->capture_default_str();
  gen_cmd->add_option("--beta", gen.beta, "Variance inflation of class 0")->capture_default_str();
  gen_cmd->add_option("--class1-prob", gen.class1_prob, "P(y = 1)")->capture_default_str();
  gen_cmd->add_option("--pfc-comparisons", gen.pfc_comparisons,
                      "Also write simulated pairwise comparisons with this many per pair");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a CSV dataset");
  train_cmd->add_option("--data", tr.data, "CSV dataset")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--schema", tr.schema, "Schema JSON sidecar")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", tr.out, "Model JSON output")->required();
  train_cmd->add_option("--seed", tr.training.seed, "RNG seed")->required();
  train_cmd->add_option("--model", tr.model, "lr or mlp")->capture_default_str();
  train_cmd->add_option("--layers", tr.layers, "Hidden layer sizes for mlp")->delimiter(',');
  train_cmd->add_option("--learning-rate", tr.training.learning_rate)->capture_default_str();
  train_cmd->add_option("--epochs", tr.training.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", tr.training.batch_size)->capture_default_str();

  RecourseOptions rc;
  auto* rec_cmd = app.add_subcommand("recourse", "Generate recourse for negatively classified rows");
  rec_cmd->add_option("--model", rc.model, "Model JSON")->required()->check(CLI::ExistingFile);
  rec_cmd->add_option("--data", rc.data, "CSV dataset")->required()->check(CLI::ExistingFile);
  rec_cmd->add_option("--schema", rc.schema, "Schema JSON sidecar")->required()->check(CLI::ExistingFile);
  rec_cmd->add_option("--out", rc.out, "JSON-lines output")->required();
  rec_cmd->add_option("--seed", rc.seed, "RNG seed (surrogate sampling, simulated comparisons)")->required();
  rec_cmd->add_option("--method", rc.method, "cfe, roar, ar, roar_lime or ar_lime")->capture_default_str();
  rec_cmd->add_option("--cost", rc.cost, "l1 or pfc")->capture_default_str();
  rec_cmd->add_option("--comparisons", rc.comparisons, "Pairwise comparison CSV for pfc");
  rec_cmd->add_option("--norm", rc.norm, "Shift set: l1, l2, linf or box")->capture_default_str();
  rec_cmd->add_option("--lambda", rc.lambda)->capture_default_str();
  rec_cmd->add_option("--delta-max", rc.delta_max)->capture_default_str();
  rec_cmd->add_option("--learning-rate", rc.learning_rate)->capture_default_str();
  rec_cmd->add_option("--max-iterations", rc.max_iterations)->capture_default_str();
  rec_cmd->add_option("--grid-step", rc.grid_step)->capture_default_str();
  rec_cmd->add_option("--max-change", rc.max_change)->capture_default_str();
  rec_cmd->add_option("--limit", rc.limit, "At most this many instances (0 = all)");

  SpecOptions ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run a cross-validated shift experiment");
  SpecOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment per shift grid point");
  for (auto [cmd, opts] : {std::pair{eval_cmd, &ev}, std::pair{sweep_cmd, &sw}}) {
    cmd->add_option("--spec", opts->spec, "Experiment spec JSON")->required();
    cmd->add_option("--out-dir", opts->out_dir, "Output directory")->required();
    cmd->add_option("--delta-max", opts->delta_max, "Override delta_max");
    cmd->add_option("--lambda", opts->lambda, "Override lambda (number or auto)");
    cmd->add_option("--seed", opts->seed, "Replace the spec's seeds with this one");
    cmd->add_option("--folds", opts->folds, "Override the fold count");
    cmd->add_flag("!--no-instances", opts->instances, "Omit per-instance records");
  }

  TheoryOptions th;
  auto* theory_cmd = app.add_subcommand("verify-theory", "Closed forms versus Monte Carlo");
  theory_cmd->add_option("--cases", th.cases, "'default' or a cases JSON file")->capture_default_str();
  theory_cmd->add_option("--out", th.out, "Report JSON")->required();
  theory_cmd->add_option("--samples", th.samples, "Monte Carlo samples per case")->capture_default_str();
  theory_cmd->add_option("--seed", th.seed, "RNG seed")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (jobs == 0) {
    if (const char* env = std::getenv("ROAR_JOBS")) {
      try {
        jobs = std::stoi(env);
      } catch (const std::exception&) {
        err << "roar: ROAR_JOBS must be an integer\n";
        return kUsage;
      }
      if (jobs < 0) {
        err << "roar: ROAR_JOBS must be >= 0\n";
        return kUsage;
      }
    }
  }
  set_worker_count(jobs);

  RunManifest manifest(app.get_subcommands().front()->get_name(),
                       std::vector<std::string>(args.begin(), args.end()));
  try {
    if (*gen_cmd) generate_data(gen, manifest);
    else if (*train_cmd) train(tr, manifest);
    else if (*rec_cmd) recourse(rc, manifest);
    else if (*eval_cmd) evaluate(ev, manifest);
    else if (*sweep_cmd) run_sweep(sw, manifest);
    else if (*theory_cmd) verify_theory(th, manifest);
  } catch (const Error& e) {
    err << "roar: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "roar: " << e.what() << "\n";
    return kDataOrConfig;
  } catch (const std::exception& e) {
    err << "roar: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace roar::cli
