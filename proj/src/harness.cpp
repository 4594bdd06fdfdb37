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

#include "roar/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "roar/error.hpp"
#include "roar/random.hpp"
#include "roar/theory.hpp"

namespace roar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kCfe: return "cfe";
    case Method::kRoar: return "roar";
    case Method::kAr: return "ar";
    case Method::kRoarLime: return "roar_lime";
    case Method::kArLime: return "ar_lime";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "cfe") return Method::kCfe;
  if (name == "roar") return Method::kRoar;
  if (name == "ar") return Method::kAr;
  if (name == "roar_lime") return Method::kRoarLime;
  if (name == "ar_lime") return Method::kArLime;
  throw DataError("unknown method '" + name + "'");
}

// ---------------------------------------------------------------------------
// Experiment spec

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw DataError("experiment spec needs at least one seed");
  if (methods.empty()) throw DataError("experiment spec lists no methods");
  if (folds < 2) throw DataError("folds must be >= 2");
  if (lambda && !(*lambda > 0.0)) throw DataError("lambda must be > 0");
  if (!lambda && lambda_grid.empty()) throw DataError("lambda grid is empty");
  for (double l : lambda_grid) {
    if (!(l > 0.0)) throw DataError("lambda grid values must be > 0");
  }
  if (delta_max_auto) {
    if (delta_max_grid.empty()) throw DataError("delta_max grid is empty");
    for (double r : delta_max_grid) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw DataError("delta_max grid values must be finite and >= 0");
    }
  }
  if (pfc_comparisons_per_pair < 1) throw DataError("comparisons per pair must be >= 1");
  try {
    delta_set.validate();
    training.validate();
    if (const auto* syn = std::get_if<SyntheticDataSpec>(&data)) {
      if (syn->n < static_cast<std::size_t>(2 * folds)) throw DataError("too few samples for the folds");
      syn->class0.validate();
      syn->class1.validate();
      syn->shift.validate();
    }
  } catch (const Error& e) {
    throw DataError(e.what());
  }
  if (model == ModelFamily::kMlp) {
    for (Method m : methods) {
      if (m == Method::kRoar || m == Method::kAr) {
        throw DataError(to_string(m) + " needs a linear model; use " + to_string(m) + "_lime");
      }
    }
  }
}

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// A scalar s means s * I; otherwise a nested row list.
Eigen::MatrixXd covariance_from_json(const nlohmann::json& j, Eigen::Index d) {
  if (j.is_number()) return j.get<double>() * Eigen::MatrixXd::Identity(d, d);
  const auto rows = j.get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != d) throw DataError("covariance row length mismatch");
    for (Eigen::Index c = 0; c < d; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  }
  return m;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

PerturbationSet delta_set_from_json(const nlohmann::json& norm, double delta_max) {
  if (norm.is_number()) return PerturbationSet::norm_ball(norm.get<double>(), delta_max);
  const auto name = norm.get<std::string>();
  if (name == "l2") return PerturbationSet::norm_ball(2.0, delta_max);
  if (name == "l1") return PerturbationSet::norm_ball(1.0, delta_max);
  if (name == "linf") return PerturbationSet::norm_ball(std::numeric_limits<double>::infinity(), delta_max);
  if (name == "box") return PerturbationSet::box(-delta_max, delta_max);
  throw DataError("unknown norm '" + name + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  try {
    const auto& data = j.at("data");
    if (data.contains("synthetic")) {
      const auto& s = data.at("synthetic");
      SyntheticDataSpec syn;
      syn.n = s.value("n", syn.n);
      if (s.contains("mu0")) syn.class0.mean = vector_from_json(s.at("mu0"));
      if (s.contains("mu1")) syn.class1.mean = vector_from_json(s.at("mu1"));
      const Eigen::Index d = syn.class0.mean.size();
      syn.class0.covariance = covariance_from_json(s.value("sigma0", s.value("sigma", nlohmann::json(0.5))), d);
      syn.class1.covariance = covariance_from_json(
          s.value("sigma1", s.value("sigma", nlohmann::json(0.5))), syn.class1.mean.size());
      syn.class1_prob = s.value("class1_prob", syn.class1_prob);
      if (s.contains("shift")) {
        syn.shift.alpha = s.at("shift").value("alpha", 0.0);
        syn.shift.beta = s.at("shift").value("beta", 0.0);
      }
      spec.data = syn;
      spec.standardize = j.value("standardize", false);
    } else if (data.contains("csv")) {
      const auto& c = data.at("csv");
      spec.data = CsvDataSpec{resolve(base_dir, c.at("d1").get<std::string>()),
                              resolve(base_dir, c.at("d2").get<std::string>()),
                              resolve(base_dir, c.at("schema").get<std::string>())};
      spec.standardize = j.value("standardize", true);
    } else {
      throw DataError("data must contain 'synthetic' or 'csv'");
    }

    const std::string model = j.value("model", "lr");
    if (model == "lr") spec.model = ModelFamily::kLogistic;
    else if (model == "mlp") spec.model = ModelFamily::kMlp;
    else throw DataError("unknown model '" + model + "'");

    if (j.contains("training")) {
      const auto& t = j.at("training");
      spec.training.learning_rate = t.value("learning_rate", spec.training.learning_rate);
      spec.training.epochs = t.value("epochs", spec.training.epochs);
      spec.training.batch_size = t.value("batch_size", spec.training.batch_size);
      if (t.contains("hidden_layers")) spec.hidden_layers = t.at("hidden_layers").get<std::vector<int>>();
    }
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) spec.methods.push_back(method_from_string(m.get<std::string>()));
    }
    const std::string cost = j.value("cost", "l1");
    if (cost == "l1") spec.cost = CostKind::kL1;
    else if (cost == "pfc") spec.cost = CostKind::kPfc;
    else throw DataError("unknown cost '" + cost + "'");
    if (j.contains("pfc")) {
      const auto& p = j.at("pfc");
      spec.pfc_comparisons_per_pair = p.value("comparisons_per_pair", spec.pfc_comparisons_per_pair);
      if (p.contains("path")) spec.pfc_path = resolve(base_dir, p.at("path").get<std::string>());
    }

    const nlohmann::json radius = j.value("delta_max", nlohmann::json(0.1));
    if (radius.is_string()) {
      if (radius.get<std::string>() != "auto") throw DataError("delta_max must be a number or \"auto\"");
      spec.delta_max_auto = true;
      if (j.contains("delta_max_grid")) spec.delta_max_grid = j.at("delta_max_grid").get<std::vector<double>>();
    }
    spec.delta_set = delta_set_from_json(j.value("norm", nlohmann::json("l2")),
                                         spec.delta_max_auto ? 0.1 : radius.get<double>());
    if (j.contains("lambda")) {
      const auto& l = j.at("lambda");
      if (l.is_string()) {
        if (l.get<std::string>() != "auto") throw DataError("lambda must be a number or \"auto\"");
        spec.lambda.reset();
      } else {
        spec.lambda = l.get<double>();
      }
    }
    if (j.contains("lambda_grid")) spec.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();

    if (j.contains("recourse")) {
      const auto& r = j.at("recourse");
      spec.recourse.learning_rate = r.value("learning_rate", spec.recourse.learning_rate);
      spec.recourse.max_iterations = r.value("max_iterations", spec.recourse.max_iterations);
      spec.recourse.tolerance = r.value("tolerance", spec.recourse.tolerance);
      const std::string opt = r.value("optimizer", "gd");
      if (opt == "gd") spec.recourse.optimizer = DescentOptimizer::kGradientDescent;
      else if (opt == "adam") spec.recourse.optimizer = DescentOptimizer::kAdam;
      else throw DataError("unknown optimizer '" + opt + "'");
      const std::string inner = r.value("inner_max", "closed_form");
      if (inner == "closed_form") spec.recourse.inner_max_mode = InnerMaxMode::kClosedForm;
      else if (inner == "projected_ascent") spec.recourse.inner_max_mode = InnerMaxMode::kProjectedAscent;
      else throw DataError("unknown inner_max mode '" + inner + "'");
    }
    spec.recourse.record_trace = false;
    if (j.contains("surrogate")) {
      const auto& s = j.at("surrogate");
      spec.surrogate.num_samples = s.value("num_samples", spec.surrogate.num_samples);
      spec.surrogate.scale = s.value("scale", spec.surrogate.scale);
      spec.surrogate.kernel_width = s.value("kernel_width", spec.surrogate.kernel_width);
      spec.surrogate.l2_penalty = s.value("l2_penalty", spec.surrogate.l2_penalty);
    }
    if (j.contains("ar")) {
      const auto& a = j.at("ar");
      spec.ar.grid_step = a.value("grid_step", spec.ar.grid_step);
      spec.ar.max_change = a.value("max_change", spec.ar.max_change);
      spec.ar.exact_dimension_limit = a.value("exact_dimension_limit", spec.ar.exact_dimension_limit);
    }
    spec.folds = j.value("folds", spec.folds);
    if (!j.contains("seeds")) throw DataError("experiment spec must list seeds");
    spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    spec.max_instances = j.value("max_instances", spec.max_instances);
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      const auto alphas = s.value("alpha", std::vector<double>{0.0});
      const auto betas = s.value("beta", std::vector<double>{0.0});
      for (double b : betas) {
        for (double a : alphas) spec.sweep.push_back({a, b});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed experiment spec: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kData) throw;
    throw DataError(e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j;
  if (const auto* syn = std::get_if<SyntheticDataSpec>(&data)) {
    j["data"]["synthetic"] = {{"n", syn->n},
                              {"mu0", vector_to_json(syn->class0.mean)},
                              {"mu1", vector_to_json(syn->class1.mean)},
                              {"sigma0", matrix_to_json(syn->class0.covariance)},
                              {"sigma1", matrix_to_json(syn->class1.covariance)},
                              {"class1_prob", syn->class1_prob},
                              {"shift", {{"alpha", syn->shift.alpha}, {"beta", syn->shift.beta}}}};
  } else {
    const auto& csv = std::get<CsvDataSpec>(data);
    j["data"]["csv"] = {{"d1", csv.d1.string()}, {"d2", csv.d2.string()}, {"schema", csv.schema.string()}};
  }
  j["standardize"] = standardize;
  j["model"] = model == ModelFamily::kLogistic ? "lr" : "mlp";
  j["training"] = {{"learning_rate", training.learning_rate},
                   {"epochs", training.epochs},
                   {"batch_size", training.batch_size},
                   {"hidden_layers", hidden_layers}};
  j["methods"] = nlohmann::json::array();
  for (Method m : methods) j["methods"].push_back(to_string(m));
  j["cost"] = cost == CostKind::kL1 ? "l1" : "pfc";
  j["pfc"] = {{"comparisons_per_pair", pfc_comparisons_per_pair}};
  if (pfc_path) j["pfc"]["path"] = pfc_path->string();
  if (delta_max_auto) {
    j["delta_max"] = "auto";
    j["delta_max_grid"] = delta_max_grid;
  } else {
    j["delta_max"] = delta_set.delta_max;
  }
  if (delta_set.kind == PerturbationSet::Kind::kBox) {
    j["norm"] = "box";
  } else if (std::isinf(delta_set.p)) {
    j["norm"] = "linf";
  } else {
    j["norm"] = delta_set.p;
  }
  if (lambda) j["lambda"] = *lambda;
  else j["lambda"] = "auto";
  j["lambda_grid"] = lambda_grid;
  j["recourse"] = {
      {"learning_rate", recourse.learning_rate},
      {"max_iterations", recourse.max_iterations},
      {"tolerance", recourse.tolerance},
      {"optimizer", recourse.optimizer == DescentOptimizer::kAdam ? "adam" : "gd"},
      {"inner_max", recourse.inner_max_mode == InnerMaxMode::kClosedForm ? "closed_form"
                                                                         : "projected_ascent"}};
  j["surrogate"] = {{"num_samples", surrogate.num_samples},
                    {"scale", surrogate.scale},
                    {"kernel_width", surrogate.kernel_width},
                    {"l2_penalty", surrogate.l2_penalty}};
  j["ar"] = {{"grid_step", ar.grid_step},
             {"max_change", ar.max_change},
             {"exact_dimension_limit", ar.exact_dimension_limit}};
  j["folds"] = folds;
  j["seeds"] = seeds;
  j["max_instances"] = max_instances;
  if (!sweep.empty()) {
    std::vector<double> alphas, betas;
    for (const auto& s : sweep) {
      if (std::find(alphas.begin(), alphas.end(), s.alpha) == alphas.end()) alphas.push_back(s.alpha);
      if (std::find(betas.begin(), betas.end(), s.beta) == betas.end()) betas.push_back(s.beta);
    }
    j["sweep"] = {{"alpha", alphas}, {"beta", betas}};
  }
  return j;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open experiment spec " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("experiment spec " + path.string() + " is not valid JSON: " + e.what());
  }
  return ExperimentSpec::from_json(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Metrics

double validity(std::span<const RecourseResult> results, const Model& model) {
  if (results.empty()) throw InvalidArgument("no recourses");
  std::size_t valid = 0;
  for (const auto& r : results) valid += predict_label(model, r.counterfactual) == 1;
  return static_cast<double>(valid) / static_cast<double>(results.size());
}

Summary avg_cost(std::span<const RecourseResult> results, const CostModel& cost_model) {
  if (results.empty()) throw InvalidArgument("no recourses");
  std::vector<double> costs;
  for (const auto& r : results) costs.push_back(cost_model.cost(r.original, r.counterfactual));
  const double n = static_cast<double>(costs.size());
  const double mean = std::accumulate(costs.begin(), costs.end(), 0.0) / n;
  double var = 0.0;
  for (double c : costs) var += (c - mean) * (c - mean);
  return {mean, std::sqrt(var / n)};
}

namespace {

Summary summarize(const std::vector<double>& values) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return {kNaN, kNaN};
  const double n = static_cast<double>(finite.size());
  const double mean = std::accumulate(finite.begin(), finite.end(), 0.0) / n;
  double var = 0.0;
  for (double v : finite) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

nlohmann::json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

struct Outcome {
  std::optional<RecourseResult> result;
  std::string error;
};

struct FoldContext {
  const Model* m1;
  const Model* m2;
  const CostModel* cost_model;
  ActionabilitySpec actionability;
  SurrogateConfig surrogate;
  std::uint64_t stream_seed;
};

RecourseResult generate(Method method, const FoldContext& ctx, const FeatureVector& x,
                        const RecourseConfig& config, const ArGridConfig& ar,
                        std::size_t instance) {
  SurrogateConfig surrogate = ctx.surrogate;
  surrogate.seed = derive_seed(ctx.stream_seed, instance);
  switch (method) {
    case Method::kCfe:
      return cfe(*ctx.m1, x, *ctx.cost_model, config);
    case Method::kRoar:
      return roar(std::get<LinearModel>(*ctx.m1), x, *ctx.cost_model, config);
    case Method::kAr:
      return ar_grid(std::get<LinearModel>(*ctx.m1), x, *ctx.cost_model, ctx.actionability, ar);
    case Method::kRoarLime:
      return roar_lime(*ctx.m1, x, *ctx.cost_model, config, surrogate);
    case Method::kArLime:
      return ar_lime(*ctx.m1, x, *ctx.cost_model, ctx.actionability, ar, surrogate);
  }
  throw InvalidArgument("unknown method");
}

std::vector<Outcome> run_method(Method method, const FoldContext& ctx,
                                const std::vector<FeatureVector>& instances,
                                const RecourseConfig& config, const ArGridConfig& ar,
                                Execution exec) {
  std::vector<Outcome> out(instances.size());
  parallel_for(instances.size(), exec, [&](std::size_t i) {
    try {
      out[i].result = generate(method, ctx, instances[i], config, ar, i);
    } catch (const Error& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

bool uses_lambda(Method m) { return m == Method::kCfe || m == Method::kRoar || m == Method::kRoarLime; }
bool uses_delta(Method m) { return m == Method::kRoar || m == Method::kRoarLime; }

PerturbationSet with_radius(const PerturbationSet& set, double radius) {
  if (set.kind == PerturbationSet::Kind::kBox) return PerturbationSet::box(-radius, radius);
  return PerturbationSet::norm_ball(set.p, radius);
}

long count_m1_valid(const std::vector<Outcome>& outcomes, const Model& m1) {
  long valid = 0;
  for (const auto& o : outcomes) valid += o.result && predict_label(m1, o.result->counterfactual) == 1;
  return valid;
}

Model train_model(const ExperimentSpec& spec, const Dataset& data, std::uint64_t seed) {
  TrainingConfig tc = spec.training;
  tc.seed = seed;
  if (spec.model == ModelFamily::kLogistic) return train_logistic(data, tc);
  return train_mlp(data, tc, spec.hidden_layers);
}

CostModel build_cost(const ExperimentSpec& spec, int dim, std::uint64_t seed) {
  if (spec.cost == CostKind::kL1) return CostModel::l1();
  const PairwiseComparisonSet comparisons =
      spec.pfc_path ? read_comparisons_csv(*spec.pfc_path, dim)
                    : simulate_comparisons(dim, spec.pfc_comparisons_per_pair, derive_seed(seed, 5));
  return fit_bradley_terry(comparisons);
}

}  // namespace

std::vector<double> MethodReport::m2_validity_per_seed() const {
  std::vector<std::uint64_t> order;
  for (const auto& f : folds) {
    if (std::find(order.begin(), order.end(), f.seed) == order.end()) order.push_back(f.seed);
  }
  std::vector<double> out;
  for (std::uint64_t s : order) {
    std::vector<double> vals;
    for (const auto& f : folds) {
      if (f.seed == s) vals.push_back(f.m2_validity);
    }
    out.push_back(summarize(vals).mean);
  }
  return out;
}

const MethodReport& EvaluationReport::method(Method m) const {
  for (const auto& r : methods) {
    if (r.method == m) return r;
  }
  throw InvalidArgument("method not in report: " + to_string(m));
}

nlohmann::json EvaluationReport::to_json(bool include_instances) const {
  nlohmann::json j;
  j["config"] = config;
  j["methods"] = nlohmann::json::object();
  for (const auto& r : methods) {
    nlohmann::json m;
    m["total"] = r.total;
    m["produced"] = r.produced;
    m["errored"] = r.errored;
    m["avg_cost"] = summary_json(r.cost);
    m["m1_validity"] = summary_json(r.m1_validity);
    m["m2_validity"] = summary_json(r.m2_validity);
    m["folds"] = nlohmann::json::array();
    for (const auto& f : r.folds) {
      m["folds"].push_back({{"seed", f.seed},
                            {"fold", f.fold},
                            {"lambda", f.lambda},
                            {"delta_max", f.delta_max},
                            {"total", f.total},
                            {"produced", f.produced},
                            {"errored", f.errored},
                            {"avg_cost", f.avg_cost},
                            {"m1_validity", f.m1_validity},
                            {"m2_validity", f.m2_validity}});
    }
    if (include_instances) {
      m["instances"] = nlohmann::json::array();
      for (const auto& i : r.instances) {
        nlohmann::json rec = {{"seed", i.seed},         {"fold", i.fold},
                              {"index", i.index},       {"produced", i.produced},
                              {"lambda", i.lambda},     {"cost", i.cost},
                              {"converged", i.converged}, {"iterations", i.iterations},
                              {"m1_valid", i.m1_valid}, {"m2_valid", i.m2_valid}};
        if (!i.error.empty()) rec["error"] = i.error;
        m["instances"].push_back(rec);
      }
    }
    j["methods"][to_string(r.method)] = m;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Experiment

EvaluationReport run_shift_experiment(const ExperimentSpec& spec, Execution exec) {
  spec.validate();
  EvaluationReport report;
  report.config = spec.to_json();
  for (Method m : spec.methods) {
    MethodReport mr;
    mr.method = m;
    report.methods.push_back(std::move(mr));
  }

  std::optional<Dataset> csv_d1, csv_d2;
  std::optional<DatasetSchema> schema;
  if (const auto* csv = std::get_if<CsvDataSpec>(&spec.data)) {
    schema = load_schema(csv->schema);
    schema->standardizer.reset();
    csv_d1 = load_csv(csv->d1, *schema);
    csv_d2 = load_csv(csv->d2, *schema);
  }

  for (std::uint64_t seed : spec.seeds) {
    Dataset d1, d2;
    if (const auto* syn = std::get_if<SyntheticDataSpec>(&spec.data)) {
      d1 = generate_synthetic(syn->n, syn->class0, syn->class1, derive_seed(seed, 1), syn->class1_prob);
      d2 = generate_synthetic(syn->n, apply_shift(syn->class0, syn->shift), syn->class1,
                              derive_seed(seed, 2), syn->class1_prob);
    } else {
      d1 = *csv_d1;
      d2 = *csv_d2;
    }
    if (d1.size() < static_cast<std::size_t>(spec.folds) || d2.size() < static_cast<std::size_t>(spec.folds)) {
      throw DataError("datasets are smaller than the number of folds");
    }
    if (d1.dim() != d2.dim()) throw DataError("D1 and D2 dimensions differ");
    const CostModel cost_model = build_cost(spec, static_cast<int>(d1.dim()), seed);
    const auto folds1 = kfold_split(d1.size(), spec.folds, derive_seed(seed, 3));
    const auto folds2 = kfold_split(d2.size(), spec.folds, derive_seed(seed, 4));

    for (int f = 0; f < spec.folds; ++f) {
      const auto fi = static_cast<std::size_t>(f);
      Dataset train1 = d1.subset(folds1[fi].train);
      Dataset hold = d1.subset(folds1[fi].holdout);
      Dataset train2 = d2.subset(folds2[fi].train);
      std::optional<Standardizer> scaler;
      if (spec.standardize) {
        scaler = Standardizer::fit(train1);
        train1 = scaler->apply(train1);
        hold = scaler->apply(hold);
        train2 = scaler->apply(train2);
      }
      const Model m1 = train_model(spec, train1, derive_seed(seed, 100 + fi));
      const Model m2 = train_model(spec, train2, derive_seed(seed, 200 + fi));

      FoldContext ctx{&m1, &m2, &cost_model, {}, spec.surrogate, derive_seed(seed, 300 + fi)};
      ctx.actionability = schema ? schema->actionability(scaler ? &*scaler : nullptr)
                                 : ActionabilitySpec::all_mutable(d1.dim());
      if (ctx.surrogate.feature_scale.size() == 0 && !spec.standardize) {
        ctx.surrogate.feature_scale = Standardizer::fit(train1).scale;
      }

      std::vector<FeatureVector> instances;
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < hold.size(); ++i) {
        if (spec.max_instances != 0 && instances.size() >= spec.max_instances) break;
        FeatureVector x = hold.row(i);
        if (predict_label(m1, x) == 0) {
          instances.push_back(std::move(x));
          rows.push_back(folds1[fi].holdout[i]);
        }
      }

      for (auto& mr : report.methods) {
        RecourseConfig config = spec.recourse;
        config.delta_set = spec.delta_set;
        config.actionability = ctx.actionability;
        config.record_trace = false;

        std::vector<double> lambdas;
        if (!uses_lambda(mr.method)) lambdas = {0.0};
        else if (spec.lambda) lambdas = {*spec.lambda};
        else lambdas = spec.lambda_grid;
        std::sort(lambdas.begin(), lambdas.end());

        // Runs the method for each value in ascending order and keeps the
        // largest value attaining the best M1 validity.
        std::vector<Outcome> chosen;
        auto select = [&](const std::vector<double>& values, auto&& apply) {
          double best_value = values.front();
          long best_valid = -1;
          for (double v : values) {
            apply(v);
            auto outcomes = run_method(mr.method, ctx, instances, config, spec.ar, exec);
            const long valid = count_m1_valid(outcomes, m1);
            if (valid >= best_valid) {
              best_valid = valid;
              chosen = std::move(outcomes);
              best_value = v;
            }
          }
          return best_value;
        };
        auto set_lambda = [&](double lambda) {
          if (lambda > 0.0) config.lambda = lambda;
        };
        auto set_radius = [&](double r) { config.delta_set = with_radius(spec.delta_set, r); };

        double chosen_delta = uses_delta(mr.method) ? spec.delta_set.delta_max : 0.0;
        double chosen_lambda = 0.0;
        if (uses_delta(mr.method) && spec.delta_max_auto) {
          // Lambda is picked on the unperturbed objective, then the radius at
          // that lambda, so the robust term cannot be traded for a cheaper
          // lambda once M1 validity saturates.
          std::vector<double> radii = spec.delta_max_grid;
          std::sort(radii.begin(), radii.end());
          set_radius(0.0);
          chosen_lambda = select(lambdas, set_lambda);
          set_lambda(chosen_lambda);
          chosen_delta = select(radii, set_radius);
        } else {
          chosen_lambda = select(lambdas, set_lambda);
        }

        FoldMetrics fm;
        fm.seed = seed;
        fm.fold = f;
        fm.lambda = chosen_lambda;
        fm.delta_max = chosen_delta;
        fm.total = static_cast<int>(instances.size());
        std::vector<RecourseResult> produced;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
          InstanceRecord rec;
          rec.seed = seed;
          rec.fold = f;
          rec.index = rows[i];
          rec.lambda = chosen_lambda;
          if (chosen[i].result) {
            const auto& r = *chosen[i].result;
            rec.produced = true;
            rec.cost = r.cost;
            rec.converged = r.converged;
            rec.iterations = r.iterations;
            rec.m1_valid = predict_label(m1, r.counterfactual) == 1;
            rec.m2_valid = predict_label(m2, r.counterfactual) == 1;
            produced.push_back(r);
          } else {
            rec.error = chosen[i].error;
          }
          mr.instances.push_back(std::move(rec));
        }
        fm.produced = static_cast<int>(produced.size());
        fm.errored = fm.total - fm.produced;
        if (produced.empty()) {
          fm.avg_cost = fm.m1_validity = fm.m2_validity = kNaN;
        } else {
          fm.avg_cost = avg_cost(produced, cost_model).mean;
          fm.m1_validity = validity(produced, m1);
          fm.m2_validity = validity(produced, m2);
        }
        mr.total += fm.total;
        mr.produced += fm.produced;
        mr.errored += fm.errored;
        mr.folds.push_back(fm);
      }
    }
  }

  for (auto& mr : report.methods) {
    std::vector<double> costs, v1, v2;
    for (const auto& f : mr.folds) {
      costs.push_back(f.avg_cost);
      v1.push_back(f.m1_validity);
      v2.push_back(f.m2_validity);
    }
    mr.cost = summarize(costs);
    mr.m1_validity = summarize(v1);
    mr.m2_validity = summarize(v2);
  }
  return report;
}

std::vector<SweepPoint> sweep(const ExperimentSpec& spec, std::span<const ShiftSpec> grid,
                              Execution exec) {
  if (grid.empty()) throw InvalidArgument("empty sweep grid");
  if (!std::holds_alternative<SyntheticDataSpec>(spec.data)) {
    throw DataError("shift sweeps need synthetic data");
  }
  std::vector<SweepPoint> points;
  for (const ShiftSpec& shift : grid) {
    ExperimentSpec point = spec;
    std::get<SyntheticDataSpec>(point.data).shift = shift;
    point.sweep.clear();
    points.push_back({shift, run_shift_experiment(point, exec)});
  }
  return points;
}

std::string sweep_plot_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  out.precision(17);
  out << "method,alpha,beta,m2_validity_mean,m2_validity_se\n";
  for (const auto& p : points) {
    for (const auto& mr : p.report.methods) {
      const auto per_seed = mr.m2_validity_per_seed();
      std::vector<double> vals;
      for (double v : per_seed) {
        if (std::isfinite(v)) vals.push_back(v);
      }
      double mean = kNaN, se = kNaN;
      if (!vals.empty()) {
        const double n = static_cast<double>(vals.size());
        mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
        se = 0.0;
        if (vals.size() > 1) {
          double var = 0.0;
          for (double v : vals) var += (v - mean) * (v - mean);
          se = std::sqrt(var / (n - 1.0)) / std::sqrt(n);
        }
      }
      out << to_string(mr.method) << ',' << p.shift.alpha << ',' << p.shift.beta << ',' << mean
          << ',' << se << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Cost bound

double cost_diameter(const Dataset& data, const CostModel& cost_model) {
  double best = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const FeatureVector xi = data.row(i);
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      best = std::max(best, cost_model.cost(xi, data.row(j)));
    }
  }
  return best;
}

nlohmann::json Theorem2Report::to_json() const {
  nlohmann::json records_json = nlohmann::json::array();
  for (const auto& r : records) {
    records_json.push_back({{"index", r.index},
                            {"cfe_cost", r.cfe_cost},
                            {"roar_cost", r.roar_cost},
                            {"rhs", r.rhs},
                            {"slack", r.slack}});
  }
  return {{"lambda", lambda},          {"delta_max", delta_max},       {"eta", eta},
          {"alpha", alpha},            {"diameter", diameter},         {"skipped", skipped},
          {"violation_rate", violation_rate}, {"cfe_avg_cost", cfe_avg_cost},
          {"roar_avg_cost", roar_avg_cost},   {"records", records_json}};
}

Theorem2Report theorem2_report(const LinearModel& model, const Dataset& train,
                               std::span<const FeatureVector> instances,
                               const CostModel& cost_model, const RecourseConfig& config,
                               double eta, double alpha, Execution exec) {
  Theorem2Report report;
  report.lambda = config.lambda;
  report.delta_max = config.delta_set.delta_max;
  report.eta = eta;
  report.alpha = alpha;
  report.diameter = cost_diameter(train, cost_model);
  Eigen::VectorXd mean_aug(train.dim() + 1);
  mean_aug << train.features.colwise().mean().transpose(), 1.0;
  const Eigen::VectorXd w_aug = model.augmented_weights();

  std::vector<std::optional<Theorem2Record>> slots(instances.size());
  parallel_for(instances.size(), exec, [&](std::size_t i) {
    try {
      const RecourseResult plain = cfe(model, instances[i], cost_model, config);
      const RecourseResult robust = roar(model, instances[i], cost_model, config);
      Eigen::VectorXd delta = robust.worst_case_delta;
      if (delta.size() == 0) delta = Eigen::VectorXd::Zero(w_aug.size());
      Theorem2Record rec;
      rec.index = i;
      rec.cfe_cost = plain.cost;
      rec.roar_cost = robust.cost;
      rec.rhs = theorem2_rhs(config.lambda, w_aug + delta, mean_aug, report.diameter, eta, alpha);
      rec.slack = rec.rhs - (rec.roar_cost - rec.cfe_cost);
      slots[i] = rec;
    } catch (const Error&) {
    }
  });
  int violations = 0;
  double cfe_total = 0.0, roar_total = 0.0;
  for (const auto& s : slots) {
    if (!s) {
      ++report.skipped;
      continue;
    }
    violations += s->slack < 0.0;
    cfe_total += s->cfe_cost;
    roar_total += s->roar_cost;
    report.records.push_back(*s);
  }
  if (!report.records.empty()) {
    const double n = static_cast<double>(report.records.size());
    report.violation_rate = violations / n;
    report.cfe_avg_cost = cfe_total / n;
    report.roar_avg_cost = roar_total / n;
  }
  return report;
}

}  // namespace roar
