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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "roar/cost.hpp"
#include "roar/datagen.hpp"
#include "roar/model.hpp"
#include "roar/parallel.hpp"
#include "roar/recourse.hpp"
#include "roar/surrogate.hpp"

namespace roar {

enum class Method { kCfe, kRoar, kAr, kRoarLime, kArLime };
enum class ModelFamily { kLogistic, kMlp };
enum class CostKind { kL1, kPfc };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct SyntheticDataSpec {
  std::size_t n = 1000;
  GaussianClassSpec class0{Eigen::Vector2d(-2.0, -2.0), 0.5 * Eigen::Matrix2d::Identity()};
  GaussianClassSpec class1{Eigen::Vector2d(2.0, 2.0), 0.5 * Eigen::Matrix2d::Identity()};
  double class1_prob = 0.5;
  ShiftSpec shift;
};

struct CsvDataSpec {
  std::filesystem::path d1;
  std::filesystem::path d2;
  std::filesystem::path schema;
};

struct ExperimentSpec {
  std::variant<SyntheticDataSpec, CsvDataSpec> data = SyntheticDataSpec{};
  // Standardize features with statistics of each D1 training fold.
  // Defaults to false for synthetic data and true for CSV data.
  bool standardize = false;
  ModelFamily model = ModelFamily::kLogistic;
  TrainingConfig training;
  std::vector<int> hidden_layers{50, 100, 200};
  std::vector<Method> methods{Method::kCfe, Method::kRoar};
  CostKind cost = CostKind::kL1;
  int pfc_comparisons_per_pair = 200;
  std::optional<std::filesystem::path> pfc_path;
  PerturbationSet delta_set = PerturbationSet::norm_ball(2.0, 0.1);
  // When set, robust methods pick lambda with a zero radius, then the
  // largest radius in delta_max_grid with the best M1 validity at that lambda.
  bool delta_max_auto = false;
  std::vector<double> delta_max_grid{0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
  // Empty means "auto": pick from lambda_grid per fold and method.
  std::optional<double> lambda;
  std::vector<double> lambda_grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  RecourseConfig recourse;  // lambda and delta_set are overridden per run
  SurrogateConfig surrogate;
  ArGridConfig ar;
  int folds = 5;
  std::vector<std::uint64_t> seeds;
  // Cap on recourse instances per fold (0 = every negatively classified
  // holdout instance).
  std::size_t max_instances = 0;
  std::vector<ShiftSpec> sweep;

  void validate() const;

  // Relative CSV paths are resolved against base_dir. Throws DataError.
  static ExperimentSpec from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;
};

ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
};

// Fraction of results whose counterfactual gets label 1 under model.
// Throws InvalidArgument "no recourses" when empty.
double validity(std::span<const RecourseResult> results, const Model& model);
Summary avg_cost(std::span<const RecourseResult> results, const CostModel& cost_model);

struct InstanceRecord {
  std::uint64_t seed = 0;
  int fold = 0;
  std::size_t index = 0;  // row of D1
  bool produced = false;
  std::string error;
  double lambda = 0.0;
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
  bool m1_valid = false;
  bool m2_valid = false;
};

struct FoldMetrics {
  std::uint64_t seed = 0;
  int fold = 0;
  double lambda = 0.0;
  double delta_max = 0.0;  // robust methods only
  int total = 0;
  int produced = 0;
  int errored = 0;
  // NaN when nothing was produced in this fold.
  double avg_cost = 0.0;
  double m1_validity = 0.0;
  double m2_validity = 0.0;
};

struct MethodReport {
  Method method = Method::kCfe;
  int total = 0;
  int produced = 0;
  int errored = 0;
  Summary cost;         // over folds
  Summary m1_validity;  // over folds
  Summary m2_validity;  // over folds
  std::vector<FoldMetrics> folds;
  std::vector<InstanceRecord> instances;

  // Mean over folds of each seed's M2 validity, in seed order.
  std::vector<double> m2_validity_per_seed() const;
};

struct EvaluationReport {
  nlohmann::json config;
  std::vector<MethodReport> methods;

  const MethodReport& method(Method m) const;
  nlohmann::json to_json(bool include_instances = true) const;
};

// Cross-validated shift experiment: per seed and fold, M1 is trained on the
// D1 training fold and M2 on the matching D2 training fold; every method
// produces recourse for the negatively classified D1 holdout instances,
// scored under M1 and M2. Per-instance failures are counted, not fatal.
EvaluationReport run_shift_experiment(const ExperimentSpec& spec,
                                      Execution exec = Execution::kParallel);

struct SweepPoint {
  ShiftSpec shift;
  EvaluationReport report;
};

// One experiment per grid point, D2 generated with that shift. Synthetic
// data only. Throws InvalidArgument on an empty grid.
std::vector<SweepPoint> sweep(const ExperimentSpec& spec, std::span<const ShiftSpec> grid,
                              Execution exec = Execution::kParallel);

// method,alpha,beta,m2_validity_mean,m2_validity_se (standard error over seeds).
std::string sweep_plot_csv(std::span<const SweepPoint> points);

// Per-instance comparison of the cost increment c(x'', x) - c(x', x) of a
// robust recourse x'' over the plain one x' against the theoretical bound.
struct Theorem2Record {
  std::size_t index = 0;
  double cfe_cost = 0.0;
  double roar_cost = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - (roar_cost - cfe_cost)
};

struct Theorem2Report {
  double lambda = 0.0;
  double delta_max = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double diameter = 0.0;
  std::vector<Theorem2Record> records;
  int skipped = 0;  // either generator failed
  double violation_rate = 0.0;
  double cfe_avg_cost = 0.0;
  double roar_avg_cost = 0.0;

  nlohmann::json to_json() const;
};

// Largest pairwise cost between rows of data.
double cost_diameter(const Dataset& data, const CostModel& cost_model);

// Robust and plain recourse for each instance under the same config; the
// bound uses the worst-case shift at the robust counterfactual and the
// augmented training mean [mean; 1].
Theorem2Report theorem2_report(const LinearModel& model, const Dataset& train,
                               std::span<const FeatureVector> instances,
                               const CostModel& cost_model, const RecourseConfig& config,
                               double eta, double alpha,
                               Execution exec = Execution::kParallel);

}  // namespace roar
