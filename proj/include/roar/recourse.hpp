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

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "roar/cost.hpp"
#include "roar/error.hpp"
#include "roar/model.hpp"
#include "roar/surrogate.hpp"

namespace roar {

// Admissible additive shifts to the augmented parameter vector [w; b].
struct PerturbationSet {
  enum class Kind { kBox, kNormBall };

  Kind kind = Kind::kNormBall;
  double delta_min = 0.0;  // box only
  double delta_max = 0.1;  // box upper bound, or ball radius
  double p = 2.0;          // ball only; infinity allowed

  static PerturbationSet box(double delta_min, double delta_max);
  static PerturbationSet norm_ball(double p, double radius);

  void validate() const;
  bool is_trivial() const;  // Delta = {0}
  bool contains(const Eigen::VectorXd& delta, double tol = 1e-12) const;
  // Maps a point into the set: Euclidean projection for box, p = 1, 2 and
  // infinity; radial retraction for other p.
  Eigen::VectorXd project(const Eigen::VectorXd& delta) const;
};

struct ActionabilitySpec {
  // Empty vectors mean "every feature mutable" and "unbounded".
  std::vector<bool> mutable_mask;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static ActionabilitySpec all_mutable(Eigen::Index dim);
  bool is_mutable(Eigen::Index i) const;
  double lower_bound(Eigen::Index i) const;
  double upper_bound(Eigen::Index i) const;
  void validate(Eigen::Index dim) const;
  // True when x2 respects the spec relative to the original instance.
  bool satisfied_by(const FeatureVector& x2, const FeatureVector& x_original) const;
};

enum class InnerMaxMode { kClosedForm, kProjectedAscent };
enum class DescentOptimizer { kGradientDescent, kAdam };

struct RecourseConfig {
  double lambda = 0.1;
  double learning_rate = 0.01;
  int max_iterations = 1000;
  double tolerance = 1e-6;
  PerturbationSet delta_set = PerturbationSet::norm_ball(2.0, 0.1);
  ActionabilitySpec actionability;
  InnerMaxMode inner_max_mode = InnerMaxMode::kClosedForm;
  DescentOptimizer optimizer = DescentOptimizer::kGradientDescent;
  bool record_trace = true;

  void validate(Eigen::Index dim) const;
};

struct RecourseResult {
  FeatureVector original;
  FeatureVector counterfactual;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;
  double cost = 0.0;
  bool valid_on_source = false;
  // Worst-case shift at the returned counterfactual (ROAR only).
  Eigen::VectorXd worst_case_delta;
};

// Thrown when the descent produces a non-finite gradient.
class DivergedError : public Error {
 public:
  DivergedError(std::vector<double> trace)
      : Error(ErrorKind::kNumerical, "diverged"), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

struct InnerMaxResult {
  Eigen::VectorXd delta;  // length d + 1, last entry shifts the intercept
  double loss = 0.0;      // bce(f_{w+delta}(x2), 1)
};

FeatureVector augment(const FeatureVector& x);

// argmax over delta in Delta of bce(sigmoid((w + delta)^T [x2; 1]), 1).
InnerMaxResult inner_max(const LinearModel& model, const FeatureVector& x2,
                         const PerturbationSet& delta_set,
                         InnerMaxMode mode = InnerMaxMode::kClosedForm);

// bce loss of the shifted model at x2 for a given delta.
double shifted_loss(const LinearModel& model, const FeatureVector& x2,
                    const Eigen::VectorXd& delta);

FeatureVector project_actionable(const FeatureVector& x2,
                                 const FeatureVector& x_original,
                                 const ActionabilitySpec& spec);

// Robust recourse against a linear model (min over x'' of max over Delta).
RecourseResult roar(const LinearModel& model, const FeatureVector& x,
                    const CostModel& cost_model, const RecourseConfig& config);

// Counterfactual explanation without model shift; config.delta_set ignored.
RecourseResult cfe(const Model& model, const FeatureVector& x,
                   const CostModel& cost_model, const RecourseConfig& config);

struct ArGridConfig {
  double grid_step = 0.1;
  double max_change = 5.0;
  // Above this many mutable features the search switches from exact
  // enumeration to greedy-plus-pairwise refinement.
  int exact_dimension_limit = 6;
};

// Minimal-cost grid action achieving label 1 under a linear model.
RecourseResult ar_grid(const LinearModel& model, const FeatureVector& x,
                       const CostModel& cost_model,
                       const ActionabilitySpec& actionability,
                       const ArGridConfig& grid);

RecourseResult roar_lime(const Model& model, const FeatureVector& x,
                         const CostModel& cost_model,
                         const RecourseConfig& config,
                         const SurrogateConfig& surrogate);

RecourseResult ar_lime(const Model& model, const FeatureVector& x,
                       const CostModel& cost_model,
                       const ActionabilitySpec& actionability,
                       const ArGridConfig& grid,
                       const SurrogateConfig& surrogate);

// One JSON-lines record: x, counterfactual, cost, iterations,
// valid_on_source, converged, objective.
nlohmann::json recourse_to_json(const RecourseResult& result);

}  // namespace roar
