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

#include "roar/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace roar {

// ---------------------------------------------------------------------------
// Perturbation sets

PerturbationSet PerturbationSet::box(double delta_min, double delta_max) {
  PerturbationSet set;
  set.kind = Kind::kBox;
  set.delta_min = delta_min;
  set.delta_max = delta_max;
  set.validate();
  return set;
}

PerturbationSet PerturbationSet::norm_ball(double p, double radius) {
  PerturbationSet set;
  set.kind = Kind::kNormBall;
  set.p = p;
  set.delta_max = radius;
  set.validate();
  return set;
}

void PerturbationSet::validate() const {
  if (kind == Kind::kBox) {
    if (!(delta_min <= 0.0 && 0.0 <= delta_max) || !std::isfinite(delta_min) ||
        !std::isfinite(delta_max)) {
      throw InvalidArgument("box perturbation set needs delta_min <= 0 <= delta_max");
    }
  } else {
    if (!(p >= 1.0)) throw InvalidArgument("norm ball needs p >= 1");
    if (!(delta_max >= 0.0) || !std::isfinite(delta_max)) {
      throw InvalidArgument("norm ball radius must be finite and >= 0");
    }
  }
}

bool PerturbationSet::is_trivial() const {
  return kind == Kind::kBox ? (delta_min == 0.0 && delta_max == 0.0) : delta_max == 0.0;
}

namespace {

double lp_norm(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) total += std::pow(std::abs(v[i]), p);
  return std::pow(total, 1.0 / p);
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Euclidean projection onto the l1 ball (Duchi et al. 2008).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (v.cwiseAbs().sum() <= radius) return v;
  if (radius == 0.0) return Eigen::VectorXd::Zero(v.size());
  std::vector<double> mags(v.data(), v.data() + v.size());
  for (double& m : mags) m = std::abs(m);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    running += mags[k];
    const double candidate = (running - radius) / static_cast<double>(k + 1);
    if (mags[k] > candidate) theta = candidate;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = sign_of(v[i]) * std::max(std::abs(v[i]) - theta, 0.0);
  }
  return out;
}

}  // namespace

bool PerturbationSet::contains(const Eigen::VectorXd& delta, double tol) const {
  if (kind == Kind::kBox) {
    return (delta.array() >= delta_min - tol).all() &&
           (delta.array() <= delta_max + tol).all();
  }
  return lp_norm(delta, p) <= delta_max + tol;
}

Eigen::VectorXd PerturbationSet::project(const Eigen::VectorXd& delta) const {
  if (kind == Kind::kBox) return delta.cwiseMax(delta_min).cwiseMin(delta_max);
  if (std::isinf(p)) return delta.cwiseMax(-delta_max).cwiseMin(delta_max);
  if (p == 1.0) return project_l1_ball(delta, delta_max);
  const double norm = lp_norm(delta, p);
  if (norm <= delta_max) return delta;
  return delta * (delta_max / norm);
}

// ---------------------------------------------------------------------------
// Actionability

ActionabilitySpec ActionabilitySpec::all_mutable(Eigen::Index dim) {
  ActionabilitySpec spec;
  spec.mutable_mask.assign(static_cast<std::size_t>(dim), true);
  spec.lower = Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity());
  spec.upper = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
  return spec;
}

bool ActionabilitySpec::is_mutable(Eigen::Index i) const {
  return mutable_mask.empty() || mutable_mask[static_cast<std::size_t>(i)];
}

double ActionabilitySpec::lower_bound(Eigen::Index i) const {
  return lower.size() == 0 ? -std::numeric_limits<double>::infinity() : lower[i];
}

double ActionabilitySpec::upper_bound(Eigen::Index i) const {
  return upper.size() == 0 ? std::numeric_limits<double>::infinity() : upper[i];
}

void ActionabilitySpec::validate(Eigen::Index dim) const {
  if (!mutable_mask.empty() && mutable_mask.size() != static_cast<std::size_t>(dim)) {
    throw InvalidArgument("actionability mask length does not match dimension");
  }
  if (lower.size() != 0) require_dim(lower, dim, "actionability lower bounds");
  if (upper.size() != 0) require_dim(upper, dim, "actionability upper bounds");
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (lower_bound(i) > upper_bound(i)) {
      throw InvalidArgument("actionability lower bound exceeds upper bound");
    }
  }
}

bool ActionabilitySpec::satisfied_by(const FeatureVector& x2,
                                     const FeatureVector& x_original) const {
  for (Eigen::Index i = 0; i < x2.size(); ++i) {
    if (!is_mutable(i)) {
      if (x2[i] != x_original[i]) return false;
    } else if (x2[i] < lower_bound(i) || x2[i] > upper_bound(i)) {
      return false;
    }
  }
  return true;
}

FeatureVector project_actionable(const FeatureVector& x2,
                                 const FeatureVector& x_original,
                                 const ActionabilitySpec& spec) {
  require_dim(x_original, x2.size(), "project_actionable");
  FeatureVector out = x2;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!spec.is_mutable(i)) {
      out[i] = x_original[i];
    } else {
      out[i] = std::clamp(out[i], spec.lower_bound(i), spec.upper_bound(i));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

void RecourseConfig::validate(Eigen::Index dim) const {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (max_iterations < 0) throw InvalidArgument("max iterations must be >= 0");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
  delta_set.validate();
  actionability.validate(dim);
}

// ---------------------------------------------------------------------------
// Inner maximisation

FeatureVector augment(const FeatureVector& x) {
  FeatureVector aug(x.size() + 1);
  aug.head(x.size()) = x;
  aug[x.size()] = 1.0;
  return aug;
}

namespace {

// Margin (w + delta)^T [x; 1], summed in the same order as LinearModel::score
// so that delta = 0 reproduces the unshifted score bit for bit.
double shifted_margin(const LinearModel& model, const FeatureVector& x,
                      const Eigen::VectorXd& delta) {
  const auto& w = model.weights();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (w[i] + delta[i]) * x[i];
  return s + (model.intercept() + delta[x.size()]);
}

// argmin of delta^T a over the set.
Eigen::VectorXd minimize_inner_product(const Eigen::VectorXd& a,
                                       const PerturbationSet& set) {
  const Eigen::Index n = a.size();
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  if (set.kind == PerturbationSet::Kind::kBox) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a[i] > 0.0) delta[i] = set.delta_min;
      else if (a[i] < 0.0) delta[i] = set.delta_max;
    }
    return delta;
  }
  const double r = set.delta_max;
  if (r == 0.0) return delta;
  if (std::isinf(set.p)) {
    for (Eigen::Index i = 0; i < n; ++i) delta[i] = -r * sign_of(a[i]);
    return delta;
  }
  if (set.p == 1.0) {
    Eigen::Index k = 0;
    const double largest = a.cwiseAbs().maxCoeff(&k);
    if (largest > 0.0) delta[k] = -r * sign_of(a[k]);
    return delta;
  }
  if (set.p == 2.0) {
    const double norm = a.norm();
    if (norm > 0.0) delta = -r * a / norm;
    return delta;
  }
  // Hoelder: the minimiser aligns with sign(a) |a|^(q-1), 1/p + 1/q = 1.
  const double q = set.p / (set.p - 1.0);
  const double qnorm = lp_norm(a, q);
  if (qnorm == 0.0) return delta;
  for (Eigen::Index i = 0; i < n; ++i) {
    delta[i] = -r * sign_of(a[i]) * std::pow(std::abs(a[i]) / qnorm, q - 1.0);
  }
  return delta;
}

InnerMaxResult projected_ascent(const LinearModel& model, const FeatureVector& x2,
                                const PerturbationSet& set) {
  constexpr int kSteps = 50;
  const FeatureVector a = augment(x2);
  const Eigen::Index n = a.size();
  const double reach = set.kind == PerturbationSet::Kind::kBox
                           ? std::max(-set.delta_min, set.delta_max)
                           : set.delta_max;
  const double eta = 0.25 * reach;
  const bool sign_steps = set.kind == PerturbationSet::Kind::kBox || std::isinf(set.p);

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  InnerMaxResult best{delta, shifted_loss(model, x2, delta)};
  for (int step = 0; step < kSteps && eta > 0.0; ++step) {
    // d loss / d delta = (sigmoid(m) - 1) a, so ascent follows -a.
    const Eigen::VectorXd ascent = -a;
    Eigen::VectorXd move(n);
    if (sign_steps) {
      for (Eigen::Index i = 0; i < n; ++i) move[i] = sign_of(ascent[i]);
    } else if (set.p == 1.0) {
      move.setZero();
      Eigen::Index k = 0;
      ascent.cwiseAbs().maxCoeff(&k);
      move[k] = sign_of(ascent[k]);
    } else {
      const double norm = ascent.norm();
      move = norm > 0.0 ? Eigen::VectorXd(ascent / norm) : Eigen::VectorXd::Zero(n);
    }
    delta = set.project(delta + eta * move);
    const double loss = shifted_loss(model, x2, delta);
    if (loss > best.loss) best = {delta, loss};
  }
  return best;
}

}  // namespace

double shifted_loss(const LinearModel& model, const FeatureVector& x2,
                    const Eigen::VectorXd& delta) {
  require_dim(x2, model.dim(), "shifted_loss");
  require_dim(delta, model.dim() + 1, "shifted_loss delta");
  return bce_from_score(shifted_margin(model, x2, delta), 1);
}

InnerMaxResult inner_max(const LinearModel& model, const FeatureVector& x2,
                         const PerturbationSet& delta_set, InnerMaxMode mode) {
  require_dim(x2, model.dim(), "inner_max");
  delta_set.validate();
  if (mode == InnerMaxMode::kProjectedAscent) {
    return projected_ascent(model, x2, delta_set);
  }
  // The loss is strictly decreasing in (w + delta)^T [x2; 1].
  Eigen::VectorXd delta = minimize_inner_product(augment(x2), delta_set);
  const double loss = shifted_loss(model, x2, delta);
  return {std::move(delta), loss};
}

// ---------------------------------------------------------------------------
// Gradient-based generators

namespace {

struct LossEval {
  double loss = 0.0;
  Eigen::VectorXd gradient;  // d loss / d x2
  Eigen::VectorXd delta;     // worst-case shift, empty for cfe
};

RecourseResult identity_result(const FeatureVector& x) {
  RecourseResult r;
  r.original = x;
  r.counterfactual = x;
  r.converged = true;
  r.iterations = 0;
  r.cost = 0.0;
  r.valid_on_source = true;
  return r;
}

// Descent on loss(x2) + lambda * cost(x, x2) from x2 = x; returns the best
// iterate visited. `evaluate` supplies the loss term and its gradient.
template <typename Evaluate>
RecourseResult descend(const FeatureVector& x, const CostModel& cost_model,
                       const RecourseConfig& config, Evaluate&& evaluate) {
  const Eigen::Index d = x.size();
  const ActionabilitySpec& spec = config.actionability;

  FeatureVector current = x;
  LossEval eval = evaluate(current);
  double objective = eval.loss + config.lambda * cost_model.cost(x, current);

  RecourseResult result;
  result.original = x;
  result.counterfactual = current;
  result.objective = objective;
  result.worst_case_delta = eval.delta;
  if (config.record_trace) result.objective_trace.push_back(objective);

  Eigen::VectorXd adam_m = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd adam_v = Eigen::VectorXd::Zero(d);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const Eigen::VectorXd grad =
        eval.gradient + config.lambda * cost_model.gradient(x, current);
    if (!grad.allFinite()) throw DivergedError(result.objective_trace);

    FeatureVector next;
    if (config.optimizer == DescentOptimizer::kAdam) {
      constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
      adam_m = kBeta1 * adam_m + (1.0 - kBeta1) * grad;
      adam_v = kBeta2 * adam_v + (1.0 - kBeta2) * grad.cwiseAbs2();
      const double c1 = 1.0 - std::pow(kBeta1, iter);
      const double c2 = 1.0 - std::pow(kBeta2, iter);
      next = current - config.learning_rate *
                           ((adam_m / c1).array() / ((adam_v / c2).cwiseSqrt().array() + kEps))
                               .matrix();
    } else {
      next = current - config.learning_rate * grad;
    }
    current = project_actionable(next, x, spec);
    eval = evaluate(current);
    const double next_objective = eval.loss + config.lambda * cost_model.cost(x, current);
    if (!std::isfinite(next_objective)) throw DivergedError(result.objective_trace);
    if (config.record_trace) result.objective_trace.push_back(next_objective);
    result.iterations = iter;

    if (next_objective < result.objective) {
      result.objective = next_objective;
      result.counterfactual = current;
      result.worst_case_delta = eval.delta;
    }
    if (std::abs(next_objective - objective) < config.tolerance) {
      result.converged = true;
      break;
    }
    objective = next_objective;
  }
  result.cost = cost_model.cost(x, result.counterfactual);
  return result;
}

}  // namespace

RecourseResult roar(const LinearModel& model, const FeatureVector& x,
                    const CostModel& cost_model, const RecourseConfig& config) {
  require_dim(x, model.dim(), "roar");
  config.validate(model.dim());
  if (model.score(x) > 0.0) return identity_result(x);

  const Eigen::Index d = model.dim();
  auto evaluate = [&](const FeatureVector& x2) {
    InnerMaxResult worst = inner_max(model, x2, config.delta_set, config.inner_max_mode);
    const double margin = shifted_margin(model, x2, worst.delta);
    const double m = margin >= 0.0 ? 1.0 / (1.0 + std::exp(-margin))
                                   : std::exp(margin) / (1.0 + std::exp(margin));
    LossEval eval;
    eval.loss = worst.loss;
    eval.gradient = (m - 1.0) * (model.weights() + worst.delta.head(d));
    eval.delta = std::move(worst.delta);
    return eval;
  };
  RecourseResult result = descend(x, cost_model, config, evaluate);
  result.valid_on_source = model.score(result.counterfactual) > 0.0;
  return result;
}

RecourseResult cfe(const Model& model, const FeatureVector& x,
                   const CostModel& cost_model, const RecourseConfig& config) {
  require_dim(x, input_dim(model), "cfe");
  config.validate(input_dim(model));
  if (predict_label(model, x) == 1) return identity_result(x);

  auto evaluate = [&](const FeatureVector& x2) {
    LossEval eval;
    eval.loss = bce_from_score(score(model, x2), 1);
    eval.gradient = input_gradient(model, x2, 1);
    return eval;
  };
  RecourseResult result = descend(x, cost_model, config, evaluate);
  result.valid_on_source = predict_label(model, result.counterfactual) == 1;
  return result;
}

// ---------------------------------------------------------------------------
// Discretised actionable-recourse search

namespace {

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  double norm = std::numeric_limits<double>::infinity();
  Eigen::VectorXd action;
};

constexpr double kTieTol = 1e-12;

bool better(double cost, double norm, const Candidate& best) {
  if (cost < best.cost - kTieTol) return true;
  if (cost > best.cost + kTieTol) return false;
  return norm < best.norm - kTieTol;
}

struct GridProblem {
  const LinearModel* model;
  const FeatureVector* x;
  const CostModel* cost_model;
  std::vector<Eigen::Index> features;          // searchable features, best ratio first
  std::vector<std::vector<double>> moves;      // per searchable feature, increasing |a|
  long evaluations = 0;

  bool valid(const Eigen::VectorXd& action) {
    ++evaluations;
    return model->score(*x + action) > 0.0;
  }
};

void exact_search(GridProblem& prob, std::size_t idx, double partial_cost,
                  double partial_norm, double partial_score,
                  const std::vector<double>& remaining_gain,
                  Eigen::VectorXd& action, Candidate& best) {
  if (partial_score > 0.0 && prob.valid(action)) {
    if (better(partial_cost, partial_norm, best)) best = {partial_cost, partial_norm, action};
    return;
  }
  if (idx == prob.features.size()) return;
  if (partial_score + remaining_gain[idx] <= 0.0 && !(partial_score > 0.0)) {
    // Even the largest remaining moves cannot cross the boundary.
    if (partial_score + remaining_gain[idx] < -1e-9) return;
  }
  const Eigen::Index f = prob.features[idx];
  const double w = prob.model->weights()[f];
  const double unit_cost = prob.cost_model->feature_weight(f);
  for (double a : prob.moves[idx]) {
    const double c = partial_cost + unit_cost * std::abs(a);
    const double n = partial_norm + std::abs(a);
    if (!better(c, n, best)) break;
    action[f] = a;
    exact_search(prob, idx + 1, c, n, partial_score + w * a, remaining_gain, action, best);
  }
  action[f] = 0.0;
}

Candidate greedy_pairwise_search(GridProblem& prob, double base_score) {
  const std::size_t k = prob.features.size();
  std::vector<std::size_t> level(k, 0);
  Eigen::VectorXd action = Eigen::VectorXd::Zero(prob.x->size());
  auto assemble = [&](const std::vector<std::size_t>& lv) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(prob.x->size());
    for (std::size_t j = 0; j < k; ++j) a[prob.features[j]] = prob.moves[j][lv[j]];
    return a;
  };
  auto measure = [&](const Eigen::VectorXd& a, double& cost, double& norm) {
    cost = 0.0;
    norm = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      cost += prob.cost_model->feature_weight(i) * std::abs(a[i]);
      norm += std::abs(a[i]);
    }
  };

  // Greedy: push the best cost ratio feature first, then the next.
  double s = base_score;
  for (std::size_t j = 0; j < k && !(s > 0.0 && prob.valid(action)); ++j) {
    while (level[j] + 1 < prob.moves[j].size()) {
      ++level[j];
      action = assemble(level);
      s = prob.model->score(*prob.x + action);
      if (s > 0.0 && prob.valid(action)) break;
    }
  }
  Candidate best;
  if (!prob.valid(action)) return best;
  measure(action, best.cost, best.norm);
  best.action = action;

  // Pairwise refinement: re-optimise each pair with the rest fixed.
  for (int round = 0; round < 20; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        std::vector<std::size_t> trial = level;
        for (std::size_t li = 0; li < prob.moves[i].size(); ++li) {
          for (std::size_t lj = 0; lj < prob.moves[j].size(); ++lj) {
            trial[i] = li;
            trial[j] = lj;
            const Eigen::VectorXd a = assemble(trial);
            double c, n;
            measure(a, c, n);
            if (!better(c, n, best)) continue;
            if (prob.valid(a)) {
              best = {c, n, a};
              level = trial;
              improved = true;
            }
          }
        }
        trial = level;
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace

RecourseResult ar_grid(const LinearModel& model, const FeatureVector& x,
                       const CostModel& cost_model,
                       const ActionabilitySpec& actionability,
                       const ArGridConfig& grid) {
  require_dim(x, model.dim(), "ar_grid");
  actionability.validate(model.dim());
  if (!(grid.grid_step > 0.0) || !(grid.max_change >= 0.0)) {
    throw InvalidArgument("grid step must be > 0 and max change >= 0");
  }
  if (model.score(x) > 0.0) return identity_result(x);

  GridProblem prob{&model, &x, &cost_model, {}, {}, 0};
  const long steps = static_cast<long>(std::floor(grid.max_change / grid.grid_step + 1e-9));
  std::vector<Eigen::Index> candidates;
  for (Eigen::Index i = 0; i < model.dim(); ++i) {
    if (actionability.is_mutable(i) && model.weights()[i] != 0.0) candidates.push_back(i);
  }
  // Best score gain per unit cost first; zero-cost features lead.
  auto ratio = [&](Eigen::Index i) {
    const double c = cost_model.feature_weight(i);
    return c == 0.0 ? std::numeric_limits<double>::infinity()
                    : std::abs(model.weights()[i]) / c;
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ratio(a) > ratio(b); });

  std::vector<double> max_gain;
  for (Eigen::Index f : candidates) {
    // Only moves along sign(w_f) can raise the score.
    const double dir = model.weights()[f] > 0.0 ? 1.0 : -1.0;
    std::vector<double> moves;
    for (long k = 0; k <= steps; ++k) {
      const double a = dir * static_cast<double>(k) * grid.grid_step;
      const double moved = x[f] + a;
      if (moved < actionability.lower_bound(f) || moved > actionability.upper_bound(f)) break;
      moves.push_back(a);
    }
    prob.features.push_back(f);
    max_gain.push_back(std::abs(model.weights()[f] * moves.back()));
    prob.moves.push_back(std::move(moves));
  }

  const double base_score = model.score(x);
  Candidate best;
  if (static_cast<int>(prob.features.size()) <= grid.exact_dimension_limit) {
    std::vector<double> remaining(prob.features.size() + 1, 0.0);
    for (std::size_t j = prob.features.size(); j-- > 0;) remaining[j] = remaining[j + 1] + max_gain[j];
    Eigen::VectorXd action = Eigen::VectorXd::Zero(x.size());
    exact_search(prob, 0, 0.0, 0.0, base_score, remaining, action, best);
  } else {
    best = greedy_pairwise_search(prob, base_score);
  }
  if (best.action.size() == 0) throw NoRecourse("no recourse in action set");

  RecourseResult result;
  result.original = x;
  result.counterfactual = x + best.action;
  result.converged = true;
  result.iterations = static_cast<int>(std::min<long>(prob.evaluations, std::numeric_limits<int>::max()));
  result.cost = cost_model.cost(x, result.counterfactual);
  result.objective = result.cost;
  result.valid_on_source = model.score(result.counterfactual) > 0.0;
  return result;
}

RecourseResult roar_lime(const Model& model, const FeatureVector& x,
                         const CostModel& cost_model,
                         const RecourseConfig& config,
                         const SurrogateConfig& surrogate) {
  require_dim(x, input_dim(model), "roar_lime");
  if (predict_label(model, x) == 1) return identity_result(x);
  const LinearModel local = fit_local_linear(model, x, surrogate);
  RecourseResult result = roar(local, x, cost_model, config);
  result.valid_on_source = predict_label(model, result.counterfactual) == 1;
  return result;
}

RecourseResult ar_lime(const Model& model, const FeatureVector& x,
                       const CostModel& cost_model,
                       const ActionabilitySpec& actionability,
                       const ArGridConfig& grid,
                       const SurrogateConfig& surrogate) {
  require_dim(x, input_dim(model), "ar_lime");
  if (predict_label(model, x) == 1) return identity_result(x);
  const LinearModel local = fit_local_linear(model, x, surrogate);
  RecourseResult result = ar_grid(local, x, cost_model, actionability, grid);
  result.valid_on_source = predict_label(model, result.counterfactual) == 1;
  return result;
}

nlohmann::json recourse_to_json(const RecourseResult& result) {
  auto to_array = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return {{"x", to_array(result.original)},
          {"counterfactual", to_array(result.counterfactual)},
          {"cost", result.cost},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"objective", result.objective},
          {"valid_on_source", result.valid_on_source}};
}

}  // namespace roar
