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

// Acceptance checks. One PASS/FAIL/SKIP line per criterion; exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roar/error.hpp"
#include "roar/harness.hpp"
#include "roar/random.hpp"
#include "roar/recourse.hpp"
#include "roar/theory.hpp"
#include "support.hpp"

namespace {

using namespace roar;
using testing::logistic_loss;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  enum class Status { kPass, kFail, kSkip } status;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Outcome::Status::kPass : Outcome::Status::kFail, std::move(detail)};
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

int failures = 0;

void check(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {Outcome::Status::kFail, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.status == Outcome::Status::kPass && secs > budget_seconds) {
    o = {Outcome::Status::kFail, o.detail + "; over the " + fmt(budget_seconds) + "s budget"};
  }
  const char* tag = o.status == Outcome::Status::kPass ? "PASS" : o.status == Outcome::Status::kFail ? "FAIL" : "SKIP";
  if (o.status == Outcome::Status::kFail) ++failures;
  std::cout << tag << " " << name << ": " << o.detail << " [" << fmt(secs, 3) << "s]" << std::endl;
}

// ---------------------------------------------------------------------------

double grid_max_loss(const LinearModel& m, const FeatureVector& x2, double lo, double hi, double step) {
  const Eigen::VectorXd wa = m.augmented_weights();
  const FeatureVector xa = augment(x2);
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  const Eigen::Index d = wa.size();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  double best = -kInf;
  Eigen::VectorXd delta(d);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) {
      delta[i] = idx[static_cast<std::size_t>(i)] == n + 1 ? hi : lo + step * idx[static_cast<std::size_t>(i)];
    }
    best = std::max(best, logistic_loss((wa + delta).dot(xa)));
    Eigen::Index k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] > n + 1) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return best;
}

Eigen::VectorXd random_member(std::mt19937& rng, const PerturbationSet& set, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (set.kind == PerturbationSet::Kind::kBox) return testing::random_vector(rng, n, set.delta_min, set.delta_max);
  Eigen::VectorXd v = testing::random_vector(rng, n);
  const double norm = std::isinf(set.p) ? v.lpNorm<Eigen::Infinity>()
                                        : std::pow(v.cwiseAbs().array().pow(set.p).sum(), 1.0 / set.p);
  return v / norm * set.delta_max * std::pow(u(rng), 0.25);
}

int sampled_violations(std::mt19937& rng, const LinearModel& m, const FeatureVector& x, const PerturbationSet& set,
                       double closed) {
  for (int s = 0; s < 1000; ++s) {
    if (shifted_loss(m, x, random_member(rng, set, x.size() + 1)) > closed + 1e-12) return 1;
  }
  return 0;
}

Outcome inner_max_oracle() {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int grid_violations = 0, box_samples = 0, ball_samples = 0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index d = 1 + k % 3;
    const LinearModel m(testing::random_vector(rng, d, -2, 2), testing::random_vector(rng, 1, -1, 1)[0]);
    const FeatureVector x = testing::random_vector(rng, d, -3, 3);
    const auto box = PerturbationSet::box(-0.1 * u(rng), 0.1 * u(rng));
    const double closed = inner_max(m, x, box).loss;
    if (closed < grid_max_loss(m, x, box.delta_min, box.delta_max, 0.005) - 1e-6) ++grid_violations;
    box_samples += sampled_violations(rng, m, x, box, closed);
    const double p = k % 3 == 0 ? 1.0 : k % 3 == 1 ? 2.0 : kInf;
    const auto ball = PerturbationSet::norm_ball(p, 0.5 * u(rng));
    ball_samples += sampled_violations(rng, m, x, ball, inner_max(m, x, ball).loss);
  }
  return pass_if(grid_violations == 0 && box_samples == 0 && ball_samples == 0,
                 std::to_string(grid_violations) + "/100 box grid violations, " + std::to_string(box_samples) +
                     "/100 box and " + std::to_string(ball_samples) + "/100 norm-ball random-shift violations");
}

// Shared synthetic setup: model trained on D1 and negatively classified
// instances from an independent draw.
struct SyntheticSetup {
  Dataset train;
  LinearModel model;
  std::vector<FeatureVector> instances;
};

SyntheticSetup synthetic_setup(std::size_t count, std::uint64_t seed) {
  SyntheticSetup s;
  s.train = testing::synthetic(1000, derive_seed(seed, 1));
  s.model = train_logistic(s.train, testing::strong_training(seed));
  const Dataset pool = testing::synthetic(4 * count + 100, derive_seed(seed, 2));
  for (std::size_t i = 0; i < pool.size() && s.instances.size() < count; ++i) {
    if (s.model.score(pool.row(i)) <= 0.0) s.instances.push_back(pool.row(i));
  }
  if (s.instances.size() < count) throw std::runtime_error("not enough negative instances");
  return s;
}

Outcome reduction() {
  const auto s = synthetic_setup(50, 7);
  RecourseConfig cfg;
  cfg.lambda = 0.1;
  cfg.delta_set = PerturbationSet::norm_ball(2.0, 0.0);
  double worst = 0.0;
  for (const auto& x : s.instances) {
    const auto a = roar::roar(s.model, x, CostModel::l1(), cfg);
    const auto b = cfe(Model(s.model), x, CostModel::l1(), cfg);
    worst = std::max(worst, (a.counterfactual - b.counterfactual).lpNorm<Eigen::Infinity>());
  }
  return pass_if(worst <= 1e-9, "max coordinate difference " + fmt(worst) + " over 50 instances");
}

Outcome certificate() {
  const auto s = synthetic_setup(200, 8);
  RecourseConfig cfg;
  cfg.lambda = 0.1;
  cfg.delta_set = PerturbationSet::norm_ball(2.0, 0.1);
  cfg.record_trace = false;
  int converged = 0, violations = 0;
  for (const auto& x : s.instances) {
    const auto r = roar::roar(s.model, x, CostModel::l1(), cfg);
    if (!r.converged) continue;
    ++converged;
    const auto worst = inner_max(s.model, r.counterfactual, cfg.delta_set);
    if (!((s.model.augmented_weights() + worst.delta).dot(augment(r.counterfactual)) > 0.0)) ++violations;
  }
  return pass_if(violations == 0 && converged > 0, std::to_string(violations) + " violations among " +
                                                       std::to_string(converged) + "/200 converged results");
}

GaussianTheoryInput random_gaussian(std::mt19937& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  const Eigen::Index d = dim(rng);
  return GaussianTheoryInput(testing::random_vector(rng, d, -2, 2), testing::random_vector(rng, d, -2, 2),
                             testing::random_vector(rng, d, -2, 2), testing::random_spd(rng, d));
}

Outcome theorem1_exactness() {
  std::mt19937 rng(202);
  int agree = 0;
  double worst_z = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto in = random_gaussian(rng);
    const double exact = exact_invalidation_probability(in);
    const auto mc = monte_carlo_invalidation(in, 1000000, derive_seed(202, static_cast<std::uint64_t>(k)));
    const double z = std::abs(exact - mc.estimate) / std::max(mc.standard_error, 1e-12);
    // A zero-variance estimate must match exactly.
    const bool ok = mc.standard_error > 0 ? z <= 3.0 : exact == mc.estimate;
    agree += ok;
    if (std::isfinite(z)) worst_z = std::max(worst_z, z);
  }
  const GaussianTheoryInput worked(Eigen::Vector2d(1, 0), Eigen::Vector2d(-2, 0), Eigen::Vector2d(1, 0),
                                   Eigen::Matrix2d::Identity());
  const double worked_value = exact_invalidation_probability(worked);
  const auto worked_mc = monte_carlo_invalidation(worked, 1000000, 203);
  const bool worked_ok = std::abs(worked_value - 0.6827) <= 0.005;
  return pass_if(agree == 50 && worked_ok,
                 std::to_string(agree) + "/50 within 3 SE (worst |z| " + fmt(worst_z) + "); worked case " +
                     fmt(worked_value, 6) + " vs target 0.6827, sampled " + fmt(worked_mc.estimate, 6) +
                     ", joint-region quadrature " + fmt(region_probability(worked), 6));
}

Outcome theorem1_bound() {
  std::mt19937 rng(303);
  int cases = 0, violations = 0;
  double worst = -kInf;
  for (int k = 0; k < 200000 && cases < 50; ++k) {
    const auto in = random_gaussian(rng);
    const auto c = boundary_constants(in);
    if (c.c2 < 3.0) continue;
    ++cases;
    const auto bound = theorem1_lower_bound(in);
    if (!bound.applicable) continue;
    const double excess = bound.value - exact_invalidation_probability(in);
    worst = std::max(worst, excess);
    if (excess > 3e-3) ++violations;
  }
  return pass_if(cases == 50 && violations == 0, std::to_string(violations) + " violations over " +
                                                     std::to_string(cases) + " cases with c2 >= 3 (max excess " +
                                                     fmt(worst) + ")");
}

Outcome remarks() {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RemarkCase> cases;
  for (int k = 0; k < 10; ++k) cases.push_back(BernoulliRemark{0.1 + 0.8 * u(rng), u(rng), u(rng)});
  for (int k = 0; k < 10; ++k) {
    const double a = -u(rng), b = 1.0 + u(rng);
    const double tau = a + (b - a) * u(rng);
    cases.push_back(UniformRemark{a, b, tau, (b - a) * u(rng)});
  }
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd w = testing::random_vector(rng, 5, 0, 1);
    w[0] = 0.9;  // at least one favourable category
    cases.push_back(CategoricalRemark{w, 0.5, testing::random_vector(rng, 5, -0.6, 0.2)});
  }
  int agree = 0;
  std::string misses;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const double closed = remark_invalidation(cases[k]);
    const auto mc = remark_monte_carlo(cases[k], 1000000, derive_seed(404, k));
    const bool ok = mc.standard_error > 0 ? std::abs(closed - mc.estimate) <= 3 * mc.standard_error
                                          : closed == mc.estimate;
    agree += ok;
    if (!ok) misses += " #" + std::to_string(k) + "(" + fmt(closed) + " vs " + fmt(mc.estimate) + ")";
  }
  const double worked = remark_invalidation(UniformRemark{0.0, 1.0, 0.5, 0.3});
  const bool worked_ok = std::abs(worked - 0.3) < 1e-12;
  return pass_if(agree == 30 && worked_ok, std::to_string(agree) + "/30 within 3 SE; uniform worked case " +
                                               fmt(worked, 6) + (misses.empty() ? "" : "; misses:" + misses));
}

nlohmann::json synthetic_spec() {
  return {{"data", {{"synthetic", {{"n", 1000}}}}},
          {"model", "lr"},
          {"training", {{"learning_rate", 0.1}, {"epochs", 100}}},
          {"methods", {"cfe", "roar"}},
          {"cost", "l1"},
          {"norm", "l2"},
          {"delta_max", "auto"},
          {"lambda", "auto"},
          {"folds", 5},
          {"seeds", {0, 1, 2, 3, 4}}};
}

Outcome synthetic_sweep() {
  const ExperimentSpec spec = ExperimentSpec::from_json(synthetic_spec());
  const std::vector<ShiftSpec> grid{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.5, 0.0}, {2.0, 0.0}};
  const auto points = sweep(spec, grid);
  std::ofstream("acceptance_sweep.csv") << sweep_plot_csv(points);
  bool ordered = true;
  double gap_at_2 = 0.0;
  std::string table;
  for (const auto& p : points) {
    const double c = p.report.method(Method::kCfe).m2_validity.mean;
    const double r = p.report.method(Method::kRoar).m2_validity.mean;
    ordered = ordered && r >= c;
    if (p.shift.alpha == 2.0) gap_at_2 = r - c;
    table += " a=" + fmt(p.shift.alpha, 2) + ":" + fmt(c, 3) + "/" + fmt(r, 3);
  }
  return pass_if(ordered && gap_at_2 >= 0.15,
                 "M2 validity cfe/roar" + table + "; gap at alpha 2 = " + fmt(gap_at_2, 3));
}

Outcome m1_floor() {
  nlohmann::json j = synthetic_spec();
  j["methods"] = {"roar"};
  j["delta_max"] = 0.1;
  const auto report = run_shift_experiment(ExperimentSpec::from_json(j));
  const double v = report.method(Method::kRoar).m1_validity.mean;
  return pass_if(v >= 0.95, "ROAR M1 validity " + fmt(v, 4));
}

Outcome theorem2() {
  const auto s = synthetic_setup(200, 9);
  RecourseConfig cfg;
  cfg.lambda = 0.1;
  cfg.delta_set = PerturbationSet::norm_ball(2.0, 0.1);
  cfg.record_trace = false;
  const auto report = theorem2_report(s.model, s.train, s.instances, CostModel::l1(), cfg, 0.01, 1.0);
  std::ofstream("acceptance_cost_increment.json") << report.to_json().dump(2) << "\n";
  std::vector<double> slack;
  for (const auto& r : report.records) slack.push_back(r.slack);
  std::sort(slack.begin(), slack.end());
  auto q = [&](double p) { return slack.empty() ? 0.0 : slack[static_cast<std::size_t>(p * (slack.size() - 1))]; };
  std::cout << "INFO cost increment slack quantiles min/25/50/75/max: " << fmt(q(0)) << " " << fmt(q(0.25)) << " "
            << fmt(q(0.5)) << " " << fmt(q(0.75)) << " " << fmt(q(1.0)) << " (full list in acceptance_cost_increment.json)\n";
  const bool ordered = report.roar_avg_cost >= report.cfe_avg_cost - 1e-6;
  const double reference_gap = 4.03 - 3.93;
  const double gap = report.roar_avg_cost - report.cfe_avg_cost;
  std::cout << "INFO cost increment avg cost roar " << fmt(report.roar_avg_cost) << " vs cfe " << fmt(report.cfe_avg_cost)
            << " (roar >= cfe: " << (ordered ? "yes" : "no") << "); reference 4.03 vs 3.93, cost gap "
            << fmt(gap) << " vs " << fmt(reference_gap) << ", within 0.5: "
            << (std::abs(gap - reference_gap) <= 0.5 ? "yes" : "no") << "\n";
  return pass_if(!report.records.empty() && report.violation_rate <= 0.05,
                 "violation rate " + fmt(report.violation_rate) + " over " + std::to_string(report.records.size()) +
                     " instances (" + std::to_string(report.skipped) + " skipped), diameter " +
                     fmt(report.diameter));
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-8});
}

Outcome gradients() {
  std::mt19937 rng(505);
  double worst = 0.0;
  int probes = 0;
  auto probe = [&](const Model& m, const FeatureVector& x) {
    constexpr double h = 1e-5;
    Eigen::VectorXd fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      FeatureVector hi = x, lo = x;
      hi[i] += h;
      lo[i] -= h;
      fd[i] = (bce_from_score(score(m, hi), 1) - bce_from_score(score(m, lo), 1)) / (2 * h);
    }
    worst = std::max(worst, relative_error(input_gradient(m, x, 1), fd));
    ++probes;
  };
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index d = 1 + k % 6;
    probe(LinearModel(testing::random_vector(rng, d, -2, 2), 0.3), testing::random_vector(rng, d, -2, 2));
    const std::vector<int> layers{16, 8};
    probe(MlpModel::initialize(d, layers, static_cast<std::uint64_t>(k)), testing::random_vector(rng, d, -2, 2));
  }
  return pass_if(worst <= 1e-4, std::to_string(probes) + " probes (LR and MLP), max relative error " + fmt(worst));
}

Outcome german_credit() {
  const char* env = std::getenv("ROAR_GERMAN_DIR");
  const std::filesystem::path dir = env ? env : "data/german";
  if (!std::filesystem::exists(dir / "d1.csv") || !std::filesystem::exists(dir / "d2.csv") ||
      !std::filesystem::exists(dir / "schema.json")) {
    return {Outcome::Status::kSkip, "no data under " + dir.string() + " (set ROAR_GERMAN_DIR)"};
  }
  const nlohmann::json j = {{"data", {{"csv", {{"d1", (dir / "d1.csv").string()},
                                               {"d2", (dir / "d2.csv").string()},
                                               {"schema", (dir / "schema.json").string()}}}}},
                            {"standardize", true},
                            {"model", "lr"},
                            {"training", {{"learning_rate", 0.1}, {"epochs", 100}}},
                            {"methods", {"roar"}},
                            {"cost", "l1"},
                            {"delta_max", 0.1},
                            {"lambda", "auto"},
                            {"folds", 5},
                            {"seeds", {0}}};
  const auto report = run_shift_experiment(ExperimentSpec::from_json(j));
  const double v = report.method(Method::kRoar).m2_validity.mean;
  return pass_if(v >= 0.85, "ROAR M2 validity " + fmt(v) + " (reference 0.94 +- 0.08)");
}

}  // namespace

int main() {
  check("inner-max oracle equivalence", 10, inner_max_oracle);
  check("zero-radius reduction to CFE", 30, reduction);
  check("robust-validity certificate", 60, certificate);
  check("Gaussian invalidation formula vs Monte Carlo", 120, theorem1_exactness);
  check("lower bound in the safe regime", 60, theorem1_bound);
  check("remark probabilities vs Monte Carlo", 60, remarks);
  check("synthetic mean-shift robustness", 600, synthetic_sweep);
  check("M1 validity floor", 300, m1_floor);
  check("cost increment bound", 600, theorem2);
  check("gradient checks", 30, gradients);
  check("German credit correction shift", 600, german_credit);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
