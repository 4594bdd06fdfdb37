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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "roar/error.hpp"
#include "roar/model.hpp"
#include "roar/model_io.hpp"
#include "support.hpp"

namespace roar {
namespace {

using testing::strong_training;
using testing::synthetic;

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-8});
  return (a - b).norm() / scale;
}

Eigen::VectorXd central_difference(const Model& model, const FeatureVector& x, int target) {
  constexpr double h = 1e-5;
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    FeatureVector hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (bce_from_score(score(model, hi), target) - bce_from_score(score(model, lo), target)) / (2 * h);
  }
  return g;
}

// Four clusters at (+-2, +-2) labelled by the XOR of the coordinate signs.
Dataset xor_clusters(std::size_t per_cluster, std::uint64_t seed) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::normal_distribution<double> noise(0.0, 0.4);
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(4 * per_cluster), 2);
  d.feature_names = {"x0", "x1"};
  Eigen::Index r = 0;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (std::size_t k = 0; k < per_cluster; ++k, ++r) {
        d.features(r, 0) = 2.0 * sx + noise(rng);
        d.features(r, 1) = 2.0 * sy + noise(rng);
        d.labels.push_back(sx * sy > 0 ? 1 : 0);
      }
    }
  }
  return d;
}

// Best accuracy of any half-plane, scanning 360 directions and every
// projected data point as a threshold.
double best_linear_accuracy(const Dataset& d) {
  double best = 0.0;
  for (int a = 0; a < 360; ++a) {
    const double t = a * M_PI / 180.0;
    const Eigen::Vector2d n(std::cos(t), std::sin(t));
    const Eigen::VectorXd proj = d.features * n;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
      int correct = 0;
      for (Eigen::Index i = 0; i < proj.size(); ++i) {
        correct += (proj[i] > proj[k]) == (d.labels[static_cast<std::size_t>(i)] == 1);
      }
      best = std::max(best, static_cast<double>(correct) / static_cast<double>(proj.size()));
    }
  }
  return best;
}

TEST(LinearModel, ProbabilityAtZeroScoreIsHalf) {
  const LinearModel m(Eigen::Vector2d(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(predict_proba(m, Eigen::Vector2d(0, 0)), 0.5);
  EXPECT_EQ(predict_label(m, Eigen::Vector2d(0, 0)), 0);
}

TEST(LinearModel, SigmoidOfScore) {
  const LinearModel m(Eigen::Vector2d(1, 0), 0.0);
  EXPECT_NEAR(predict_proba(m, Eigen::Vector2d(2, 0)), 0.8807970779778823, 1e-12);
}

TEST(LinearModel, WrongLengthThrows) {
  const Model m = LinearModel(Eigen::Vector2d(1, 0), 0.0);
  EXPECT_THROW(predict_proba(m, Eigen::Vector3d(1, 2, 3)), Error);
}

TEST(LinearModel, GradientClosedForm) {
  const LinearModel lm(Eigen::Vector3d(0.5, -1.0, 2.0), 0.3);
  const FeatureVector x = Eigen::Vector3d(0.2, 0.1, -0.4);
  const double s = lm.score(x);
  const Eigen::VectorXd expected = -(1.0 - 1.0 / (1.0 + std::exp(-s))) * lm.weights();
  EXPECT_LT((input_gradient(lm, x, 1) - expected).norm(), 1e-12);
}

TEST(LinearModel, TrainsToBayesAccuracyAndSymmetricNormal) {
  const Dataset train = synthetic(1000, 1);
  const Dataset test = synthetic(1000, 2);
  const LinearModel m = train_logistic(train, strong_training());
  EXPECT_GE(accuracy(m, test), 0.999);
  const double cosine = m.weights().normalized().dot(Eigen::Vector2d(1, 1).normalized());
  EXPECT_GE(cosine, 0.99);
}

TEST(LinearModel, DegenerateLabelsRejected) {
  Dataset d = synthetic(20, 3);
  std::fill(d.labels.begin(), d.labels.end(), 0);
  try {
    train_logistic(d, strong_training());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "degenerate labels");
  }
}

TEST(LinearModel, TrainingIsDeterministic) {
  const Dataset d = synthetic(300, 4);
  const LinearModel a = train_logistic(d, strong_training(7));
  const LinearModel b = train_logistic(d, strong_training(7));
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.intercept(), b.intercept());
}

TEST(LinearModel, FullBatchLossIsMonotone) {
  const Dataset d = synthetic(500, 5);
  TrainingConfig c = strong_training();
  c.learning_rate = 0.01;
  std::vector<double> trace;
  train_logistic(d, c, &trace);
  ASSERT_EQ(trace.size(), static_cast<std::size_t>(c.epochs));
  for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_LE(trace[k], trace[k - 1] + 1e-6) << "epoch " << k;
}

TEST(Mlp, FitsSyntheticTask) {
  const Dataset train = synthetic(1000, 6);
  const Dataset test = synthetic(1000, 7);
  TrainingConfig c;
  c.learning_rate = 0.01;
  c.epochs = 20;
  const std::vector<int> layers{8, 8};
  const MlpModel m = train_mlp(train, c, layers);
  EXPECT_GE(accuracy(m, test), 0.99);
}

TEST(Mlp, SolvesXorWhereLinearCannot) {
  const Dataset d = xor_clusters(50, 8);
  const double linear_ceiling = best_linear_accuracy(d);
  // A line separates at most three of the four clusters.
  EXPECT_LE(linear_ceiling, 0.8);

  TrainingConfig c;
  c.learning_rate = 0.01;
  c.epochs = 300;
  c.batch_size = 16;
  const std::vector<int> layers{8, 8};
  EXPECT_GE(accuracy(train_mlp(d, c, layers), d), 0.95);
  EXPECT_LE(accuracy(train_logistic(d, strong_training()), d), 0.6);
}

TEST(Mlp, ZeroEpochsKeepsInitialization) {
  const Dataset d = synthetic(100, 9);
  TrainingConfig c;
  c.epochs = 0;
  c.seed = 11;
  const std::vector<int> layers{8, 8};
  const MlpModel trained = train_mlp(d, c, layers);
  const MlpModel init = MlpModel::initialize(2, layers, 11);
  ASSERT_EQ(trained.layers().size(), init.layers().size());
  for (std::size_t l = 0; l < init.layers().size(); ++l) {
    EXPECT_EQ(trained.layers()[l].weights, init.layers()[l].weights);
    EXPECT_EQ(trained.layers()[l].bias, init.layers()[l].bias);
  }
  const Standardizer s = Standardizer::fit(d);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_NEAR(predict_proba(trained, s.standardize(d.row(i))), 0.5, 0.25);
  }
}

TEST(Mlp, ZeroWeightsGiveZeroGradient) {
  std::vector<MlpModel::Layer> layers{{Eigen::MatrixXd::Zero(4, 3), Eigen::VectorXd::Zero(4)},
                                      {Eigen::MatrixXd::Zero(1, 4), Eigen::VectorXd::Zero(1)}};
  const Model m = MlpModel(layers);
  EXPECT_EQ(input_gradient(m, Eigen::Vector3d(0.3, -1, 2), 1), Eigen::VectorXd::Zero(3));
}

TEST(Gradients, MatchFiniteDifferences) {
  std::mt19937 rng(12);
  int probes = 0;
  for (int k = 0; k < 50; ++k, ++probes) {
    const Eigen::Index d = 1 + k % 5;
    const Model lm = LinearModel(testing::random_vector(rng, d, -2, 2), testing::random_vector(rng, 1)[0]);
    const FeatureVector x = testing::random_vector(rng, d, -2, 2);
    EXPECT_LE(relative_error(input_gradient(lm, x, 1), central_difference(lm, x, 1)), 1e-4);
    EXPECT_LE(relative_error(input_gradient(lm, x, 0), central_difference(lm, x, 0)), 1e-4);
  }
  for (int k = 0; k < 50; ++k, ++probes) {
    const Eigen::Index d = 1 + k % 4;
    const std::vector<int> layers{6, 5};
    const Model mlp = MlpModel::initialize(d, layers, 100 + static_cast<std::uint64_t>(k));
    const FeatureVector x = testing::random_vector(rng, d, -2, 2);
    EXPECT_LE(relative_error(input_gradient(mlp, x, 1), central_difference(mlp, x, 1)), 1e-4);
  }
  EXPECT_GE(probes, 100);
}

TEST(ModelIo, RoundTripsBothFamilies) {
  const Model lm = LinearModel(Eigen::Vector2d(0.1, -3.5), 0.25);
  const Model back = model_from_json(model_to_json(lm));
  EXPECT_EQ(std::get<LinearModel>(back).weights(), std::get<LinearModel>(lm).weights());
  EXPECT_EQ(std::get<LinearModel>(back).intercept(), 0.25);

  const std::vector<int> layers{3};
  const Model mlp = MlpModel::initialize(2, layers, 5);
  const Model mlp_back = model_from_json(model_to_json(mlp));
  const FeatureVector x = Eigen::Vector2d(0.7, -0.2);
  EXPECT_EQ(score(mlp, x), score(mlp_back, x));
}

TEST(ModelIo, MalformedDocumentThrows) {
  EXPECT_THROW(model_from_json({{"kind", "tree"}}), Error);
  EXPECT_THROW(model_from_json({{"kind", "linear"}, {"weights", {1.0}}}), Error);
}

}  // namespace
}  // namespace roar
