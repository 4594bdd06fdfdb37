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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "roar/cost.hpp"
#include "roar/error.hpp"
#include "support.hpp"

namespace roar {
namespace {

PairwiseComparisonSet two_features(long wins_a, long total) {
  return {2, {{0, 1, wins_a, total}}};
}

TEST(Cost, L1Basics) {
  const CostModel c = CostModel::l1();
  EXPECT_EQ(c.cost(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2)), 0.0);
  EXPECT_DOUBLE_EQ(c.cost(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, -2)), 3.0);
}

TEST(Cost, PfcWeightedSum) {
  const CostModel c = CostModel::pfc(Eigen::Vector2d(2, 0.5));
  EXPECT_DOUBLE_EQ(c.cost(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)), 2.5);
}

TEST(Cost, RejectsBadWeights) {
  EXPECT_THROW(CostModel::pfc(Eigen::Vector2d(-1, 1)), Error);
  EXPECT_THROW(CostModel::pfc(Eigen::VectorXd()), Error);
}

TEST(Cost, SubgradientIsZeroAtIdentity) {
  const CostModel c = CostModel::pfc(Eigen::Vector3d(1, 2, 3));
  const FeatureVector x = Eigen::Vector3d(1, 1, 1);
  EXPECT_EQ(c.gradient(x, x), Eigen::VectorXd::Zero(3));
  EXPECT_EQ(c.gradient(x, Eigen::Vector3d(2, 0, 1)), Eigen::Vector3d(1, -2, 0));
}

TEST(Cost, NonnegativeAndTriangle) {
  std::mt19937 rng(1);
  const CostModel costs[] = {CostModel::l1(), CostModel::pfc(Eigen::Vector4d(0.0, 0.5, 1.0, 3.0))};
  for (const auto& c : costs) {
    for (int k = 0; k < 200; ++k) {
      const auto x = testing::random_vector(rng, 4, -5, 5);
      const auto y = testing::random_vector(rng, 4, -5, 5);
      const auto z = testing::random_vector(rng, 4, -5, 5);
      EXPECT_GE(c.cost(x, y), 0.0);
      EXPECT_EQ(c.cost(x, x), 0.0);
      EXPECT_LE(c.cost(x, z), c.cost(x, y) + c.cost(y, z) + 1e-12);
    }
  }
}

TEST(BradleyTerry, EvenSplitGivesZeroWeights) {
  const CostModel c = fit_bradley_terry(two_features(100, 200));
  EXPECT_NEAR(c.weights()[0], 0.0, 1e-12);
  EXPECT_NEAR(c.weights()[1], 0.0, 1e-12);
}

TEST(BradleyTerry, TwoItemRatioMatchesClosedForm) {
  // Two-item MLE: s_A / s_B = p / (1 - p).
  const double p = 150.0 / 200.0;
  const double oracle = p / (1.0 - p);
  EXPECT_DOUBLE_EQ(oracle, 3.0);
  const auto fit = bradley_terry_strengths(two_features(150, 200));
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.strengths[0] / fit.strengths[1], oracle, 1e-6);
  EXPECT_NEAR(fit.strengths.mean(), 1.0, 1e-12);
}

TEST(BradleyTerry, SymmetricCycleGivesEqualWeights) {
  const PairwiseComparisonSet s{3, {{0, 1, 100, 200}, {1, 2, 100, 200}, {0, 2, 100, 200}}};
  const CostModel c = fit_bradley_terry(s);
  EXPECT_NEAR(c.weights()[0], c.weights()[1], 1e-9);
  EXPECT_NEAR(c.weights()[1], c.weights()[2], 1e-9);
}

TEST(BradleyTerry, LikelihoodNeverDecreases) {
  const PairwiseComparisonSet s{4, {{0, 1, 120, 200}, {0, 2, 90, 200}, {0, 3, 150, 200},
                                    {1, 2, 70, 200}, {1, 3, 110, 200}, {2, 3, 160, 200}}};
  BradleyTerryOptions o;
  o.record_log_likelihood = true;
  const auto fit = bradley_terry_strengths(s, o);
  ASSERT_GT(fit.log_likelihood.size(), 2u);
  for (std::size_t k = 1; k < fit.log_likelihood.size(); ++k) {
    EXPECT_GE(fit.log_likelihood[k], fit.log_likelihood[k - 1] - 1e-12) << "iteration " << k;
  }
}

TEST(BradleyTerry, MajorityWinnerIsStronger) {
  const PairwiseComparisonSet s{3, {{0, 1, 130, 200}, {0, 2, 100, 200}, {1, 2, 100, 200}}};
  const auto fit = bradley_terry_strengths(s);
  EXPECT_GT(fit.strengths[0], fit.strengths[1]);
}

TEST(BradleyTerry, AlwaysWinnerIsClipped) {
  const auto fit = bradley_terry_strengths(two_features(200, 200));
  EXPECT_TRUE(std::isfinite(fit.strengths[0]));
  EXPECT_GT(fit.strengths[0], fit.strengths[1]);
}

TEST(BradleyTerry, DisconnectedGraphRejected) {
  const PairwiseComparisonSet s{4, {{0, 1, 10, 20}, {2, 3, 10, 20}}};
  EXPECT_THROW(bradley_terry_strengths(s), Error);
}

TEST(Comparisons, SimulationIsSeededAndCsvRoundTrips) {
  const auto a = simulate_comparisons(4, 200, 3);
  const auto b = simulate_comparisons(4, 200, 3);
  ASSERT_EQ(a.pairs.size(), 6u);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    EXPECT_EQ(a.pairs[k].wins_i, b.pairs[k].wins_i);
    EXPECT_EQ(a.pairs[k].total, 200);
  }
  const auto path = std::filesystem::temp_directory_path() / "roar_cmp_roundtrip.csv";
  std::ofstream(path) << comparisons_to_csv(a);
  const auto back = read_comparisons_csv(path, 4);
  std::filesystem::remove(path);
  ASSERT_EQ(back.pairs.size(), a.pairs.size());
  for (std::size_t k = 0; k < a.pairs.size(); ++k) EXPECT_EQ(back.pairs[k].wins_i, a.pairs[k].wins_i);
}

TEST(Comparisons, InvalidRowsRejected) {
  EXPECT_THROW((PairwiseComparisonSet{2, {{0, 0, 1, 2}}}.validate()), Error);
  EXPECT_THROW((PairwiseComparisonSet{2, {{0, 1, 3, 2}}}.validate()), Error);
  EXPECT_THROW((PairwiseComparisonSet{2, {{0, 1, 0, 0}}}.validate()), Error);
}

}  // namespace
}  // namespace roar
