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
#include <vector>

#include <Eigen/Dense>

#include "roar/types.hpp"

namespace roar {

// c(x, x') for recourse effort. L1 is sum |x'_i - x_i|; PFC is the same sum
// weighted per feature by non-negative Bradley-Terry derived weights.
class CostModel {
 public:
  enum class Variant { kL1, kPfc };

  static CostModel l1();
  static CostModel pfc(Eigen::VectorXd weights);

  Variant variant() const { return variant_; }
  // Empty for L1.
  const Eigen::VectorXd& weights() const { return weights_; }
  double feature_weight(Eigen::Index i) const;

  double cost(const FeatureVector& x, const FeatureVector& x2) const;
  // Subgradient of cost(x, x2) in x2; |.| has subgradient 0 at 0.
  Eigen::VectorXd gradient(const FeatureVector& x,
                           const FeatureVector& x2) const;

 private:
  CostModel() = default;
  Variant variant_ = Variant::kL1;
  Eigen::VectorXd weights_;
};

struct PairwiseComparison {
  int feature_i = 0;
  int feature_j = 0;
  long wins_i = 0;
  long total = 0;
};

struct PairwiseComparisonSet {
  int num_features = 0;
  std::vector<PairwiseComparison> pairs;

  // wins <= total, total > 0, indices in range and distinct.
  void validate() const;
};

struct BradleyTerryOptions {
  double relative_tolerance = 1e-8;
  int max_iterations = 100000;
  // Strength ratios are capped here when the MLE diverges (a feature that
  // wins or loses every comparison).
  double strength_clip = 1e6;
  bool record_log_likelihood = false;
};

struct BradleyTerryFit {
  // Maximum-likelihood strengths normalised to mean 1, before the min shift.
  Eigen::VectorXd strengths;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood;  // per iteration, if requested
};

// Minorization-maximization (Hunter 2004) for P(i beats j) = s_i / (s_i + s_j).
BradleyTerryFit bradley_terry_strengths(const PairwiseComparisonSet& comparisons,
                                        const BradleyTerryOptions& options = {});

double bradley_terry_log_likelihood(const PairwiseComparisonSet& comparisons,
                                    const Eigen::VectorXd& strengths);

// PFC cost model: strengths shifted by their minimum.
CostModel fit_bradley_terry(const PairwiseComparisonSet& comparisons,
                            const BradleyTerryOptions& options = {});

// Every unordered feature pair compared `per_pair` times, i winning each
// comparison independently with probability `p_first`.
PairwiseComparisonSet simulate_comparisons(int num_features, int per_pair,
                                           std::uint64_t seed,
                                           double p_first = 0.5);

// CSV with header feature_i,feature_j,wins_i,total (zero-based indices).
PairwiseComparisonSet read_comparisons_csv(const std::filesystem::path& path,
                                           int num_features);
std::string comparisons_to_csv(const PairwiseComparisonSet& comparisons);

}  // namespace roar
