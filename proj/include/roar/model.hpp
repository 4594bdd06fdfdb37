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
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "roar/types.hpp"

namespace roar {

struct TrainingConfig {
  double learning_rate = 1e-3;
  int epochs = 100;
  // Mini-batch size for the MLP. Logistic regression is trained full-batch.
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

// f(x) = sigmoid(w^T x + b).
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(Eigen::VectorXd weights, double intercept);

  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  Eigen::Index dim() const { return weights_.size(); }

  double score(const FeatureVector& x) const;

  // [w; b], matching the augmented instance [x; 1].
  Eigen::VectorXd augmented_weights() const;

 private:
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
};

// Feed-forward network: rectifier hidden layers, one logit output.
class MlpModel {
 public:
  struct Layer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
  };

  MlpModel() = default;
  explicit MlpModel(std::vector<Layer> layers);

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  static MlpModel initialize(Eigen::Index input_dim,
                             std::span<const int> hidden_sizes,
                             std::uint64_t seed);

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  Eigen::Index dim() const;

  double score(const FeatureVector& x) const;
  // d score / d x. The rectifier derivative at exactly 0 is taken as 0.
  Eigen::VectorXd score_gradient(const FeatureVector& x) const;

 private:
  std::vector<Layer> layers_;
};

using Model = std::variant<LinearModel, MlpModel>;

double sigmoid(double z);
// Binary cross-entropy of sigmoid(score) against target, computed stably.
double bce_from_score(double score, int target);

Eigen::Index input_dim(const Model& model);
double score(const Model& model, const FeatureVector& x);
double predict_proba(const Model& model, const FeatureVector& x);
// 1 iff score > 0, i.e. probability strictly above 0.5.
int predict_label(const Model& model, const FeatureVector& x);
// Gradient of bce(model(x), target) with respect to x.
Eigen::VectorXd input_gradient(const Model& model, const FeatureVector& x,
                               int target);

double mean_bce(const Model& model, const Dataset& data);
double accuracy(const Model& model, const Dataset& data);

// Full-batch Adam on mean binary cross-entropy. If loss_trace is non-null it
// receives the mean training loss after every epoch.
LinearModel train_logistic(const Dataset& data, const TrainingConfig& config,
                           std::vector<double>* loss_trace = nullptr);

MlpModel train_mlp(const Dataset& data, const TrainingConfig& config,
                   std::span<const int> hidden_sizes);

}  // namespace roar
