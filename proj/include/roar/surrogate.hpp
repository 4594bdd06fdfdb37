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

#include <Eigen/Dense>

#include "roar/model.hpp"

namespace roar {

struct SurrogateConfig {
  int num_samples = 1000;
  // Neighbours are drawn from Normal(x, (scale * feature_scale)^2).
  double scale = 1.0;
  // Per-feature spread (e.g. training-set standard deviations). Empty means
  // all ones, which is right for standardized features.
  Eigen::VectorXd feature_scale;
  // Kernel width on feature_scale-normalised distances; <= 0 selects
  // 0.75 * sqrt(d).
  double kernel_width = 0.0;
  // L2 penalty on the surrogate slope. Hard-labelled neighbours are
  // separable, so some penalty is needed for the fit to exist.
  double l2_penalty = 1e-2;
  std::uint64_t seed = 0;

  void validate(Eigen::Index dim) const;
};

// Weighted logistic regression on model-labelled neighbours of x, with
// exponential kernel weights exp(-|z - x|^2 / width^2). The surrogate's
// label at x always matches the model's label at x.
//
// Throws Error(kNoRecourse) "locally constant model" when every neighbour
// shares a label after widening the sampling scale three times.
LinearModel fit_local_linear(const Model& model, const FeatureVector& x,
                             const SurrogateConfig& config);

}  // namespace roar
