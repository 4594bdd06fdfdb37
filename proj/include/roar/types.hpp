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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roar {

// An instance in (standardized or raw) feature space.
using FeatureVector = Eigen::VectorXd;

// Binary-labeled tabular data, one row per instance.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  Eigen::Index dim() const { return features.cols(); }
  FeatureVector row(std::size_t i) const {
    return features.row(static_cast<Eigen::Index>(i)).transpose();
  }

  Dataset subset(std::span<const std::size_t> indices) const;

  // Throws DataError on shape mismatch, non-finite features or labels
  // outside {0, 1}.
  void validate() const;
};

// Concatenate rows of datasets with the same dimension.
Dataset concat(std::span<const Dataset> parts);

void require_dim(const FeatureVector& x, Eigen::Index expected,
                 const char* what);
bool all_finite(const FeatureVector& x);

}  // namespace roar
