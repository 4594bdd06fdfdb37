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
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "roar/recourse.hpp"
#include "roar/types.hpp"

namespace roar {

// Class-conditional Gaussian N(mean, covariance).
struct GaussianClassSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  // Throws InvalidArgument unless covariance is square, symmetric and
  // positive definite with a matching mean.
  void validate() const;
};

// Shift applied to class 0 only: mean + [alpha, 0, ..., 0], covariance
// scaled by (1 + beta).
struct ShiftSpec {
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const;
};

GaussianClassSpec apply_shift(const GaussianClassSpec& class0, const ShiftSpec& shift);

// Labels ~ Bernoulli(class1_prob), features from the class-conditional
// Gaussian via its Cholesky factor.
Dataset generate_synthetic(std::size_t n, const GaussianClassSpec& class0,
                           const GaussianClassSpec& class1, std::uint64_t seed,
                           double class1_prob = 0.5);

// Per-feature affine map to zero mean and unit variance.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population standard deviation, > 0

  // Constant features keep scale 1 so they pass through shifted only.
  static Standardizer fit(const Dataset& data);

  FeatureVector standardize(const FeatureVector& x) const;
  FeatureVector destandardize(const FeatureVector& z) const;
  Dataset apply(const Dataset& data) const;

  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);
};

struct FeatureSchema {
  std::string name;
  bool is_mutable = true;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct DatasetSchema {
  std::vector<FeatureSchema> features;
  std::string label;
  // When present, load_csv standardizes with these statistics.
  std::optional<Standardizer> standardizer;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(features.size()); }
  void validate() const;

  // Actionability in the units of the data handed to the recourse engine:
  // bounds are mapped through `standardizer` when one is given.
  ActionabilitySpec actionability(const Standardizer* standardizer = nullptr) const;

  // {"features": [{"name", "mutable", "min", "max"}], "label": name}
  // Missing min/max mean unbounded; "mutable" defaults to true.
  static DatasetSchema from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

DatasetSchema load_schema(const std::filesystem::path& path);

// Comma-separated file with a header row. Columns are matched by name;
// extra columns are ignored. Throws DataError naming the missing column,
// or the 1-based data row and column of an unparseable value.
Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema);
Dataset parse_csv(const std::string& text, const DatasetSchema& schema);
std::string dataset_to_csv(const Dataset& data, const std::string& label_name = "label");

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};

// Shuffled k-fold partition; holdout sizes differ by at most one and the
// larger folds come first.
std::vector<Fold> kfold_split(std::size_t n, int k, std::uint64_t seed);

}  // namespace roar
