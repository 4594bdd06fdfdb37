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

#include "roar/types.hpp"

#include <cmath>
#include <string>

#include "roar/error.hpp"
#include "roar/parallel.hpp"

namespace roar {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), dim());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw InvalidArgument("subset index out of range");
    out.features.row(static_cast<Eigen::Index>(r)) =
        features.row(static_cast<Eigen::Index>(indices[r]));
    out.labels.push_back(labels[indices[r]]);
  }
  return out;
}

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DataError("feature rows and labels disagree in length");
  }
  if (!feature_names.empty() &&
      feature_names.size() != static_cast<std::size_t>(features.cols())) {
    throw DataError("feature name count does not match feature columns");
  }
  if (!features.allFinite()) throw DataError("non-finite feature value");
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
  }
}

Dataset concat(std::span<const Dataset> parts) {
  Dataset out;
  if (parts.empty()) return out;
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.dim() != parts.front().dim()) {
      throw InvalidArgument("cannot concatenate datasets of different dimension");
    }
    rows += p.features.rows();
  }
  out.feature_names = parts.front().feature_names;
  out.features.resize(rows, parts.front().dim());
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.features.middleRows(at, p.features.rows()) = p.features;
    at += p.features.rows();
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
  }
  return out;
}

void require_dim(const FeatureVector& x, Eigen::Index expected,
                 const char* what) {
  if (x.size() != expected) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (got " +
                          std::to_string(x.size()) + ", expected " +
                          std::to_string(expected) + ")");
  }
}

bool all_finite(const FeatureVector& x) { return x.allFinite(); }

namespace {
int g_worker_count = 0;
}

void set_worker_count(int workers) { g_worker_count = workers < 0 ? 0 : workers; }

int worker_count() {
  return g_worker_count > 0 ? g_worker_count : omp_get_max_threads();
}

}  // namespace roar
