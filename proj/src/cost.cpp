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

#include "roar/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <string>

#include "roar/error.hpp"
#include "roar/random.hpp"

namespace roar {

CostModel CostModel::l1() { return CostModel(); }

CostModel CostModel::pfc(Eigen::VectorXd weights) {
  if (weights.size() == 0) throw InvalidArgument("PFC cost needs feature weights");
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw InvalidArgument("PFC weights must be finite and non-negative");
  }
  CostModel model;
  model.variant_ = Variant::kPfc;
  model.weights_ = std::move(weights);
  return model;
}

double CostModel::feature_weight(Eigen::Index i) const {
  return variant_ == Variant::kL1 ? 1.0 : weights_[i];
}

double CostModel::cost(const FeatureVector& x, const FeatureVector& x2) const {
  require_dim(x2, x.size(), "cost");
  if (variant_ == Variant::kPfc) require_dim(x, weights_.size(), "cost");
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    total += feature_weight(i) * std::abs(x2[i] - x[i]);
  }
  return total;
}

Eigen::VectorXd CostModel::gradient(const FeatureVector& x,
                                    const FeatureVector& x2) const {
  require_dim(x2, x.size(), "cost gradient");
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double diff = x2[i] - x[i];
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    g[i] = feature_weight(i) * sign;
  }
  return g;
}

void PairwiseComparisonSet::validate() const {
  if (num_features < 1) throw DataError("comparison set needs at least one feature");
  for (const auto& p : pairs) {
    if (p.feature_i < 0 || p.feature_i >= num_features || p.feature_j < 0 ||
        p.feature_j >= num_features || p.feature_i == p.feature_j) {
      throw DataError("comparison refers to an invalid feature pair");
    }
    if (p.total <= 0) throw DataError("comparison total must be positive");
    if (p.wins_i < 0 || p.wins_i > p.total) {
      throw DataError("comparison wins must lie in [0, total]");
    }
  }
}

namespace {

void require_connected(const PairwiseComparisonSet& set) {
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(set.num_features));
  for (const auto& p : set.pairs) {
    adjacency[static_cast<std::size_t>(p.feature_i)].push_back(p.feature_j);
    adjacency[static_cast<std::size_t>(p.feature_j)].push_back(p.feature_i);
  }
  std::vector<bool> seen(adjacency.size(), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adjacency[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        frontier.push(v);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DataError("comparison graph is disconnected");
  }
}

void normalize_mean_one(Eigen::VectorXd& s) { s /= s.mean(); }

}  // namespace

double bradley_terry_log_likelihood(const PairwiseComparisonSet& comparisons,
                                    const Eigen::VectorXd& s) {
  double ll = 0.0;
  for (const auto& p : comparisons.pairs) {
    const double si = s[p.feature_i];
    const double sj = s[p.feature_j];
    const double denom = std::log(si + sj);
    const long wins_j = p.total - p.wins_i;
    if (p.wins_i > 0) ll += static_cast<double>(p.wins_i) * (std::log(si) - denom);
    if (wins_j > 0) ll += static_cast<double>(wins_j) * (std::log(sj) - denom);
  }
  return ll;
}

BradleyTerryFit bradley_terry_strengths(const PairwiseComparisonSet& comparisons,
                                        const BradleyTerryOptions& options) {
  comparisons.validate();
  require_connected(comparisons);
  const Eigen::Index k = comparisons.num_features;

  Eigen::VectorXd wins = Eigen::VectorXd::Zero(k);
  for (const auto& p : comparisons.pairs) {
    wins[p.feature_i] += static_cast<double>(p.wins_i);
    wins[p.feature_j] += static_cast<double>(p.total - p.wins_i);
  }

  const double lo = 1.0 / options.strength_clip;
  const double hi = options.strength_clip;
  BradleyTerryFit fit;
  fit.strengths = Eigen::VectorXd::Ones(k);
  if (options.record_log_likelihood) {
    fit.log_likelihood.push_back(bradley_terry_log_likelihood(comparisons, fit.strengths));
  }

  Eigen::VectorXd denom(k);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    denom.setZero();
    for (const auto& p : comparisons.pairs) {
      const double share = static_cast<double>(p.total) /
                           (fit.strengths[p.feature_i] + fit.strengths[p.feature_j]);
      denom[p.feature_i] += share;
      denom[p.feature_j] += share;
    }
    Eigen::VectorXd next = wins.cwiseQuotient(denom);
    normalize_mean_one(next);
    next = next.cwiseMax(lo).cwiseMin(hi);

    const double change =
        ((next - fit.strengths).cwiseAbs().array() / fit.strengths.array()).maxCoeff();
    fit.strengths = next;
    fit.iterations = iter;
    if (options.record_log_likelihood) {
      fit.log_likelihood.push_back(bradley_terry_log_likelihood(comparisons, fit.strengths));
    }
    if (change < options.relative_tolerance) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

CostModel fit_bradley_terry(const PairwiseComparisonSet& comparisons,
                            const BradleyTerryOptions& options) {
  const BradleyTerryFit fit = bradley_terry_strengths(comparisons, options);
  if (!fit.converged) throw NumericalError("Bradley-Terry fit did not converge");
  Eigen::VectorXd weights = fit.strengths.array() - fit.strengths.minCoeff();
  return CostModel::pfc(std::move(weights));
}

PairwiseComparisonSet simulate_comparisons(int num_features, int per_pair,
                                           std::uint64_t seed, double p_first) {
  if (num_features < 2) throw InvalidArgument("need at least two features to compare");
  if (per_pair < 1) throw InvalidArgument("comparisons per pair must be >= 1");
  Rng rng(derive_seed(seed, 0x33));
  std::bernoulli_distribution first_wins(p_first);
  PairwiseComparisonSet set;
  set.num_features = num_features;
  for (int i = 0; i < num_features; ++i) {
    for (int j = i + 1; j < num_features; ++j) {
      long wins = 0;
      for (int t = 0; t < per_pair; ++t) wins += first_wins(rng) ? 1 : 0;
      set.pairs.push_back({i, j, wins, per_pair});
    }
  }
  return set;
}

PairwiseComparisonSet read_comparisons_csv(const std::filesystem::path& path,
                                           int num_features) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open comparisons file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty comparisons file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "feature_i,feature_j,wins_i,total") {
    throw DataError("comparisons header must be feature_i,feature_j,wins_i,total");
  }
  PairwiseComparisonSet set;
  set.num_features = num_features;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    PairwiseComparison p;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> p.feature_i >> c1 >> p.feature_j >> c2 >> p.wins_i >> c3 >> p.total) ||
        c1 != ',' || c2 != ',' || c3 != ',') {
      throw DataError("unparseable comparison at row " + std::to_string(row));
    }
    set.pairs.push_back(p);
  }
  set.validate();
  return set;
}

std::string comparisons_to_csv(const PairwiseComparisonSet& comparisons) {
  std::ostringstream out;
  out << "feature_i,feature_j,wins_i,total\n";
  for (const auto& p : comparisons.pairs) {
    out << p.feature_i << ',' << p.feature_j << ',' << p.wins_i << ',' << p.total << '\n';
  }
  return out.str();
}

}  // namespace roar
