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

#include "roar/surrogate.hpp"

#include <cmath>

#include "roar/error.hpp"
#include "roar/random.hpp"

namespace roar {

void SurrogateConfig::validate(Eigen::Index dim) const {
  if (num_samples < 10 * dim) {
    throw InvalidArgument("surrogate sample count must be at least 10 * d");
  }
  if (!(scale > 0.0)) throw InvalidArgument("surrogate scale must be > 0");
  if (feature_scale.size() != 0) {
    require_dim(feature_scale, dim, "surrogate feature scale");
    if (!(feature_scale.array() > 0.0).all()) {
      throw InvalidArgument("surrogate feature scale must be positive");
    }
  }
  if (!(l2_penalty >= 0.0)) throw InvalidArgument("surrogate penalty must be >= 0");
}

namespace {

struct Neighbourhood {
  Eigen::MatrixXd offsets;  // n x d, normalised (z - x) / feature_scale
  Eigen::VectorXd weights;
  Eigen::VectorXd labels;
};

Neighbourhood sample_neighbourhood(const Model& model, const FeatureVector& x,
                                   const Eigen::VectorXd& feature_scale,
                                   double scale, double width, int count,
                                   std::uint64_t seed) {
  const Eigen::Index d = x.size();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Neighbourhood nb{Eigen::MatrixXd(count, d), Eigen::VectorXd(count),
                   Eigen::VectorXd(count)};
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd u(d);
    // The query point itself is the first neighbour.
    if (i == 0) {
      u.setZero();
    } else {
      for (Eigen::Index j = 0; j < d; ++j) u[j] = scale * normal(rng);
    }
    const FeatureVector z = x + u.cwiseProduct(feature_scale);
    nb.offsets.row(i) = u.transpose();
    nb.weights[i] = std::exp(-u.squaredNorm() / (width * width));
    nb.labels[i] = predict_label(model, z);
  }
  return nb;
}

// Newton's method on the penalised weighted logistic loss. Returns
// [slope; intercept] in normalised offset coordinates.
Eigen::VectorXd fit_weighted_logistic(const Neighbourhood& nb, double penalty) {
  const Eigen::Index n = nb.offsets.rows();
  const Eigen::Index d = nb.offsets.cols();
  Eigen::MatrixXd design(n, d + 1);
  design.leftCols(d) = nb.offsets;
  design.col(d).setOnes();
  const double total_weight = nb.weights.sum();
  const Eigen::VectorXd omega = nb.weights / total_weight;

  auto objective = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd s = design * beta;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      loss += omega[i] * bce_from_score(s[i], static_cast<int>(nb.labels[i]));
    }
    return loss + 0.5 * penalty * beta.head(d).squaredNorm();
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
  double current = objective(beta);
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd s = design * beta;
    Eigen::VectorXd residual(n), curvature(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(s[i]);
      residual[i] = omega[i] * (p - nb.labels[i]);
      curvature[i] = omega[i] * p * (1.0 - p);
    }
    Eigen::VectorXd grad = design.transpose() * residual;
    grad.head(d) += penalty * beta.head(d);
    Eigen::MatrixXd hessian = design.transpose() * curvature.asDiagonal() * design;
    hessian.topLeftCorner(d, d).diagonal().array() += penalty;
    hessian.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = hessian.ldlt().solve(grad);
    if (!step.allFinite()) throw NumericalError("surrogate fit diverged");

    double t = 1.0;
    Eigen::VectorXd candidate = beta - step;
    double next = objective(candidate);
    while (next > current && t > 1e-10) {
      t *= 0.5;
      candidate = beta - t * step;
      next = objective(candidate);
    }
    const double moved = (candidate - beta).cwiseAbs().maxCoeff();
    beta = candidate;
    current = next;
    if (moved < 1e-10) break;
  }
  return beta;
}

}  // namespace

LinearModel fit_local_linear(const Model& model, const FeatureVector& x,
                             const SurrogateConfig& config) {
  const Eigen::Index d = input_dim(model);
  require_dim(x, d, "fit_local_linear");
  if (!x.allFinite()) throw InvalidArgument("surrogate query point must be finite");
  config.validate(d);

  const Eigen::VectorXd feature_scale =
      config.feature_scale.size() == 0 ? Eigen::VectorXd::Ones(d) : config.feature_scale;
  const double width = config.kernel_width > 0.0
                           ? config.kernel_width
                           : 0.75 * std::sqrt(static_cast<double>(d));
  const int label_at_x = predict_label(model, x);

  int count = config.num_samples;
  for (int label_attempt = 0; label_attempt < 2; ++label_attempt) {
    Neighbourhood nb;
    bool varied = false;
    double scale = config.scale;
    for (int widen = 0; widen <= 3; ++widen) {
      nb = sample_neighbourhood(model, x, feature_scale, scale, width, count,
                                derive_seed(config.seed, 64 * label_attempt + widen));
      varied = (nb.labels.array() != nb.labels[0]).any();
      if (varied) break;
      scale *= 2.0;
    }
    if (!varied) throw NoRecourse("locally constant model");

    const Eigen::VectorXd beta = fit_weighted_logistic(nb, config.l2_penalty);
    // Back to the original coordinates: score(z) = beta^T (z - x) / fs + beta0.
    const Eigen::VectorXd slope = beta.head(d).cwiseQuotient(feature_scale);
    const double intercept = beta[d] - slope.dot(x);
    LinearModel surrogate(slope, intercept);
    if (predict_label(Model(surrogate), x) == label_at_x) return surrogate;
    count *= 2;
  }
  throw NoRecourse("surrogate disagrees with the model at the query point");
}

}  // namespace roar
