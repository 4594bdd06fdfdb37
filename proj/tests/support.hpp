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

// Shared fixtures and independent oracles. Nothing here calls into the
// library code it is used to check.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "roar/datagen.hpp"
#include "roar/model.hpp"

namespace roar::testing {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double logistic_loss(double margin) { return std::log1p(std::exp(-margin)); }

inline GaussianClassSpec class0_default() {
  return {Eigen::Vector2d(-2.0, -2.0), 0.5 * Eigen::Matrix2d::Identity()};
}

inline GaussianClassSpec class1_default() {
  return {Eigen::Vector2d(2.0, 2.0), 0.5 * Eigen::Matrix2d::Identity()};
}

inline Dataset synthetic(std::size_t n, std::uint64_t seed, double alpha = 0.0) {
  return generate_synthetic(n, apply_shift(class0_default(), {alpha, 0.0}), class1_default(), seed);
}

// Training settings that give |w| around 2 on the default synthetic data.
inline TrainingConfig strong_training(std::uint64_t seed = 0) {
  TrainingConfig c;
  c.learning_rate = 0.1;
  c.epochs = 100;
  c.seed = seed;
  return c;
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, Eigen::Index n, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Random symmetric positive definite matrix A A^T / d + 0.2 I.
inline Eigen::MatrixXd random_spd(std::mt19937& rng, Eigen::Index d) {
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) a.col(j) = random_vector(rng, d);
  Eigen::MatrixXd s = a * a.transpose() / static_cast<double>(d) + 0.2 * Eigen::MatrixXd::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

// Monte Carlo for P(w^T x > 0, (w + delta)^T x <= 0), x ~ N(mu, sigma),
// with its own engine and Cholesky sampler.
struct OracleEstimate {
  double p = 0.0;
  double se = 0.0;
};

inline OracleEstimate oracle_region_mc(const Eigen::VectorXd& w, const Eigen::VectorXd& delta,
                                       const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                       long long n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const Eigen::MatrixXd l = sigma.llt().matrixL();
  const Eigen::VectorXd v = w + delta;
  long long hits = 0;
  Eigen::VectorXd e(mu.size());
  for (long long k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = z(rng);
    const Eigen::VectorXd x = mu + l * e;
    hits += (w.dot(x) > 0.0 && v.dot(x) <= 0.0);
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(n))};
}

}  // namespace roar::testing
