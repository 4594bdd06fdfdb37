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
#include <optional>
#include <variant>

#include <Eigen/Dense>

#include "roar/model.hpp"
#include "roar/parallel.hpp"

namespace roar {

// x ~ N(mean, covariance) against a bias-free linear score w^T x and its
// shifted counterpart (w + delta)^T x. The eigendecomposition
// covariance = U D U^T is computed once at construction.
class GaussianTheoryInput {
 public:
  GaussianTheoryInput(Eigen::VectorXd w, Eigen::VectorXd delta, Eigen::VectorXd mean,
                      Eigen::MatrixXd covariance);

  const Eigen::VectorXd& w() const { return w_; }
  const Eigen::VectorXd& delta() const { return delta_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }   // D
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; } // U
  Eigen::Index dim() const { return w_.size(); }

  // |sqrt(D) U^T v|, the standard deviation of v^T x.
  double projected_scale(const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd w_, delta_, mean_;
  Eigen::MatrixXd covariance_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

// Folds an intercept into the theory input: w <- [w; b], mean <- [mean; 1]
// and covariance gains a trailing coordinate of variance `epsilon`.
// `delta` must already have length d + 1.
GaussianTheoryInput augment_for_intercept(const LinearModel& model,
                                          const Eigen::VectorXd& delta,
                                          const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& covariance,
                                          double epsilon = 1e-12);

struct BoundaryConstants {
  double c1 = 0.0;  // -w^T mu / |sqrt(D) U^T w|
  double c2 = 0.0;  // -(w + delta)^T mu / |sqrt(D) U^T (w + delta)|
};

// Throws InvalidArgument "degenerate projection" if either scale is zero.
BoundaryConstants boundary_constants(const GaussianTheoryInput& input);

// 0.5 * (erfc(c1 / sqrt 2) - erfc(c2 / sqrt 2)) clamped to [0, 1]; 0 when c1 > c2.
double invalidation_probability_from_constants(double c1, double c2);
double exact_invalidation_probability(const GaussianTheoryInput& input);

// P(w^T x > 0 and (w + delta)^T x <= 0) computed from the joint law of the
// two scores (a bivariate normal), by one-dimensional adaptive quadrature.
// This is the probability that the Monte Carlo estimator targets.
double region_probability(const GaussianTheoryInput& input);

// P(A > h, B <= k) for standard normals A, B with correlation rho.
double bivariate_upper_lower(double h, double k, double rho);

double standard_normal_cdf(double z);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;  // binomial
  long long hits = 0;
  long long trials = 0;
};

// Fraction of x ~ N(mean, covariance) in the region above. Samples are
// drawn in fixed-size chunks with per-chunk seeds, so the serial and
// parallel paths return identical results.
MonteCarloEstimate monte_carlo_invalidation(const GaussianTheoryInput& input,
                                            long long samples, std::uint64_t seed,
                                            Execution exec = Execution::kParallel);

// 0.5 sqrt(2e/pi) (sqrt(beta - 1) / beta) exp(-beta ratio_sq / 2) with
// ratio_sq = (w^T mu)^2 / |sqrt(D) U^T w|^2.
double theorem1_expression(double ratio_sq, double beta);

struct Theorem1Bound {
  bool applicable = false;  // c1 <= c2
  double value = 0.0;
  double beta = 0.0;
};

// With no beta given, maximises over beta in (1 + 1e-6, 100] by
// golden-section search (200 iterations).
Theorem1Bound theorem1_lower_bound(const GaussianTheoryInput& input,
                                   std::optional<double> beta = std::nullopt);

// alpha (w+delta)^T mu / (lambda |w+delta|) + sqrt(D^2 / 2 ln(1 / eta)).
double theorem2_rhs(double lambda, double shifted_norm, double shifted_dot_mean,
                    double diameter, double eta, double alpha);
double theorem2_rhs(double lambda, const Eigen::VectorXd& w_plus_delta,
                    const Eigen::VectorXd& mean, double diameter, double eta,
                    double alpha);

// One-dimensional threshold models from the appendix remarks. Each
// classifier accepts x when its score exceeds tau; the shift moves the
// threshold (Bernoulli, Uniform) or the per-category scores (Categorical).
struct BernoulliRemark {
  double p = 0.5;
  double tau = 0.5;
  double shift = 0.0;
};
struct UniformRemark {
  double a = 0.0;
  double b = 1.0;
  double tau = 0.5;
  double shift = 0.0;
};
struct CategoricalRemark {
  Eigen::VectorXd weights;
  double tau = 0.5;
  Eigen::VectorXd shift;
};
using RemarkCase = std::variant<BernoulliRemark, UniformRemark, CategoricalRemark>;

// Bernoulli: 0 if tau + shift < 1 else 1.
// Uniform: 0 if shift <= 0, shift / (b - a) if tau + shift <= b, else 1.
// Categorical: |K0(shift) n K1| / |K1| with K1 = {k : w_k > tau} and
// K0(shift) = {k : w_k + shift_k <= tau}.
double remark_invalidation(const RemarkCase& remark);

// Sampling counterparts:
// Bernoulli: x ~ Bern(p); instances with x = 0 take recourse x' = 1, which
// is invalidated when x' <= tau + shift. The estimate is over those instances.
// Uniform: x' ~ U(a, b); counts tau < x' <= tau + shift.
// Categorical: recourse drawn uniformly from K1; invalidated when its
// shifted score is <= tau.
MonteCarloEstimate remark_monte_carlo(const RemarkCase& remark, long long samples,
                                      std::uint64_t seed,
                                      Execution exec = Execution::kParallel);

}  // namespace roar
