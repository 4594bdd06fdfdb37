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

#include "roar/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "roar/error.hpp"
#include "roar/random.hpp"

namespace roar {

GaussianTheoryInput::GaussianTheoryInput(Eigen::VectorXd w, Eigen::VectorXd delta,
                                         Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : w_(std::move(w)),
      delta_(std::move(delta)),
      mean_(std::move(mean)),
      covariance_(std::move(covariance)) {
  const Eigen::Index d = w_.size();
  if (d == 0 || delta_.size() != d || mean_.size() != d || covariance_.rows() != d ||
      covariance_.cols() != d) {
    throw InvalidArgument("theory input dimensions disagree");
  }
  if (!w_.allFinite() || !delta_.allFinite() || !mean_.allFinite() || !covariance_.allFinite()) {
    throw InvalidArgument("theory input must be finite");
  }
  const double tol = 1e-12 * std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidArgument("covariance is not positive definite");
  }
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
}

double GaussianTheoryInput::projected_scale(const Eigen::VectorXd& v) const {
  return (eigenvalues_.cwiseSqrt().cwiseProduct(eigenvectors_.transpose() * v)).norm();
}

GaussianTheoryInput augment_for_intercept(const LinearModel& model,
                                          const Eigen::VectorXd& delta,
                                          const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& covariance,
                                          double epsilon) {
  const Eigen::Index d = model.dim();
  if (mean.size() != d || delta.size() != d + 1 || covariance.rows() != d ||
      covariance.cols() != d) {
    throw InvalidArgument("augment_for_intercept dimensions disagree");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("augmentation variance must be > 0");
  Eigen::VectorXd mu(d + 1);
  mu << mean, 1.0;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d + 1, d + 1);
  sigma.topLeftCorner(d, d) = covariance;
  sigma(d, d) = epsilon;
  return GaussianTheoryInput(model.augmented_weights(), delta, std::move(mu), std::move(sigma));
}

BoundaryConstants boundary_constants(const GaussianTheoryInput& input) {
  const Eigen::VectorXd shifted = input.w() + input.delta();
  const double s1 = input.projected_scale(input.w());
  const double s2 = input.projected_scale(shifted);
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw InvalidArgument("degenerate projection");
  return {-input.w().dot(input.mean()) / s1, -shifted.dot(input.mean()) / s2};
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double invalidation_probability_from_constants(double c1, double c2) {
  if (c1 > c2) return 0.0;
  const double p = 0.5 * (std::erfc(c1 / std::numbers::sqrt2) - std::erfc(c2 / std::numbers::sqrt2));
  return std::clamp(p, 0.0, 1.0);
}

double exact_invalidation_probability(const GaussianTheoryInput& input) {
  const BoundaryConstants c = boundary_constants(input);
  return invalidation_probability_from_constants(c.c1, c.c2);
}

double bivariate_upper_lower(double h, double k, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidArgument("correlation outside [-1, 1]");
  constexpr double kDegenerate = 1e-12;
  if (rho >= 1.0 - kDegenerate) {
    // B = A: h < A <= k.
    return std::max(0.0, standard_normal_cdf(k) - standard_normal_cdf(h));
  }
  if (rho <= -1.0 + kDegenerate) {
    // B = -A: A > max(h, -k).
    return standard_normal_cdf(-std::max(h, -k));
  }
  // Integrate phi(a) P(B <= k | A = a) over a > h.
  const double root = std::sqrt(1.0 - rho * rho);
  auto integrand = [&](double a) {
    const double density = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    return density * standard_normal_cdf((k - rho * a) / root);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned kDepth = 20;
  constexpr double kTol = 1e-13;
  const double inf = std::numeric_limits<double>::infinity();
  // The conditional probability switches steeply around a = k / rho; split
  // there so the adaptive rule does not straddle the transition.
  const double kink = rho != 0.0 ? k / rho : inf;
  if (std::isfinite(kink) && kink > h) {
    return std::clamp(Quad::integrate(integrand, h, kink, kDepth, kTol) +
                          Quad::integrate(integrand, kink, inf, kDepth, kTol),
                      0.0, 1.0);
  }
  return std::clamp(Quad::integrate(integrand, h, inf, kDepth, kTol), 0.0, 1.0);
}

double region_probability(const GaussianTheoryInput& input) {
  const BoundaryConstants c = boundary_constants(input);
  const Eigen::VectorXd shifted = input.w() + input.delta();
  const double s1 = input.projected_scale(input.w());
  const double s2 = input.projected_scale(shifted);
  const double cov = input.w().dot(input.covariance() * shifted);
  const double rho = std::clamp(cov / (s1 * s2), -1.0, 1.0);
  // w^T x > 0  <=>  A > c1;  (w+delta)^T x <= 0  <=>  B <= c2.
  return bivariate_upper_lower(c.c1, c.c2, rho);
}

namespace {

constexpr long long kChunk = 1 << 16;

// Splits `samples` into fixed chunks, counts hits per chunk with its own
// seed, and reduces the integer counts in chunk order.
template <typename CountChunk>
MonteCarloEstimate chunked_estimate(long long samples, std::uint64_t seed, Execution exec,
                                    CountChunk&& count_chunk) {
  if (samples < 1) throw InvalidArgument("Monte Carlo needs at least one sample");
  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<long long> hits(static_cast<std::size_t>(chunks), 0);
  std::vector<long long> trials(static_cast<std::size_t>(chunks), 0);
  parallel_for(static_cast<std::size_t>(chunks), exec, [&](std::size_t c) {
    const long long n = std::min(kChunk, samples - static_cast<long long>(c) * kChunk);
    Rng rng(derive_seed(seed, c));
    auto [h, t] = count_chunk(rng, n);
    hits[c] = h;
    trials[c] = t;
  });
  MonteCarloEstimate out;
  for (std::size_t c = 0; c < hits.size(); ++c) {
    out.hits += hits[c];
    out.trials += trials[c];
  }
  if (out.trials > 0) {
    const double p = static_cast<double>(out.hits) / static_cast<double>(out.trials);
    out.estimate = p;
    out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(out.trials));
  }
  return out;
}

}  // namespace

MonteCarloEstimate monte_carlo_invalidation(const GaussianTheoryInput& input,
                                            long long samples, std::uint64_t seed,
                                            Execution exec) {
  const Eigen::Index d = input.dim();
  const Eigen::MatrixXd chol = input.covariance().llt().matrixL();
  const Eigen::VectorXd shifted = input.w() + input.delta();
  // Scores as functions of the standard normal draw z: m + a^T z.
  const Eigen::VectorXd a = chol.transpose() * input.w();
  const Eigen::VectorXd b = chol.transpose() * shifted;
  const double ma = input.w().dot(input.mean());
  const double mb = shifted.dot(input.mean());
  return chunked_estimate(samples, seed, exec, [&](Rng& rng, long long n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(d);
    long long hit = 0;
    for (long long i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
      const double u = ma + a.dot(z);
      const double v = mb + b.dot(z);
      if (u > 0.0 && v <= 0.0) ++hit;
    }
    return std::pair{hit, n};
  });
}

double theorem1_expression(double ratio_sq, double beta) {
  if (!(beta >= 1.0)) throw InvalidArgument("beta must be >= 1");
  if (!(ratio_sq >= 0.0)) throw InvalidArgument("ratio must be >= 0");
  const double lead = 0.5 * std::sqrt(2.0 * std::numbers::e / std::numbers::pi);
  return lead * (std::sqrt(beta - 1.0) / beta) * std::exp(-beta * ratio_sq / 2.0);
}

Theorem1Bound theorem1_lower_bound(const GaussianTheoryInput& input,
                                   std::optional<double> beta) {
  const BoundaryConstants c = boundary_constants(input);
  Theorem1Bound out;
  out.applicable = c.c1 <= c.c2;
  if (!out.applicable) return out;
  const double ratio_sq = c.c1 * c.c1;
  if (beta) {
    out.beta = *beta;
    out.value = theorem1_expression(ratio_sq, *beta);
    return out;
  }
  // The expression is unimodal in beta on (1, inf).
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1.0 + 1e-6, hi = 100.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = theorem1_expression(ratio_sq, x1), f2 = theorem1_expression(ratio_sq, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = theorem1_expression(ratio_sq, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = theorem1_expression(ratio_sq, x1);
    }
  }
  out.beta = 0.5 * (lo + hi);
  out.value = theorem1_expression(ratio_sq, out.beta);
  const double at_edge = theorem1_expression(ratio_sq, 100.0);
  if (at_edge > out.value) {
    out.beta = 100.0;
    out.value = at_edge;
  }
  return out;
}

double theorem2_rhs(double lambda, double shifted_norm, double shifted_dot_mean,
                    double diameter, double eta, double alpha) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (!(shifted_norm > 0.0)) throw InvalidArgument("|w + delta| must be > 0");
  if (!(diameter >= 0.0)) throw InvalidArgument("diameter must be >= 0");
  return alpha * shifted_dot_mean / (lambda * shifted_norm) +
         std::sqrt(diameter * diameter / 2.0 * std::log(1.0 / eta));
}

double theorem2_rhs(double lambda, const Eigen::VectorXd& w_plus_delta,
                    const Eigen::VectorXd& mean, double diameter, double eta,
                    double alpha) {
  if (w_plus_delta.size() != mean.size()) throw InvalidArgument("theorem2_rhs dimension mismatch");
  return theorem2_rhs(lambda, w_plus_delta.norm(), w_plus_delta.dot(mean), diameter, eta, alpha);
}

// ---------------------------------------------------------------------------

namespace {

struct CategoricalSets {
  std::vector<Eigen::Index> favorable;  // K1
  std::vector<bool> invalid_after;      // k in K0(shift)
};

CategoricalSets categorical_sets(const CategoricalRemark& r) {
  if (r.weights.size() == 0 || r.shift.size() != r.weights.size()) {
    throw InvalidArgument("categorical weights and shift must have equal, nonzero length");
  }
  CategoricalSets sets;
  for (Eigen::Index k = 0; k < r.weights.size(); ++k) {
    if (r.weights[k] > r.tau) sets.favorable.push_back(k);
    sets.invalid_after.push_back(r.weights[k] + r.shift[k] <= r.tau);
  }
  if (sets.favorable.empty()) throw InvalidArgument("no favorable category");
  return sets;
}

void check(const BernoulliRemark& r) {
  if (!(r.tau > 0.0 && r.tau < 1.0)) throw InvalidArgument("Bernoulli threshold must lie in (0, 1)");
  if (!(r.p >= 0.0 && r.p < 1.0)) throw InvalidArgument("Bernoulli p must lie in [0, 1)");
}

void check(const UniformRemark& r) {
  if (!(r.a < r.tau && r.tau < r.b)) throw InvalidArgument("uniform remark needs a < tau < b");
}

}  // namespace

double remark_invalidation(const RemarkCase& remark) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BernoulliRemark>) {
          check(r);
          return r.tau + r.shift < 1.0 ? 0.0 : 1.0;
        } else if constexpr (std::is_same_v<T, UniformRemark>) {
          check(r);
          if (r.shift <= 0.0) return 0.0;
          if (r.tau + r.shift <= r.b) return r.shift / (r.b - r.a);
          return 1.0;
        } else {
          const CategoricalSets sets = categorical_sets(r);
          long hit = 0;
          for (Eigen::Index k : sets.favorable) hit += sets.invalid_after[static_cast<std::size_t>(k)];
          return static_cast<double>(hit) / static_cast<double>(sets.favorable.size());
        }
      },
      remark);
}

MonteCarloEstimate remark_monte_carlo(const RemarkCase& remark, long long samples,
                                      std::uint64_t seed, Execution exec) {
  return std::visit(
      [&](const auto& r) -> MonteCarloEstimate {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BernoulliRemark>) {
          check(r);
          return chunked_estimate(samples, seed, exec, [&](Rng& rng, long long n) {
            std::bernoulli_distribution draw(r.p);
            long long hit = 0, needing = 0;
            for (long long i = 0; i < n; ++i) {
              if (draw(rng)) continue;  // already accepted
              ++needing;
              const double recourse = 1.0;
              if (!(recourse > r.tau + r.shift)) ++hit;
            }
            return std::pair{hit, needing};
          });
        } else if constexpr (std::is_same_v<T, UniformRemark>) {
          check(r);
          return chunked_estimate(samples, seed, exec, [&](Rng& rng, long long n) {
            std::uniform_real_distribution<double> draw(r.a, r.b);
            long long hit = 0;
            for (long long i = 0; i < n; ++i) {
              const double x = draw(rng);
              if (x > r.tau && x <= r.tau + r.shift) ++hit;
            }
            return std::pair{hit, n};
          });
        } else {
          const CategoricalSets sets = categorical_sets(r);
          return chunked_estimate(samples, seed, exec, [&](Rng& rng, long long n) {
            std::uniform_int_distribution<std::size_t> pick(0, sets.favorable.size() - 1);
            long long hit = 0;
            for (long long i = 0; i < n; ++i) {
              const Eigen::Index k = sets.favorable[pick(rng)];
              if (sets.invalid_after[static_cast<std::size_t>(k)]) ++hit;
            }
            return std::pair{hit, n};
          });
        }
      },
      remark);
}

}  // namespace roar
