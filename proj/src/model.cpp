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

#include "roar/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "roar/error.hpp"
#include "roar/random.hpp"

namespace roar {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidArgument("moment decay coefficients must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
}

LinearModel::LinearModel(Eigen::VectorXd weights, double intercept)
    : weights_(std::move(weights)), intercept_(intercept) {
  if (!weights_.allFinite() || !std::isfinite(intercept_)) {
    throw InvalidArgument("linear model parameters must be finite");
  }
}

double LinearModel::score(const FeatureVector& x) const {
  require_dim(x, dim(), "LinearModel::score");
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
  return s + intercept_;
}

Eigen::VectorXd LinearModel::augmented_weights() const {
  Eigen::VectorXd aug(dim() + 1);
  aug.head(dim()) = weights_;
  aug[dim()] = intercept_;
  return aug;
}

MlpModel::MlpModel(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidArgument("MLP needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.size() != layer.weights.rows()) {
      throw InvalidArgument("MLP layer bias size does not match its weights");
    }
    if (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows()) {
      throw InvalidArgument("MLP layer dimensions are incompatible");
    }
  }
  if (layers_.back().weights.rows() != 1) {
    throw InvalidArgument("MLP output layer must have a single unit");
  }
}

MlpModel MlpModel::initialize(Eigen::Index input_dim,
                              std::span<const int> hidden_sizes,
                              std::uint64_t seed) {
  if (input_dim < 1) throw InvalidArgument("MLP input dimension must be >= 1");
  Rng rng(derive_seed(seed, 0x11));
  std::vector<Layer> layers;
  Eigen::Index fan_in = input_dim;
  auto make_layer = [&](Eigen::Index fan_out) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Layer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd(fan_out)};
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = dist(rng);
    }
    for (Eigen::Index r = 0; r < fan_out; ++r) layer.bias[r] = dist(rng);
    layers.push_back(std::move(layer));
    fan_in = fan_out;
  };
  for (int h : hidden_sizes) {
    if (h < 1) throw InvalidArgument("hidden layer sizes must be >= 1");
    make_layer(h);
  }
  make_layer(1);
  return MlpModel(std::move(layers));
}

Eigen::Index MlpModel::dim() const {
  return layers_.empty() ? 0 : layers_.front().weights.cols();
}

double MlpModel::score(const FeatureVector& x) const {
  require_dim(x, dim(), "MlpModel::score");
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    a = (layers_[l].weights * a + layers_[l].bias).cwiseMax(0.0);
  }
  return (layers_.back().weights * a + layers_.back().bias)[0];
}

Eigen::VectorXd MlpModel::score_gradient(const FeatureVector& x) const {
  require_dim(x, dim(), "MlpModel::score_gradient");
  std::vector<Eigen::VectorXd> pre;
  pre.reserve(layers_.size());
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    pre.push_back(layers_[l].weights * a + layers_[l].bias);
    a = pre.back().cwiseMax(0.0);
  }
  Eigen::VectorXd grad = layers_.back().weights.row(0).transpose();
  for (std::size_t l = layers_.size() - 1; l-- > 0;) {
    grad = grad.cwiseProduct(
        (pre[l].array() > 0.0).cast<double>().matrix());
    grad = layers_[l].weights.transpose() * grad;
  }
  return grad;
}

double sigmoid(double z) {
  constexpr double kLo = std::numeric_limits<double>::min();
  constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kLo, kHi);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// Unclamped logistic for gradients; sigmoid() clamps to keep probabilities
// strictly inside (0, 1), which would bias d(loss)/d(score) at saturation.
double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_training_data(const Dataset& data) {
  if (data.size() == 0) throw DataError("empty training dataset");
  data.validate();
  const auto ones = std::count(data.labels.begin(), data.labels.end(), 1);
  if (ones == 0 || ones == static_cast<long>(data.size())) {
    throw DataError("degenerate labels");
  }
}

// Adam state for one flat parameter block.
struct AdamState {
  Eigen::VectorXd m, v;
  long step = 0;

  explicit AdamState(Eigen::Index n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}

  void apply(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad,
             const TrainingConfig& cfg) {
    ++step;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (Eigen::Index i = 0; i < params.size(); ++i) {
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
  }
};

}  // namespace

double bce_from_score(double s, int target) {
  return target == 1 ? softplus(-s) : softplus(s);
}

Eigen::Index input_dim(const Model& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

double score(const Model& model, const FeatureVector& x) {
  return std::visit([&](const auto& m) { return m.score(x); }, model);
}

double predict_proba(const Model& model, const FeatureVector& x) {
  return sigmoid(score(model, x));
}

int predict_label(const Model& model, const FeatureVector& x) {
  return score(model, x) > 0.0 ? 1 : 0;
}

Eigen::VectorXd input_gradient(const Model& model, const FeatureVector& x,
                               int target) {
  const double s = score(model, x);
  const double dloss_dscore = logistic(s) - static_cast<double>(target);
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    return dloss_dscore * lin->weights();
  }
  return dloss_dscore * std::get<MlpModel>(model).score_gradient(x);
}

double mean_bce(const Model& model, const Dataset& data) {
  if (data.size() == 0) throw InvalidArgument("mean_bce on empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += bce_from_score(score(model, data.row(i)), data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

double accuracy(const Model& model, const Dataset& data) {
  if (data.size() == 0) throw InvalidArgument("accuracy on empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hits += predict_label(model, data.row(i)) == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

LinearModel train_logistic(const Dataset& data, const TrainingConfig& config,
                           std::vector<double>* loss_trace) {
  config.validate();
  check_training_data(data);
  const Eigen::Index d = data.dim();
  const double n = static_cast<double>(data.size());
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data.labels[i];

  // Parameters packed as [w; b].
  Eigen::VectorXd params = Eigen::VectorXd::Zero(d + 1);
  AdamState adam(d + 1);
  auto mean_loss = [&](const Eigen::VectorXd& p) {
    const Eigen::VectorXd s = (data.features * p.head(d)).array() + p[d];
    double total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      total += bce_from_score(s[i], static_cast<int>(y[i]));
    }
    return total / n;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Eigen::VectorXd s = (data.features * params.head(d)).array() + params[d];
    Eigen::VectorXd residual(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) residual[i] = logistic(s[i]) - y[i];
    Eigen::VectorXd grad(d + 1);
    grad.head(d) = data.features.transpose() * residual / n;
    grad[d] = residual.sum() / n;
    adam.apply(params, grad, config);
    if (!params.allFinite()) throw NumericalError("logistic regression diverged");
    if (loss_trace) loss_trace->push_back(mean_loss(params));
  }
  return LinearModel(params.head(d), params[d]);
}

MlpModel train_mlp(const Dataset& data, const TrainingConfig& config,
                   std::span<const int> hidden_sizes) {
  config.validate();
  check_training_data(data);
  MlpModel model = MlpModel::initialize(data.dim(), hidden_sizes, config.seed);
  auto& layers = model.mutable_layers();
  const std::size_t depth = layers.size();

  std::vector<AdamState> weight_state, bias_state;
  for (const auto& layer : layers) {
    weight_state.emplace_back(layer.weights.size());
    bias_state.emplace_back(layer.bias.size());
  }

  Rng rng(derive_seed(config.seed, 0x22));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  std::vector<Eigen::MatrixXd> pre(depth), act(depth + 1);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const auto cols = static_cast<Eigen::Index>(stop - start);
      act[0].resize(data.dim(), cols);
      Eigen::RowVectorXd y(cols);
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto idx = static_cast<Eigen::Index>(order[start + c]);
        act[0].col(c) = data.features.row(idx).transpose();
        y[c] = data.labels[order[start + c]];
      }
      for (std::size_t l = 0; l < depth; ++l) {
        pre[l] = (layers[l].weights * act[l]).colwise() + layers[l].bias;
        act[l + 1] = l + 1 < depth ? Eigen::MatrixXd(pre[l].cwiseMax(0.0)) : pre[l];
      }
      Eigen::MatrixXd delta(1, cols);
      for (Eigen::Index c = 0; c < cols; ++c) {
        delta(0, c) = (logistic(pre[depth - 1](0, c)) - y[c]) / static_cast<double>(cols);
      }
      for (std::size_t l = depth; l-- > 0;) {
        const Eigen::MatrixXd grad_w = delta * act[l].transpose();
        const Eigen::VectorXd grad_b = delta.rowwise().sum();
        if (l > 0) {
          delta = (layers[l].weights.transpose() * delta)
                      .cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
        Eigen::Map<Eigen::VectorXd> w_flat(layers[l].weights.data(), layers[l].weights.size());
        const Eigen::Map<const Eigen::VectorXd> gw_flat(grad_w.data(), grad_w.size());
        weight_state[l].apply(w_flat, gw_flat, config);
        bias_state[l].apply(layers[l].bias, grad_b, config);
      }
    }
    for (const auto& layer : layers) {
      if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
        throw NumericalError("MLP training diverged");
      }
    }
  }
  return model;
}

}  // namespace roar
