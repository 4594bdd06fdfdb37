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

#include "roar/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "roar/error.hpp"
#include "roar/random.hpp"

namespace roar {

void GaussianClassSpec::validate() const {
  const Eigen::Index d = mean.size();
  if (d == 0) throw InvalidArgument("Gaussian mean is empty");
  if (covariance.rows() != d || covariance.cols() != d) {
    throw InvalidArgument("covariance shape does not match mean");
  }
  if (!mean.allFinite() || !covariance.allFinite()) {
    throw InvalidArgument("Gaussian parameters must be finite");
  }
  const double tol = 1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidArgument("covariance is not positive definite");
  }
}

void ShiftSpec::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(1.0 + beta > 0.0)) {
    throw InvalidArgument("shift needs finite alpha and 1 + beta > 0");
  }
}

GaussianClassSpec apply_shift(const GaussianClassSpec& class0, const ShiftSpec& shift) {
  class0.validate();
  shift.validate();
  GaussianClassSpec out = class0;
  out.mean[0] += shift.alpha;
  out.covariance *= 1.0 + shift.beta;
  return out;
}

Dataset generate_synthetic(std::size_t n, const GaussianClassSpec& class0,
                           const GaussianClassSpec& class1, std::uint64_t seed,
                           double class1_prob) {
  if (n < 2) throw InvalidArgument("synthetic dataset needs n >= 2");
  if (!(class1_prob >= 0.0 && class1_prob <= 1.0)) {
    throw InvalidArgument("class-1 probability must lie in [0, 1]");
  }
  class0.validate();
  class1.validate();
  const Eigen::Index d = class0.mean.size();
  if (class1.mean.size() != d) throw InvalidArgument("class dimensions differ");

  const Eigen::MatrixXd chol0 = class0.covariance.llt().matrixL();
  const Eigen::MatrixXd chol1 = class1.covariance.llt().matrixL();

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n), d);
  data.labels.resize(n);
  for (Eigen::Index j = 0; j < d; ++j) data.feature_names.push_back("x" + std::to_string(j));

  Rng rng(derive_seed(seed, 0x44));
  std::bernoulli_distribution coin(class1_prob);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(d);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = coin(rng) ? 1 : 0;
    for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
    const GaussianClassSpec& spec = y == 1 ? class1 : class0;
    const Eigen::MatrixXd& chol = y == 1 ? chol1 : chol0;
    data.features.row(static_cast<Eigen::Index>(i)) = (spec.mean + chol * z).transpose();
    data.labels[i] = y;
  }
  return data;
}

// ---------------------------------------------------------------------------

Standardizer Standardizer::fit(const Dataset& data) {
  if (data.size() == 0) throw DataError("cannot standardize an empty dataset");
  Standardizer s;
  s.mean = data.features.colwise().mean().transpose();
  s.scale.resize(data.dim());
  for (Eigen::Index j = 0; j < data.dim(); ++j) {
    const double var = (data.features.col(j).array() - s.mean[j]).square().mean();
    const double sd = std::sqrt(var);
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

FeatureVector Standardizer::standardize(const FeatureVector& x) const {
  require_dim(x, mean.size(), "standardize");
  return (x - mean).cwiseQuotient(scale);
}

FeatureVector Standardizer::destandardize(const FeatureVector& z) const {
  require_dim(z, mean.size(), "destandardize");
  return z.cwiseProduct(scale) + mean;
}

Dataset Standardizer::apply(const Dataset& data) const {
  if (data.dim() != mean.size()) throw DataError("standardizer dimension mismatch");
  Dataset out = data;
  out.features = (data.features.rowwise() - mean.transpose()).array().rowwise() /
                 scale.transpose().array();
  return out;
}

nlohmann::json Standardizer::to_json() const {
  return {{"mean", std::vector<double>(mean.data(), mean.data() + mean.size())},
          {"scale", std::vector<double>(scale.data(), scale.data() + scale.size())}};
}

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  try {
    const auto m = j.at("mean").get<std::vector<double>>();
    const auto s = j.at("scale").get<std::vector<double>>();
    if (m.size() != s.size()) throw DataError("standardizer mean/scale lengths differ");
    Standardizer out;
    out.mean = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    out.scale = Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
    if ((out.scale.array() <= 0.0).any()) throw DataError("standardizer scale must be > 0");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed standardizer: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

void DatasetSchema::validate() const {
  if (features.empty()) throw DataError("schema lists no features");
  if (label.empty()) throw DataError("schema has no label column");
  for (const auto& f : features) {
    if (f.name.empty()) throw DataError("schema feature without a name");
    if (f.lower > f.upper) throw DataError("schema bounds inverted for " + f.name);
  }
  if (standardizer && standardizer->mean.size() != dim()) {
    throw DataError("schema standardizer dimension mismatch");
  }
}

ActionabilitySpec DatasetSchema::actionability(const Standardizer* s) const {
  ActionabilitySpec spec;
  const Eigen::Index d = dim();
  spec.lower.resize(d);
  spec.upper.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& f = features[static_cast<std::size_t>(j)];
    spec.mutable_mask.push_back(f.is_mutable);
    double lo = f.lower, hi = f.upper;
    if (s != nullptr) {
      lo = (lo - s->mean[j]) / s->scale[j];
      hi = (hi - s->mean[j]) / s->scale[j];
    }
    spec.lower[j] = lo;
    spec.upper[j] = hi;
  }
  return spec;
}

DatasetSchema DatasetSchema::from_json(const nlohmann::json& j) {
  DatasetSchema schema;
  try {
    schema.label = j.at("label").get<std::string>();
    for (const auto& f : j.at("features")) {
      FeatureSchema fs;
      fs.name = f.at("name").get<std::string>();
      fs.is_mutable = f.value("mutable", true);
      if (f.contains("min") && !f.at("min").is_null()) fs.lower = f.at("min").get<double>();
      if (f.contains("max") && !f.at("max").is_null()) fs.upper = f.at("max").get<double>();
      schema.features.push_back(fs);
    }
    if (j.contains("standardizer")) schema.standardizer = Standardizer::from_json(j.at("standardizer"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

nlohmann::json DatasetSchema::to_json() const {
  nlohmann::json feats = nlohmann::json::array();
  for (const auto& f : features) {
    nlohmann::json entry = {{"name", f.name}, {"mutable", f.is_mutable}};
    if (std::isfinite(f.lower)) entry["min"] = f.lower;
    if (std::isfinite(f.upper)) entry["max"] = f.upper;
    feats.push_back(entry);
  }
  nlohmann::json out = {{"features", feats}, {"label", label}};
  if (standardizer) out["standardizer"] = standardizer->to_json();
  return out;
}

DatasetSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema " + path.string());
  try {
    return DatasetSchema::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("schema " + path.string() + " is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(const std::string& text, const DatasetSchema& schema) {
  schema.validate();
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw DataError("empty file");

  const auto header = split_line(line);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column.emplace(header[c], c);
  auto locate = [&](const std::string& name) {
    const auto it = column.find(name);
    if (it == column.end()) throw DataError("missing column: " + name);
    return it->second;
  };
  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.features) feature_cols.push_back(locate(f.name));
  const std::size_t label_col = locate(schema.label);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_index;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row_index) + ": expected " +
                      std::to_string(header.size()) + " columns, found " +
                      std::to_string(cells.size()));
    }
    std::vector<double> values;
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      double v;
      if (!parse_double(cells[feature_cols[k]], v)) {
        throw DataError("row " + std::to_string(row_index) + ": cannot parse '" +
                        cells[feature_cols[k]] + "' in column " + schema.features[k].name);
      }
      values.push_back(v);
    }
    double y;
    if (!parse_double(cells[label_col], y) || (y != 0.0 && y != 1.0)) {
      throw DataError("row " + std::to_string(row_index) + ": label '" + cells[label_col] +
                      "' is not 0 or 1");
    }
    rows.push_back(std::move(values));
    labels.push_back(static_cast<int>(y));
  }
  if (rows.empty()) throw DataError("file has a header but no data rows");

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), schema.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < schema.dim(); ++j) {
      data.features(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
  }
  data.labels = std::move(labels);
  for (const auto& f : schema.features) data.feature_names.push_back(f.name);
  if (schema.standardizer) data = schema.standardizer->apply(data);
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), schema);
}

std::string dataset_to_csv(const Dataset& data, const std::string& label_name) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index j = 0; j < data.dim(); ++j) {
    out << (j < static_cast<Eigen::Index>(data.feature_names.size())
                ? data.feature_names[static_cast<std::size_t>(j)]
                : "x" + std::to_string(j))
        << ',';
  }
  out << label_name << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      out << data.features(static_cast<Eigen::Index>(i), j) << ',';
    }
    out << data.labels[i] << '\n';
  }
  return out.str();
}

std::vector<Fold> kfold_split(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k-fold split needs k >= 2");
  if (n < static_cast<std::size_t>(k)) throw InvalidArgument("fewer samples than folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, 0x55));
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t folds = static_cast<std::size_t>(k);
  std::vector<Fold> out(folds);
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
    out[f].holdout.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                          order.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(out[f].holdout.begin(), out[f].holdout.end());
    start += size;
  }
  for (std::size_t f = 0; f < folds; ++f) {
    for (std::size_t g = 0; g < folds; ++g) {
      if (g != f) out[f].train.insert(out[f].train.end(), out[g].holdout.begin(), out[g].holdout.end());
    }
    std::sort(out[f].train.begin(), out[f].train.end());
  }
  return out;
}

}  // namespace roar
