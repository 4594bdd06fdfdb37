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

#include "roar/model_io.hpp"

#include <fstream>
#include <string>

#include "roar/error.hpp"

namespace roar {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw DataError(std::string(what) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw DataError(std::string(what) + " must be numeric");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

}  // namespace

nlohmann::json model_to_json(const Model& model) {
  nlohmann::json doc;
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    doc["kind"] = "linear";
    doc["weights"] = vector_to_json(lin->weights());
    doc["intercept"] = lin->intercept();
    return doc;
  }
  const auto& mlp = std::get<MlpModel>(model);
  doc["kind"] = "mlp";
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : mlp.layers()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      rows.push_back(vector_to_json(layer.weights.row(r).transpose()));
    }
    layers.push_back({{"weights", rows}, {"bias", vector_to_json(layer.bias)}});
  }
  doc["layers"] = layers;
  return doc;
}

Model model_from_json(const nlohmann::json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "linear") {
      return LinearModel(vector_from_json(doc.at("weights"), "weights"),
                         doc.at("intercept").get<double>());
    }
    if (kind == "mlp") {
      std::vector<MlpModel::Layer> layers;
      for (const auto& entry : doc.at("layers")) {
        const auto& rows = entry.at("weights");
        MlpModel::Layer layer;
        layer.bias = vector_from_json(entry.at("bias"), "bias");
        const auto n_rows = static_cast<Eigen::Index>(rows.size());
        const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
        layer.weights.resize(n_rows, n_cols);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
          const Eigen::VectorXd row = vector_from_json(rows[static_cast<std::size_t>(r)], "weights");
          if (row.size() != n_cols) throw DataError("ragged MLP weight matrix");
          layer.weights.row(r) = row.transpose();
        }
        layers.push_back(std::move(layer));
      }
      return MlpModel(std::move(layers));
    }
    throw DataError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidArgument) throw DataError(e.what());
    throw;
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse model file " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace roar
