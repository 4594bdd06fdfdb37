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

#include <filesystem>

#include <json.hpp>

#include "roar/model.hpp"

namespace roar {

// {"kind": "linear", "weights": [...], "intercept": b}
// {"kind": "mlp", "layers": [{"weights": [[...], ...], "bias": [...]}, ...]}
// Doubles are written in shortest round-trip form, so the encoding is
// lossless.
nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

Model load_model(const std::filesystem::path& path);

}  // namespace roar
