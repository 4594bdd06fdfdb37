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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace roar {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Creates missing parent directories.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& content);

// Run manifest accompanying every CLI output: the invoking command, config
// echo, seeds and a SHA-256 per artifact. The timestamp lives here only, so
// the artifacts themselves stay byte-reproducible.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void set_seeds(std::vector<std::uint64_t> seeds) { seeds_ = std::move(seeds); }
  // Writes the artifact atomically and records its hash.
  void write_artifact(const std::filesystem::path& path, const std::string& content);
  void write(const std::filesystem::path& manifest_path) const;
  nlohmann::json to_json() const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::json config_;
  std::vector<std::uint64_t> seeds_;
  nlohmann::json artifacts_ = nlohmann::json::array();
};

}  // namespace roar
