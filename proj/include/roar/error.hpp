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

#include <stdexcept>
#include <string>

namespace roar {

enum class ErrorKind {
  kInvalidArgument,  // precondition violated by the caller
  kData,             // malformed or unusable input data / configuration
  kNumerical,        // optimizer or solver failure
  kNoRecourse,       // a recourse generator could not produce a counterfactual
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& message) {
  return Error(ErrorKind::kInvalidArgument, message);
}
inline Error DataError(const std::string& message) {
  return Error(ErrorKind::kData, message);
}
inline Error NumericalError(const std::string& message) {
  return Error(ErrorKind::kNumerical, message);
}
inline Error NoRecourse(const std::string& message) {
  return Error(ErrorKind::kNoRecourse, message);
}

}  // namespace roar
