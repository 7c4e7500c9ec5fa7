// Copyright 2026 The frackix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frackix {

/// Machine-readable error families. The C API maps these one-to-one onto
/// status codes, so the numeric values are part of the ABI.
enum class ErrorCategory : int {
  Configuration = 1,
  Parse = 2,
  Validation = 3,
  Domain = 4,
  Argument = 5,
  Numerical = 6,
  Stability = 7,
  Degeneracy = 8,
  Geometry = 9,
  Runaway = 10,
  Sampler = 11,
  Io = 12,
  Internal = 13,
};

std::string_view category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& msg) {
  throw Error(c, msg);
}

inline void require(bool cond, ErrorCategory c, const std::string& msg) {
  if (!cond)
    throw Error(c, msg);
}

} // namespace frackix
