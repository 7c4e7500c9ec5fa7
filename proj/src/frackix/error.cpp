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

#include "frackix/error.hpp"

namespace frackix {

std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
  case ErrorCategory::Configuration: return "configuration";
  case ErrorCategory::Parse: return "parse";
  case ErrorCategory::Validation: return "validation";
  case ErrorCategory::Domain: return "domain";
  case ErrorCategory::Argument: return "argument";
  case ErrorCategory::Numerical: return "numerical";
  case ErrorCategory::Stability: return "stability";
  case ErrorCategory::Degeneracy: return "degeneracy";
  case ErrorCategory::Geometry: return "geometry";
  case ErrorCategory::Runaway: return "runaway";
  case ErrorCategory::Sampler: return "sampler";
  case ErrorCategory::Io: return "io";
  case ErrorCategory::Internal: return "internal";
  }
  return "unknown";
}

} // namespace frackix
