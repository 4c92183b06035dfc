// Copyright 2026 The cfqm Authors
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

#include "cfqm/errors.hpp"

namespace cfqm {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::divergent_regime: return "divergent-regime";
    case ErrorCode::divergent_tail: return "divergent-tail";
    case ErrorCode::epsilon_too_large: return "epsilon-too-large";
    case ErrorCode::lookup: return "lookup";
    case ErrorCode::data_integrity: return "data-integrity";
    case ErrorCode::grid_too_fine: return "grid-too-fine";
    case ErrorCode::outside_asymptotic_regime: return "outside-asymptotic-regime";
    case ErrorCode::resource: return "resource";
    case ErrorCode::oracle: return "oracle";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace cfqm
