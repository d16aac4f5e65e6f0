// Copyright 2026 The zenogate Authors
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

namespace zenogate {

/// Raised for malformed arguments: out-of-range indices, mismatched
/// dimensions, non-normalized states where a unit vector is required.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical backend cannot honour its tolerance, or when a
/// result violates an invariant the integrator is supposed to preserve.
struct IntegratorError : std::runtime_error {
    IntegratorError(const std::string &what, double achieved_error)
        : std::runtime_error(what), achieved_error(achieved_error) {}
    double achieved_error;
};

/// Raised when a conditional state cannot be formed (zero vector).
struct UndefinedStateError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace zenogate
