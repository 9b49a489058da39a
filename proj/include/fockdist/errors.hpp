// Copyright 2026 The fockdist Authors
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

namespace fockdist {

/// Raised when an input references something that does not exist or cannot be
/// wired up (unregistered mode, unknown config key, bad port arity).
class ConfigurationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when an input exists but violates a numerical or physical
/// constraint (non-unitary matrix, unnormalized amplitudes, photon cutoff).
class ValidationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace fockdist
