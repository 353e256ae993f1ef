// Copyright 2026 The vqopt Authors
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

namespace vqopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (sizes, indices, file contents).
class InputError : public Error {
  public:
    using Error::Error;
};

/// The request exceeds what the simulator supports (qubit bounds, shot
/// sampling on a model without a measurement decomposition, ...).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// Violated internal invariant, e.g. a probability outside [0, 1].
class InternalError : public Error {
  public:
    using Error::Error;
};

/// A routine that requires the exact cost was handed a noisy one.
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Numerical diagnostic failed to converge or is undefined.
class DiagnosticError : public Error {
  public:
    using Error::Error;
};

} // namespace vqopt
