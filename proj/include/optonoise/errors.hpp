// Copyright 2026 The optonoise Authors
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

namespace optonoise {

/// Base of every exception thrown by the engine.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Forms built on different grids or channel bases were mixed.
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// An operation was called outside its contract (e.g. PSD of a field form).
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A pole or zero was hit. Carries the offending frequency when known.
class SingularityError : public Error {
  public:
    SingularityError(const std::string &what, double omega)
        : Error(what + " (omega = " + std::to_string(omega) + " rad/s)"), omega_(omega) {}
    explicit SingularityError(const std::string &what) : Error(what), omega_(0.0) {}

    double omega() const noexcept { return omega_; }

  private:
    double omega_;
};

/// The variational angle condition has no back-action-cancelling solution.
class NoCancellation : public Error {
  public:
    using Error::Error;
};

/// The requested operation does not exist for this measurement scheme.
class Unsupported : public Error {
  public:
    using Error::Error;
};

/// Configuration or input failed validation. `path` locates the field.
class ValidationError : public Error {
  public:
    ValidationError(std::string path, const std::string &message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace optonoise
