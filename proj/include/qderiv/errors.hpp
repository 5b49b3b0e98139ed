// Copyright 2026 The qderiv Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qderiv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class UnsupportedElementError : public Error {
  public:
    using Error::Error;
};

/// A Molecule invariant (charge, electron count, finiteness) is violated.
class InvalidMoleculeError : public Error {
  public:
    using Error::Error;
};

/// Two nuclei (nearly) coincide.
class SingularGeometryError : public Error {
  public:
    using Error::Error;
};

class UnsupportedBasisError : public Error {
  public:
    using Error::Error;
};

/// Roothaan iterations did not reach the fixed point. Carries the last density.
class ScfConvergenceError : public Error {
  public:
    ScfConvergenceError(const std::string &what, Eigen::MatrixXd density)
        : Error(what), density_(std::move(density)) {}
    [[nodiscard]] const Eigen::MatrixXd &last_density() const noexcept { return density_; }

  private:
    Eigen::MatrixXd density_;
};

/// Restricted HF was asked to treat an odd electron count; use Lowdin orbitals instead.
class RestrictedShellError : public Error {
  public:
    using Error::Error;
};

class TransformError : public Error {
  public:
    using Error::Error;
};

/// Field strength exceeds the perturbative guard.
class FieldRegimeError : public Error {
  public:
    using Error::Error;
};

class HermiticityError : public Error {
  public:
    using Error::Error;
};

class NotTaperableError : public Error {
  public:
    using Error::Error;
};

class SizeLimitError : public Error {
  public:
    using Error::Error;
};

/// A PauliSum with complex coefficients was used where an observable is required.
class NotObservableError : public Error {
  public:
    using Error::Error;
};

/// Bad index, length mismatch, or otherwise invalid argument.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

class NotExtremumError : public Error {
  public:
    using Error::Error;
};

} // namespace qderiv
