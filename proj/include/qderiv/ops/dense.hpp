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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "qderiv/ops/pauli.hpp"

namespace qderiv::ops {

/// Largest register the dense oracle accepts.
inline constexpr std::size_t kMaxDenseQubits = 16;

/// Kronecker assembly; qubit q is bit q of the basis index.
Eigen::MatrixXcd to_dense_matrix(const PauliSum &s);

/// Ascending eigenvalues of a Hermitian Pauli sum.
Eigen::VectorXd spectrum(const PauliSum &s);

/// Lowest eigenvalue.
double ground_energy(const PauliSum &s);

/// Eigenpairs of a Hermitian Pauli sum (columns of `vectors` are eigenvectors).
struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};
Eigensystem eigensystem(const PauliSum &s);

} // namespace qderiv::ops
