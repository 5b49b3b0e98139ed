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

#include "qderiv/ops/dense.hpp"

#include <bit>

#include "qderiv/errors.hpp"

namespace qderiv::ops {

namespace {

Complex i_power(int k) {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((k % 4) + 4) % 4];
}

} // namespace

Eigen::MatrixXcd to_dense_matrix(const PauliSum &s) {
    const std::size_t n = s.n_qubits();
    if (n > kMaxDenseQubits) {
        throw SizeLimitError("dense matrices are limited to " + std::to_string(kMaxDenseQubits) +
                             " qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : s.terms()) {
        const Complex base = t.coefficient * i_power(std::popcount(t.x & t.z));
        for (Eigen::Index col = 0; col < dim; ++col) {
            const auto b = static_cast<std::uint32_t>(col);
            const double sign = (std::popcount(b & t.z) % 2 == 0) ? 1.0 : -1.0;
            m(static_cast<Eigen::Index>(b ^ t.x), col) += sign * base;
        }
    }
    return m;
}

Eigen::VectorXd spectrum(const PauliSum &s) { return eigensystem(s).values; }

double ground_energy(const PauliSum &s) { return spectrum(s)(0); }

Eigensystem eigensystem(const PauliSum &s) {
    if (!s.is_observable()) {
        throw NotObservableError("spectrum requested for a non-Hermitian Pauli sum");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(s));
    return {es.eigenvalues(), es.eigenvectors()};
}

} // namespace qderiv::ops
