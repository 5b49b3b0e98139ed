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
#include <vector>

#include <Eigen/Dense>

#include "qderiv/chem/scf.hpp"

namespace qderiv::ops {

struct LadderOp {
    std::size_t mode;
    bool creation;
    friend bool operator==(const LadderOp &, const LadderOp &) = default;
};

struct FermionTerm {
    std::complex<double> coefficient{1.0, 0.0};
    std::vector<LadderOp> ops; // applied right to left
};

/// Sum of products of creation/annihilation operators over a fixed mode count.
class FermionOperator {
  public:
    explicit FermionOperator(std::size_t n_modes = 0) : n_modes_(n_modes) {}

    [[nodiscard]] std::size_t n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] const std::vector<FermionTerm> &terms() const noexcept { return terms_; }

    void add(std::complex<double> coefficient, std::vector<LadderOp> ops);
    void add_constant(std::complex<double> coefficient) { add(coefficient, {}); }

    FermionOperator &operator+=(const FermionOperator &other);
    friend FermionOperator operator+(FermionOperator a, const FermionOperator &b) {
        return a += b;
    }

    [[nodiscard]] FermionOperator adjoint() const;
    /// Creators left of annihilators, each group in descending mode order; like terms merged.
    [[nodiscard]] FermionOperator normal_ordered() const;
    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;

  private:
    std::size_t n_modes_;
    std::vector<FermionTerm> terms_;
};

inline LadderOp cre(std::size_t mode) { return {mode, true}; }
inline LadderOp ann(std::size_t mode) { return {mode, false}; }

/// sum h_pq a+_p a_q + sum h_pqrs a+_p a+_q a_r a_s + constant.
FermionOperator hamiltonian_from_integrals(const chem::SpinOrbitalIntegrals &so);

/// sum m_pq a+_p a_q + constant.
FermionOperator one_body_operator(const Eigen::MatrixXd &matrix, double constant = 0.0);

} // namespace qderiv::ops
