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

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qderiv/chem/molecule.hpp"

namespace qderiv::chem {

struct Primitive {
    double exponent;    // 1/Bohr^2
    double coefficient; // includes primitive normalization
};

struct Shell {
    std::size_t center;
    int angular_momentum = 0;
    std::vector<Primitive> primitives;
};

struct BasisSet {
    std::vector<Shell> shells;
    [[nodiscard]] std::size_t size() const noexcept { return shells.size(); }
};

/// Minimal STO-3G basis (one contracted s shell per hydrogen).
BasisSet sto3g(const Molecule &mol);

/// Contract raw (exponent, coefficient) pairs into a unit-norm s shell.
Shell normalized_s_shell(std::size_t center, const std::vector<std::pair<double, double>> &raw);

/// Zeroth-order Boys function.
double boys_f0(double t);

/// AO integrals over an s-type basis, atomic units.
struct IntegralSet {
    Eigen::MatrixXd overlap;
    Eigen::MatrixXd kinetic;
    Eigen::MatrixXd nuclear;
    std::vector<double> eri; // chemists' (ij|kl), row-major n^4
    std::array<Eigen::MatrixXd, 3> dipole;
    double nuclear_repulsion = 0.0;
    Eigen::Vector3d nuclear_dipole = Eigen::Vector3d::Zero();
    Eigen::Vector3d origin = Eigen::Vector3d::Zero(); // Bohr

    // Uniform-field coupling accumulated by apply_field.
    Eigen::Vector3d field = Eigen::Vector3d::Zero();
    Eigen::MatrixXd field_one_body;
    double field_constant = 0.0;

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(overlap.rows());
    }
    [[nodiscard]] double two_electron(std::size_t i, std::size_t j, std::size_t k,
                                      std::size_t l) const {
        const std::size_t n = size();
        return eri[((i * n + j) * n + k) * n + l];
    }
    /// T + V + field coupling.
    [[nodiscard]] Eigen::MatrixXd core_hamiltonian() const;
    /// Nuclear repulsion plus field constant.
    [[nodiscard]] double constant_energy() const { return nuclear_repulsion + field_constant; }
};

/// Closed-form s-Gaussian integrals. Dipole origin is the center of nuclear charge.
IntegralSet core_integrals(const Molecule &mol, const BasisSet &basis);

inline constexpr double kFieldGuard = 0.1;

/// Couple a uniform field: h -> h - F.D, constant -> constant + F.mu_N.
/// Throws FieldRegimeError when |F| exceeds kFieldGuard unless `allow_strong`.
IntegralSet apply_field(const IntegralSet &ints, const Eigen::Vector3d &field,
                        bool allow_strong = false);

} // namespace qderiv::chem
