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
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qderiv/chem/integrals.hpp"

namespace qderiv::chem {

struct RhfOptions {
    int max_cycles = 200;
    double tolerance = 1e-8; // on max |FPS - SPF|
};

struct RhfResult {
    Eigen::MatrixXd coefficients; // columns are MOs, S-orthonormal
    Eigen::VectorXd orbital_energies;
    Eigen::MatrixXd density; // closed-shell P = 2 C_occ C_occ^T
    double energy = 0.0;     // total, including the constant term
    int iterations = 0;
};

/// Damping-free Roothaan iterations from the core-Hamiltonian guess.
RhfResult run_rhf(const IntegralSet &ints, int n_electrons, const RhfOptions &opts = {});

/// Symmetric orthogonalization S^{-1/2}.
Eigen::MatrixXd lowdin_orbitals(const Eigen::MatrixXd &overlap);

/// Fix the sign of every column so its first largest-magnitude entry is positive.
void canonicalize_signs(Eigen::MatrixXd &orbitals);

enum class OrbitalKind { Rhf, Lowdin };

std::string_view to_string(OrbitalKind kind);

/// Integrals over spin orbitals p = 2*orbital + spin (alpha = 0, beta = 1).
/// The two-body tensor is arranged so that the operator reads
/// sum h_pqrs a+_p a+_q a_r a_s, i.e. h_pqrs = 1/2 (ps|qr) with spin deltas.
struct SpinOrbitalIntegrals {
    Eigen::MatrixXd one_body;
    std::vector<double> two_body;
    double constant = 0.0;
    OrbitalKind provenance = OrbitalKind::Rhf;
    std::array<Eigen::MatrixXd, 3> dipole; // spin-orbital position matrices
    Eigen::Vector3d nuclear_dipole = Eigen::Vector3d::Zero();

    [[nodiscard]] std::size_t modes() const noexcept {
        return static_cast<std::size_t>(one_body.rows());
    }
    [[nodiscard]] double two(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
        const std::size_t m = modes();
        return two_body[((p * m + q) * m + r) * m + s];
    }
};

/// Transform AO integrals with the given orbital matrix and expand to spin orbitals.
SpinOrbitalIntegrals spin_orbital_integrals(const IntegralSet &ints,
                                            const Eigen::MatrixXd &orbitals, OrbitalKind kind);

} // namespace qderiv::chem
