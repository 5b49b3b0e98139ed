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

#include "qderiv/chem/scf.hpp"

#include <cmath>

#include "qderiv/errors.hpp"

namespace qderiv::chem {

namespace {

Eigen::MatrixXd two_electron_part(const IntegralSet &ints, const Eigen::MatrixXd &density) {
    const std::size_t n = ints.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    acc += density(k, l) *
                           (ints.two_electron(i, j, k, l) - 0.5 * ints.two_electron(i, k, j, l));
                }
            }
            g(i, j) = acc;
        }
    }
    return g;
}

Eigen::MatrixXd closed_shell_density(const Eigen::MatrixXd &c, int n_occ) {
    const auto occ = c.leftCols(n_occ);
    return 2.0 * occ * occ.transpose();
}

} // namespace

void canonicalize_signs(Eigen::MatrixXd &orbitals) {
    for (Eigen::Index col = 0; col < orbitals.cols(); ++col) {
        const double largest = orbitals.col(col).cwiseAbs().maxCoeff();
        for (Eigen::Index row = 0; row < orbitals.rows(); ++row) {
            if (std::abs(orbitals(row, col)) >= largest - 1e-8) {
                if (orbitals(row, col) < 0.0) {
                    orbitals.col(col) *= -1.0;
                }
                break;
            }
        }
    }
}

Eigen::MatrixXd lowdin_orbitals(const Eigen::MatrixXd &overlap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(overlap);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < 1e-10) {
        throw TransformError("overlap matrix is not positive definite");
    }
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
           eig.eigenvectors().transpose();
}

RhfResult run_rhf(const IntegralSet &ints, int n_electrons, const RhfOptions &opts) {
    if (n_electrons % 2 != 0) {
        throw RestrictedShellError("restricted HF needs an even electron count, got " +
                                   std::to_string(n_electrons) + "; use Lowdin orbitals");
    }
    const int n_occ = n_electrons / 2;
    if (n_occ > static_cast<int>(ints.size())) {
        throw ArgumentError("more occupied orbitals than basis functions");
    }
    const Eigen::MatrixXd &s = ints.overlap;
    const Eigen::MatrixXd x = lowdin_orbitals(s);
    const Eigen::MatrixXd h = ints.core_hamiltonian();

    const auto diagonalize = [&](const Eigen::MatrixXd &fock, RhfResult &out) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.transpose() * fock * x);
        out.coefficients = x * eig.eigenvectors();
        out.orbital_energies = eig.eigenvalues();
        canonicalize_signs(out.coefficients);
    };

    RhfResult result;
    diagonalize(h, result);
    Eigen::MatrixXd density = closed_shell_density(result.coefficients, n_occ);
    for (int cycle = 1; cycle <= opts.max_cycles; ++cycle) {
        const Eigen::MatrixXd fock = h + two_electron_part(ints, density);
        const double error = (fock * density * s - s * density * fock).cwiseAbs().maxCoeff();
        diagonalize(fock, result);
        result.iterations = cycle;
        if (error < opts.tolerance) {
            result.density = density;
            result.energy =
                0.5 * (density.cwiseProduct(h + fock)).sum() + ints.constant_energy();
            return result;
        }
        density = closed_shell_density(result.coefficients, n_occ);
    }
    throw ScfConvergenceError("RHF did not converge in " + std::to_string(opts.max_cycles) +
                                  " cycles",
                              density);
}

std::string_view to_string(OrbitalKind kind) {
    return kind == OrbitalKind::Rhf ? "RHF" : "Lowdin";
}

SpinOrbitalIntegrals spin_orbital_integrals(const IntegralSet &ints,
                                            const Eigen::MatrixXd &orbitals, OrbitalKind kind) {
    const std::size_t n = ints.size();
    if (orbitals.rows() != static_cast<Eigen::Index>(n) ||
        orbitals.cols() != static_cast<Eigen::Index>(n)) {
        throw TransformError("orbital matrix must be square over the AO space");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(orbitals);
    if (svd.singularValues().minCoeff() < 1e-10) {
        throw TransformError("orbital matrix is singular");
    }
    const Eigen::MatrixXd &c = orbitals;
    const Eigen::MatrixXd h_mo = c.transpose() * ints.core_hamiltonian() * c;

    // Quarter transforms of (ij|kl).
    const auto at = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ((i * n + j) * n + k) * n + l;
    };
    std::vector<double> a = ints.eri;
    std::vector<double> b(a.size(), 0.0);
    for (int pass = 0; pass < 4; ++pass) {
        std::fill(b.begin(), b.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    for (std::size_t l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (std::size_t m = 0; m < n; ++m) {
                            acc += c(m, l) * a[at(m, i, j, k)];
                        }
                        // Rotate indices so each pass transforms the leading one.
                        b[at(i, j, k, l)] = acc;
                    }
                }
            }
        }
        std::swap(a, b);
    }
    const std::vector<double> &mo = a;

    const std::size_t m = 2 * n;
    SpinOrbitalIntegrals so;
    so.provenance = kind;
    so.constant = ints.constant_energy();
    so.one_body = Eigen::MatrixXd::Zero(m, m);
    so.two_body.assign(m * m * m * m, 0.0);
    so.nuclear_dipole = ints.nuclear_dipole;
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXd d_mo = c.transpose() * ints.dipole[k] * c;
        so.dipole[k] = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = 0; q < m; ++q) {
                if (p % 2 == q % 2) {
                    so.dipole[k](p, q) = d_mo(p / 2, q / 2);
                }
            }
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (p % 2 == q % 2) {
                so.one_body(p, q) = h_mo(p / 2, q / 2);
            }
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t s = 0; s < m; ++s) {
                    if (p % 2 != s % 2 || q % 2 != r % 2) {
                        continue;
                    }
                    so.two_body[((p * m + q) * m + r) * m + s] =
                        0.5 * mo[at(p / 2, s / 2, q / 2, r / 2)];
                }
            }
        }
    }
    return so;
}

} // namespace qderiv::chem
