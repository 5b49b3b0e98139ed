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

#include "qderiv/chem/integrals.hpp"

#include <cmath>
#include <numbers>

#include "qderiv/errors.hpp"

namespace qderiv::chem {

namespace {

constexpr double kPi = std::numbers::pi;

// Standard STO-3G hydrogen contraction (zeta = 1.24).
constexpr std::array<std::pair<double, double>, 3> kSto3gHydrogen{{
    {3.42525091, 0.15432897},
    {0.62391373, 0.53532814},
    {0.16885540, 0.44463454},
}};

struct PrimitivePair {
    double p;
    Eigen::Vector3d center;
    double prefactor; // c_a c_b exp(-mu |AB|^2)
    double overlap;   // prefactor (pi/p)^{3/2}
    double kinetic;
};

PrimitivePair make_pair(const Primitive &a, const Eigen::Vector3d &ra, const Primitive &b,
                        const Eigen::Vector3d &rb) {
    const double p = a.exponent + b.exponent;
    const double mu = a.exponent * b.exponent / p;
    const double ab2 = (ra - rb).squaredNorm();
    PrimitivePair pair;
    pair.p = p;
    pair.center = (a.exponent * ra + b.exponent * rb) / p;
    pair.prefactor = a.coefficient * b.coefficient * std::exp(-mu * ab2);
    pair.overlap = pair.prefactor * std::pow(kPi / p, 1.5);
    pair.kinetic = mu * (3.0 - 2.0 * mu * ab2) * pair.overlap;
    return pair;
}

} // namespace

Shell normalized_s_shell(std::size_t center, const std::vector<std::pair<double, double>> &raw) {
    Shell shell{center, 0, {}};
    for (const auto &[alpha, c] : raw) {
        shell.primitives.push_back({alpha, c * std::pow(2.0 * alpha / kPi, 0.75)});
    }
    double norm = 0.0;
    for (const auto &a : shell.primitives) {
        for (const auto &b : shell.primitives) {
            norm += a.coefficient * b.coefficient *
                    std::pow(kPi / (a.exponent + b.exponent), 1.5);
        }
    }
    for (auto &prim : shell.primitives) {
        prim.coefficient /= std::sqrt(norm);
    }
    return shell;
}

BasisSet sto3g(const Molecule &mol) {
    BasisSet basis;
    for (std::size_t a = 0; a < mol.size(); ++a) {
        if (mol.atoms()[a].nuclear_charge != 1) {
            throw UnsupportedElementError("STO-3G is only tabulated for hydrogen");
        }
        basis.shells.push_back(normalized_s_shell(
            a, std::vector<std::pair<double, double>>(kSto3gHydrogen.begin(),
                                                      kSto3gHydrogen.end())));
    }
    return basis;
}

double boys_f0(double t) {
    if (t < 1e-4) {
        return 1.0 - t / 3.0 + t * t / 10.0 - t * t * t / 42.0;
    }
    const double s = std::sqrt(t);
    return 0.5 * std::sqrt(kPi / t) * std::erf(s);
}

Eigen::MatrixXd IntegralSet::core_hamiltonian() const {
    Eigen::MatrixXd h = kinetic + nuclear;
    if (field_one_body.size() == h.size()) {
        h += field_one_body;
    }
    return h;
}

IntegralSet core_integrals(const Molecule &mol, const BasisSet &basis) {
    const std::size_t n = basis.size();
    for (const auto &shell : basis.shells) {
        if (shell.angular_momentum != 0) {
            throw UnsupportedBasisError("only s-type shells are supported");
        }
        if (shell.center >= mol.size()) {
            throw UnsupportedBasisError("shell center outside the molecule");
        }
    }

    IntegralSet ints;
    ints.overlap = Eigen::MatrixXd::Zero(n, n);
    ints.kinetic = Eigen::MatrixXd::Zero(n, n);
    ints.nuclear = Eigen::MatrixXd::Zero(n, n);
    for (auto &d : ints.dipole) {
        d = Eigen::MatrixXd::Zero(n, n);
    }
    ints.field_one_body = Eigen::MatrixXd::Zero(n, n);
    ints.origin = charge_center(mol);
    ints.nuclear_repulsion = nuclear_repulsion(mol);
    ints.nuclear_dipole = nuclear_dipole(mol, ints.origin);

    // Primitive pair tables per AO pair (i <= j).
    std::vector<std::vector<PrimitivePair>> pairs(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ri = mol.position_bohr(basis.shells[i].center);
        for (std::size_t j = 0; j < n; ++j) {
            const auto rj = mol.position_bohr(basis.shells[j].center);
            auto &list = pairs[i * n + j];
            for (const auto &a : basis.shells[i].primitives) {
                for (const auto &b : basis.shells[j].primitives) {
                    list.push_back(make_pair(a, ri, b, rj));
                }
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            double t = 0.0;
            double v = 0.0;
            Eigen::Vector3d d = Eigen::Vector3d::Zero();
            for (const auto &pp : pairs[i * n + j]) {
                s += pp.overlap;
                t += pp.kinetic;
                d += pp.overlap * (pp.center - ints.origin);
                for (std::size_t c = 0; c < mol.size(); ++c) {
                    const double pc2 = (pp.center - mol.position_bohr(c)).squaredNorm();
                    v -= mol.atoms()[c].nuclear_charge * 2.0 * kPi / pp.p * pp.prefactor *
                         boys_f0(pp.p * pc2);
                }
            }
            ints.overlap(i, j) = ints.overlap(j, i) = s;
            ints.kinetic(i, j) = ints.kinetic(j, i) = t;
            ints.nuclear(i, j) = ints.nuclear(j, i) = v;
            for (int k = 0; k < 3; ++k) {
                ints.dipole[k](i, j) = ints.dipole[k](j, i) = d[k];
            }
        }
    }

    // (ij|kl) over the canonical octant, then scattered to all 8 images.
    ints.eri.assign(n * n * n * n, 0.0);
    const auto index = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ((i * n + j) * n + k) * n + l;
    };
    const double eri_scale = 2.0 * std::pow(kPi, 2.5);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l <= k; ++l) {
                    if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) {
                        continue;
                    }
                    double value = 0.0;
                    for (const auto &bra : pairs[i * n + j]) {
                        for (const auto &ket : pairs[k * n + l]) {
                            const double pq = bra.p + ket.p;
                            const double rho = bra.p * ket.p / pq;
                            const double r2 = (bra.center - ket.center).squaredNorm();
                            value += eri_scale / (bra.p * ket.p * std::sqrt(pq)) *
                                     bra.prefactor * ket.prefactor * boys_f0(rho * r2);
                        }
                    }
                    for (const auto [a, b, c, d] :
                         {std::array{i, j, k, l}, std::array{j, i, k, l}, std::array{i, j, l, k},
                          std::array{j, i, l, k}, std::array{k, l, i, j}, std::array{l, k, i, j},
                          std::array{k, l, j, i}, std::array{l, k, j, i}}) {
                        ints.eri[index(a, b, c, d)] = value;
                    }
                }
            }
        }
    }
    return ints;
}

IntegralSet apply_field(const IntegralSet &ints, const Eigen::Vector3d &field, bool allow_strong) {
    if (!allow_strong && field.norm() > kFieldGuard) {
        throw FieldRegimeError("field magnitude " + std::to_string(field.norm()) +
                               " a.u. exceeds the perturbative guard");
    }
    IntegralSet out = ints;
    if (out.field_one_body.size() != out.overlap.size()) {
        out.field_one_body = Eigen::MatrixXd::Zero(out.size(), out.size());
    }
    for (int k = 0; k < 3; ++k) {
        out.field_one_body -= field[k] * ints.dipole[k];
    }
    out.field_constant += field.dot(ints.nuclear_dipole);
    out.field += field;
    return out;
}

} // namespace qderiv::chem
