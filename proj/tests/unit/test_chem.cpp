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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "qderiv/chem/integrals.hpp"
#include "qderiv/chem/molecule.hpp"
#include "qderiv/chem/scf.hpp"
#include "qderiv/errors.hpp"

using namespace qderiv;
using namespace qderiv::chem;
using Catch::Approx;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
double simpson(const std::function<double(double)> &f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int k = 1; k < n; ++k) {
        acc += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

// Boys function from its defining integral int_0^1 exp(-t u^2) du.
double boys_quadrature(double t) {
    return simpson([t](double u) { return std::exp(-t * u * u); }, 0.0, 1.0, 2000);
}

// Unnormalized contracted s function as a list of (alpha, c) on a center z.
struct Radial {
    std::vector<Primitive> prims;
    double z;
};

// Overlap of two contracted s functions on the z axis, by brute-force 3D quadrature
// reduced to (rho, z) cylindrical coordinates.
double overlap_quadrature(const Radial &a, const Radial &b) {
    auto density = [&](double rho, double z) {
        double fa = 0.0;
        double fb = 0.0;
        for (const auto &p : a.prims) {
            fa += p.coefficient * std::exp(-p.exponent * (rho * rho + (z - a.z) * (z - a.z)));
        }
        for (const auto &p : b.prims) {
            fb += p.coefficient * std::exp(-p.exponent * (rho * rho + (z - b.z) * (z - b.z)));
        }
        return fa * fb;
    };
    return simpson(
        [&](double z) {
            return simpson([&](double rho) { return 2.0 * M_PI * rho * density(rho, z); }, 0.0,
                           12.0, 1200);
        },
        -12.0, 14.0, 1600);
}

// Kinetic element <a|-1/2 lap|a> for one contracted s function at the origin, by radial
// quadrature of 1/2 |grad phi|^2.
double kinetic_quadrature(const Radial &a) {
    return simpson(
        [&](double r) {
            double d = 0.0;
            for (const auto &p : a.prims) {
                d += -2.0 * p.exponent * r * p.coefficient * std::exp(-p.exponent * r * r);
            }
            return 0.5 * d * d * 4.0 * M_PI * r * r;
        },
        0.0, 15.0, 6000);
}

// (aa|aa) for one contracted s function at the origin: radial density and its potential.
double coulomb_quadrature(const Radial &a) {
    auto rho = [&](double r) {
        double f = 0.0;
        for (const auto &p : a.prims) {
            f += p.coefficient * std::exp(-p.exponent * r * r);
        }
        return f * f;
    };
    // Spherical potential V(r) = 4 pi [ (1/r) int_0^r rho s^2 ds + int_r^inf rho s ds ].
    const int n = 6000;
    const double rmax = 15.0;
    const double h = rmax / n;
    std::vector<double> inner(n + 1, 0.0);
    std::vector<double> outer(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        const double r0 = (k - 1) * h;
        const double r1 = k * h;
        const double rm = 0.5 * (r0 + r1);
        inner[k] = inner[k - 1] +
                   h / 6.0 * (rho(r0) * r0 * r0 + 4.0 * rho(rm) * rm * rm + rho(r1) * r1 * r1);
    }
    for (int k = n - 1; k >= 0; --k) {
        const double r0 = k * h;
        const double r1 = (k + 1) * h;
        const double rm = 0.5 * (r0 + r1);
        outer[k] = outer[k + 1] + h / 6.0 * (rho(r0) * r0 + 4.0 * rho(rm) * rm + rho(r1) * r1);
    }
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double r = k * h;
        const double v = 4.0 * M_PI * ((k == 0 ? 0.0 : inner[k] / r) + outer[k]);
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += w * v * rho(r) * 4.0 * M_PI * r * r;
    }
    return acc * h / 3.0;
}

Molecule h2(double r_angstrom) { return hydrogen_chain({r_angstrom}); }

} // namespace

TEST_CASE("xyz parsing") {
    const auto mol = parse_xyz("2\n\nH 0 0 0\nH 0 0 0.741\n");
    CHECK(mol.size() == 2);
    CHECK(mol.electron_count() == 2);
    CHECK(mol.atoms()[1].position.z() == Approx(0.741));

    const auto h3 = parse_xyz("3\n\nH 0 0 0\nH 0 0 0.936\nH 0 0 1.872\n");
    CHECK(h3.electron_count() == 3);

    CHECK_THROWS_AS(parse_xyz("1\ncharge=1\nH 0 0 0\n"), InvalidMoleculeError);
    CHECK_THROWS_AS(parse_xyz("1\n\nHe 0 0 0\n"), UnsupportedElementError);
    try {
        parse_xyz("2\n\nH 0 0 0\nH 0 zero 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_xyz("2\n\nH 0 0 0\nH 0 0 0\n"), SingularGeometryError);
}

TEST_CASE("nuclear repulsion and dipole") {
    const auto one_bohr = hydrogen_chain({kBohrAngstrom});
    CHECK(nuclear_repulsion(one_bohr) == Approx(1.0).epsilon(1e-14));
    // Hand evaluation: 0.52917721092 / 0.741.
    CHECK(nuclear_repulsion(h2(0.741)) == Approx(0.714139286).epsilon(1e-9));
    const auto mol = h2(0.741);
    const Eigen::Vector3d mid = 0.5 * (mol.position_bohr(0) + mol.position_bohr(1));
    CHECK(nuclear_dipole(mol, mid).norm() < 1e-14);
}

TEST_CASE("Boys function") {
    CHECK(boys_f0(0.0) == 1.0);
    CHECK(boys_f0(1.0) == Approx(0.746824).margin(1e-6));
    for (double t : {1e-8, 5e-5, 9.9e-5, 1e-4, 0.3, 1.0, 7.5, 30.0}) {
        CHECK(boys_f0(t) == Approx(boys_quadrature(t)).epsilon(1e-10));
    }
}

TEST_CASE("STO-3G integrals against quadrature") {
    const auto mol = h2(0.7);
    const auto basis = sto3g(mol);
    const auto ints = core_integrals(mol, basis);
    REQUIRE(basis.size() == 2);
    REQUIRE(basis.shells[0].primitives.size() == 3);

    const double d = 0.7 / kBohrAngstrom;
    const Radial a{basis.shells[0].primitives, 0.0};
    const Radial b{basis.shells[1].primitives, d};

    CHECK(ints.overlap(0, 0) == Approx(1.0).margin(1e-10));
    CHECK(ints.overlap(0, 1) == Approx(overlap_quadrature(a, b)).margin(1e-8));
    CHECK(ints.kinetic(0, 0) == Approx(kinetic_quadrature(a)).margin(1e-8));
    CHECK(ints.two_electron(0, 0, 0, 0) == Approx(coulomb_quadrature(a)).margin(1e-8));
}

TEST_CASE("integral symmetries") {
    const auto mol = hydrogen_chain({0.8, 1.1});
    const auto ints = core_integrals(mol, sto3g(mol));
    const std::size_t n = ints.size();
    CHECK((ints.overlap - ints.overlap.transpose()).norm() < 1e-14);
    CHECK((ints.kinetic - ints.kinetic.transpose()).norm() < 1e-14);
    CHECK((ints.nuclear - ints.nuclear.transpose()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ints.overlap);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const double v = ints.two_electron(i, j, k, l);
                    for (double w : {ints.two_electron(j, i, k, l), ints.two_electron(i, j, l, k),
                                     ints.two_electron(k, l, i, j), ints.two_electron(l, k, j, i)}) {
                        worst = std::max(worst, std::abs(v - w));
                    }
                }
    CHECK(worst < 1e-12);
    auto p_basis = sto3g(mol);
    p_basis.shells[0].angular_momentum = 1;
    CHECK_THROWS_AS(core_integrals(mol, p_basis), UnsupportedBasisError);
}

TEST_CASE("translation invariance") {
    const auto mol = hydrogen_chain({0.9, 1.3});
    const auto moved = mol.translated(Eigen::Vector3d(1.7, -0.4, 2.2));
    const auto a = core_integrals(mol, sto3g(mol));
    const auto b = core_integrals(moved, sto3g(moved));
    CHECK((a.overlap - b.overlap).norm() < 1e-12);
    CHECK((a.core_hamiltonian() - b.core_hamiltonian()).norm() < 1e-10);
    CHECK((a.dipole[2] - b.dipole[2]).norm() < 1e-10);
    CHECK(a.nuclear_repulsion == Approx(b.nuclear_repulsion).margin(1e-12));
}

TEST_CASE("restricted Hartree-Fock") {
    const auto mol = h2(0.735);
    const auto ints = core_integrals(mol, sto3g(mol));
    const auto rhf = run_rhf(ints, 2);
    CHECK(rhf.energy == Approx(-1.117).margin(1e-3));
    const Eigen::MatrixXd c = rhf.coefficients;
    CHECK((c.transpose() * ints.overlap * c - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-8);
    CHECK(rhf.iterations >= 1);

    const auto h3 = hydrogen_chain({0.936, 0.936});
    CHECK_THROWS_AS(run_rhf(core_integrals(h3, sto3g(h3)), 3), RestrictedShellError);

    RhfOptions tight;
    tight.max_cycles = 0;
    CHECK_THROWS_AS(run_rhf(ints, 2, tight), ScfConvergenceError);
}

TEST_CASE("spin-orbital transform") {
    SECTION("identity transform on orthonormal fake integrals") {
        IntegralSet fake;
        fake.overlap = Eigen::MatrixXd::Identity(2, 2);
        fake.kinetic = (Eigen::MatrixXd(2, 2) << -1.0, 0.2, 0.2, -0.5).finished();
        fake.nuclear = Eigen::MatrixXd::Zero(2, 2);
        fake.field_one_body = Eigen::MatrixXd::Zero(2, 2);
        fake.eri.assign(16, 0.0);
        for (auto &d : fake.dipole) {
            d = Eigen::MatrixXd::Zero(2, 2);
        }
        fake.nuclear_repulsion = 0.25;
        const auto so = spin_orbital_integrals(fake, Eigen::MatrixXd::Identity(2, 2),
                                               OrbitalKind::Lowdin);
        REQUIRE(so.modes() == 4);
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) {
                const double expected = (p % 2 == q % 2) ? fake.kinetic(p / 2, q / 2) : 0.0;
                CHECK(so.one_body(p, q) == expected);
            }
        }
        CHECK(so.constant == 0.25);
        CHECK(so.provenance == OrbitalKind::Lowdin);
    }
    SECTION("general orbital rotation matches a direct contraction") {
        const auto mol = hydrogen_chain({0.8, 1.1});
        const auto ints = core_integrals(mol, sto3g(mol));
        Eigen::MatrixXd c(3, 3);
        c << 0.9, -0.3, 0.2, 0.1, 0.8, -0.5, 0.4, 0.2, 1.1;
        const auto so = spin_orbital_integrals(ints, c, OrbitalKind::Lowdin);
        const std::size_t n = 3;
        auto mo = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
            double acc = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t l = 0; l < n; ++l)
                            acc += c(a, p) * c(b, q) * c(k, r) * c(l, s) *
                                   ints.two_electron(a, b, k, l);
            return acc;
        };
        double worst = 0.0;
        double spin_leak = 0.0;
        for (std::size_t p = 0; p < 6; ++p)
            for (std::size_t q = 0; q < 6; ++q)
                for (std::size_t r = 0; r < 6; ++r)
                    for (std::size_t s = 0; s < 6; ++s) {
                        const bool allowed = (p % 2 == s % 2) && (q % 2 == r % 2);
                        const double v = so.two(p, q, r, s);
                        if (allowed) {
                            worst = std::max(
                                worst, std::abs(v - 0.5 * mo(p / 2, s / 2, q / 2, r / 2)));
                        } else {
                            spin_leak = std::max(spin_leak, std::abs(v));
                        }
                    }
        CHECK(worst < 1e-12);
        CHECK(spin_leak == 0.0);
        const Eigen::MatrixXd h = c.transpose() * ints.core_hamiltonian() * c;
        for (std::size_t p = 0; p < 6; ++p)
            for (std::size_t q = 0; q < 6; ++q) {
                if (p % 2 != q % 2) {
                    CHECK(so.one_body(p, q) == 0.0);
                } else {
                    CHECK(so.one_body(p, q) == Approx(h(p / 2, q / 2)).margin(1e-12));
                }
            }
    }
    SECTION("singular orbitals are rejected") {
        const auto mol = h2(0.74);
        const auto ints = core_integrals(mol, sto3g(mol));
        Eigen::MatrixXd c(2, 2);
        c << 1.0, 2.0, 0.5, 1.0;
        CHECK_THROWS_AS(spin_orbital_integrals(ints, c, OrbitalKind::Rhf), TransformError);
    }
}

TEST_CASE("field coupling") {
    const auto mol = h2(0.74);
    const auto ints = core_integrals(mol, sto3g(mol));
    const auto zero = apply_field(ints, Eigen::Vector3d::Zero());
    CHECK((zero.core_hamiltonian() - ints.core_hamiltonian()).norm() == 0.0);
    CHECK(zero.constant_energy() == ints.constant_energy());

    const Eigen::Vector3d f1(0.0, 0.01, 0.02);
    const Eigen::Vector3d f2(0.005, -0.02, 0.03);
    const auto a = apply_field(apply_field(ints, f1), f2);
    const auto b = apply_field(ints, f1 + f2);
    CHECK((a.core_hamiltonian() - b.core_hamiltonian()).norm() < 1e-12);
    CHECK(a.constant_energy() == Approx(b.constant_energy()).margin(1e-12));

    const auto fz = apply_field(ints, Eigen::Vector3d(0, 0, 0.001));
    const Eigen::MatrixXd slope = (fz.core_hamiltonian() - ints.core_hamiltonian()) / 0.001;
    CHECK((slope + ints.dipole[2]).norm() < 1e-10);

    CHECK_THROWS_AS(apply_field(ints, Eigen::Vector3d(0, 0, 0.2)), FieldRegimeError);
    CHECK_NOTHROW(apply_field(ints, Eigen::Vector3d(0, 0, 0.2), true));
}
