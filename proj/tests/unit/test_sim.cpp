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
#include <random>

#include "qderiv/errors.hpp"
#include "qderiv/ops/dense.hpp"
#include "qderiv/ops/pauli.hpp"
#include "qderiv/sim/circuit.hpp"

using namespace qderiv;
using namespace qderiv::sim;
using Catch::Approx;

namespace {

// Dense unitary of one gate, assembled entry by entry.
Eigen::MatrixXcd gate_matrix(const Gate &g, const std::vector<double> &theta, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(1U << n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint32_t t = 1U << g.target;
    const std::uint32_t c = 1U << g.control;
    Eigen::Matrix2cd u;
    const double a = g.angle(theta);
    switch (g.kind) {
    case GateKind::X:
        u << 0, 1, 1, 0;
        break;
    case GateKind::H:
        u << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
        break;
    case GateKind::Ry:
        u << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
        break;
    case GateKind::Rz:
        u << std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2);
        break;
    default:
        break;
    }
    for (std::uint32_t r = 0; r < dim; ++r) {
        for (std::uint32_t col = 0; col < dim; ++col) {
            if (g.kind == GateKind::CNOT) {
                const std::uint32_t image = (col & c) ? (col ^ t) : col;
                m(r, col) = (r == image) ? 1.0 : 0.0;
            } else if (g.kind == GateKind::CZ) {
                m(r, col) = (r == col) ? (((col & c) && (col & t)) ? -1.0 : 1.0) : 0.0;
            } else if ((r & ~t) == (col & ~t)) {
                m(r, col) = u((r & t) ? 1 : 0, (col & t) ? 1 : 0);
            }
        }
    }
    return m;
}

Eigen::VectorXcd dense_run(const ParameterizedCircuit &circ, const std::vector<double> &theta) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1U << circ.n_qubits());
    v(0) = 1.0;
    for (const auto &g : circ.gates()) {
        v = gate_matrix(g, theta, circ.n_qubits()) * v;
    }
    return v;
}

std::vector<double> random_theta(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-M_PI, M_PI);
    std::vector<double> out(k);
    for (auto &x : out) x = d(rng);
    return out;
}

ops::PauliSum random_observable(std::size_t n, std::size_t terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> bits(0, (1U << n) - 1U);
    std::normal_distribution<double> coef(0.0, 1.0);
    std::vector<ops::PauliTerm> out;
    for (std::size_t k = 0; k < terms; ++k) {
        out.push_back(ops::PauliTerm{coef(rng), bits(rng), bits(rng), n});
    }
    return ops::PauliSum(n, std::move(out));
}

} // namespace

TEST_CASE("basis states and register limits") {
    const Statevector s(3, 5);
    REQUIRE(s.dimension() == 8);
    REQUIRE(std::abs(s.amplitudes()(5)) == Approx(1.0));
    REQUIRE_THROWS_AS(Statevector(3, 8), ArgumentError);
    REQUIRE_THROWS_AS(Statevector(kMaxSimQubits + 1), SizeLimitError);
}

TEST_CASE("hardware-efficient ansatz layout") {
    const auto c = hea_ansatz(4, 3);
    REQUIRE(c.slot_count() == 2 * 4 * (3 + 1));
    REQUIRE(c.depth() == 3);
    std::size_t cnots = 0;
    for (const auto &g : c.gates()) cnots += (g.kind == GateKind::CNOT) ? 1 : 0;
    REQUIRE(cnots == 3 * 3);
    REQUIRE_THROWS_AS(hea_ansatz(4, 0), ArgumentError);
}

TEST_CASE("gate application matches dense matrices") {
    for (auto ent : {Entangler::CnotChain, Entangler::CzChain}) {
        auto c = hea_ansatz(3, 2, ent);
        c.add(Gate::h(1));
        c.add(Gate::x(2));
        const auto theta = random_theta(c.slot_count(), 11);
        const Statevector psi = run(c, theta);
        const Eigen::VectorXcd ref = dense_run(c, theta);
        REQUIRE((psi.amplitudes() - ref).norm() < 1e-12);
    }
}

TEST_CASE("norm is preserved and the inverse undoes the circuit") {
    const auto c = hea_ansatz(4, 3);
    const auto theta = random_theta(c.slot_count(), 3);
    const Statevector input(4, 6);
    const Statevector psi = bind_and_run(c, theta, input);
    REQUIRE(psi.norm() == Approx(1.0).margin(1e-12));
    const Statevector back = bind_and_run(c.inverse(), theta, psi);
    REQUIRE((back.amplitudes() - input.amplitudes()).norm() < 1e-12);
}

TEST_CASE("single-qubit expectations") {
    const auto z = ops::PauliSum(1, {ops::PauliTerm::from_letters(1, "Z")});
    const auto x = ops::PauliSum(1, {ops::PauliTerm::from_letters(1, "X")});
    REQUIRE(expectation(z, Statevector(1)) == Approx(1.0));
    ParameterizedCircuit plus(1);
    plus.add(Gate::h(0));
    REQUIRE(expectation(x, run(plus, {})) == Approx(1.0));
    ParameterizedCircuit ry(1);
    ry.add(Gate::ry(0, 0));
    for (double t : {0.0, 0.3, 1.2, 2.9}) {
        REQUIRE(expectation(z, run(ry, {t})) == Approx(std::cos(t)).margin(1e-14));
        REQUIRE(expectation(x, run(ry, {t})) == Approx(std::sin(t)).margin(1e-14));
    }
}

TEST_CASE("compiled observable matches the dense oracle") {
    const auto obs = random_observable(4, 20, 5);
    const auto c = hea_ansatz(4, 2);
    const auto psi = run(c, random_theta(c.slot_count(), 8));
    const Eigen::MatrixXcd m = ops::to_dense_matrix(obs);
    const double ref = (psi.amplitudes().adjoint() * m * psi.amplitudes())(0, 0).real();
    REQUIRE(expectation(obs, psi) == Approx(ref).margin(1e-12));
    const CompiledObservable compiled(obs);
    REQUIRE((compiled.apply(psi).amplitudes() - m * psi.amplitudes()).norm() < 1e-12);
    const auto phi = run(c, random_theta(c.slot_count(), 9));
    const Complex me = (phi.amplitudes().adjoint() * m * psi.amplitudes())(0, 0);
    REQUIRE(std::abs(compiled.matrix_element(phi, psi) - me) < 1e-12);
}

TEST_CASE("complex coefficients are rejected") {
    const auto obs = ops::PauliSum(1, {ops::PauliTerm::from_letters(1, "Z", Complex(0.0, 1.0))});
    REQUIRE_THROWS_AS(expectation(obs, Statevector(1)), NotObservableError);
}

TEST_CASE("generator overlap equals the explicit Pauli product") {
    const auto c = hea_ansatz(3, 1);
    const auto psi = run(c, random_theta(c.slot_count(), 21));
    const auto lam = run(c, random_theta(c.slot_count(), 22));
    for (std::size_t q = 0; q < 3; ++q) {
        for (char letter : {'Y', 'Z'}) {
            const Gate g = letter == 'Y' ? Gate::ry(q, 0) : Gate::rz(q, 0);
            const auto p = ops::PauliSum(3, {ops::PauliTerm::from_sparse(3, {{q, letter}})});
            const Complex ref =
                (lam.amplitudes().adjoint() * ops::to_dense_matrix(p) * psi.amplitudes())(0, 0);
            REQUIRE(std::abs(generator_overlap(g, lam, psi) - ref) < 1e-12);
        }
    }
    REQUIRE_THROWS_AS(generator_overlap(Gate::h(0), lam, psi), ArgumentError);
}

TEST_CASE("sampled estimates converge to the exact value") {
    const auto obs = random_observable(3, 8, 17);
    const auto c = hea_ansatz(3, 1);
    const auto theta = random_theta(c.slot_count(), 4);
    const auto psi = run(c, theta);
    const double exact = expectation(obs, psi);
    double prev_rms = 0.0;
    for (std::size_t shots : {200U, 20000U}) {
        double sq = 0.0;
        const int trials = 40;
        for (int s = 0; s < trials; ++s) {
            const auto est = sampled_estimate(obs, psi, shots, static_cast<std::uint64_t>(s));
            REQUIRE(std::abs(est.value - exact) < 5.0 * est.standard_error + 1e-12);
            sq += (est.value - exact) * (est.value - exact);
        }
        const double rms = std::sqrt(sq / trials);
        if (prev_rms > 0.0) {
            REQUIRE(rms < prev_rms);
        }
        prev_rms = rms;
    }
    REQUIRE(sampled_expectation(obs, c, theta, 500, 9) == sampled_expectation(obs, c, theta, 500, 9));
    REQUIRE_THROWS_AS(sampled_estimate(obs, psi, 0, 1), ArgumentError);
}

TEST_CASE("overlap probability") {
    const auto c = hea_ansatz(3, 1);
    const auto t1 = random_theta(c.slot_count(), 31);
    const auto t2 = random_theta(c.slot_count(), 32);
    const double ref = std::norm(run(c, t1).inner(run(c, t2)));
    const double p12 = overlap_probability(c, t1, c, t2);
    REQUIRE(p12 == Approx(ref).margin(1e-12));
    REQUIRE(overlap_probability(c, t2, c, t1) == Approx(p12).margin(1e-12));
    REQUIRE(overlap_probability(c, t1, c, t1) == Approx(1.0).margin(1e-12));
    const double sampled = sampled_overlap_probability(c, t1, c, t2, 40000, 3);
    REQUIRE(std::abs(sampled - p12) < 5.0 * std::sqrt(p12 * (1.0 - p12) / 40000.0) + 1e-3);
}

TEST_CASE("parameter vector length is checked") {
    const auto c = hea_ansatz(2, 1);
    REQUIRE_THROWS_AS(run(c, {0.1}), ArgumentError);
}
