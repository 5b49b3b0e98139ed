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

#include <algorithm>
#include <cmath>
#include <random>

#include "qderiv/chem/molecule.hpp"
#include "qderiv/deriv/derivatives.hpp"
#include "qderiv/errors.hpp"
#include "qderiv/ops/dense.hpp"
#include "qderiv/sim/circuit.hpp"
#include "qderiv/vqe/vqe.hpp"

using namespace qderiv;
using namespace qderiv::vqe;
using Catch::Approx;

namespace {

deriv::HamiltonianFamily h2_family(double r, deriv::FamilyOptions opts = {}) {
    const auto mol = chem::hydrogen_chain({r});
    return deriv::HamiltonianFamily(mol, deriv::chain_parameters(mol, false), opts);
}

ops::PauliSum single(const char *letters) {
    return ops::PauliSum(1, {ops::PauliTerm::from_letters(1, letters)});
}

std::vector<double> random_theta(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> out(k);
    for (auto &x : out) x = d(rng);
    return out;
}

OptimizerConfig tight() {
    OptimizerConfig o;
    o.learning_rate = 0.5;
    o.init_scale = 0.5;
    o.seed = 1;
    o.energy_tolerance = 1e-13;
    o.max_iterations = 50000;
    return o;
}

} // namespace

TEST_CASE("parameter-shift gradient of the cosine model") {
    sim::ParameterizedCircuit c(1);
    c.add(sim::Gate::ry(0, 0));
    const auto z = single("Z");
    REQUIRE(parameter_shift_gradient(c, {0.0}, z, 0) == Approx(0.0).margin(1e-14));
    REQUIRE(parameter_shift_gradient(c, {M_PI / 2}, z, 0) == Approx(-1.0).margin(1e-14));
    REQUIRE(parameter_shift_hessian(c, {0.0}, z, 0, 0) == Approx(-1.0).margin(1e-14));
    REQUIRE_THROWS_AS(parameter_shift_gradient(c, {0.0}, z, 1), ArgumentError);
}

TEST_CASE("parameter-shift gradient matches finite differences") {
    const auto fam = h2_family(0.74);
    const auto h = fam(fam.base());
    auto circ = fam.reference_circuit();
    circ.append(sim::hea_ansatz(4, 2));
    const auto theta = random_theta(circ.slot_count(), 2);
    const EnergyFunction f(h, circ);
    const auto ps = parameter_shift_gradient(f, theta);
    const auto adj = adjoint_gradient(f, theta);
    const double step = 1e-5;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        auto tp = theta;
        auto tm = theta;
        tp[j] += step;
        tm[j] -= step;
        const double fd = (f(tp) - f(tm)) / (2.0 * step);
        REQUIRE(ps[j] == Approx(fd).margin(1e-6));
        REQUIRE(adj[j] == Approx(ps[j]).margin(1e-10));
        REQUIRE(parameter_shift_gradient(circ, theta, h, j, 0.4) == Approx(ps[j]).margin(1e-10));
    }
}

TEST_CASE("parameter-shift Hessian is symmetric and matches finite differences") {
    const auto fam = h2_family(0.74);
    const auto h = fam(fam.base());
    auto circ = fam.reference_circuit();
    circ.append(sim::hea_ansatz(4, 1));
    const auto theta = random_theta(circ.slot_count(), 5);
    const double step = 1e-4;
    for (std::size_t i : {0U, 3U, 7U}) {
        for (std::size_t j : {1U, 3U, 12U}) {
            const double hij = parameter_shift_hessian(circ, theta, h, i, j);
            REQUIRE(hij == Approx(parameter_shift_hessian(circ, theta, h, j, i)).margin(1e-12));
            auto tp = theta;
            auto tm = theta;
            tp[i] += step;
            tm[i] -= step;
            const double fd = (parameter_shift_gradient(circ, tp, h, j) -
                               parameter_shift_gradient(circ, tm, h, j)) /
                              (2.0 * step);
            REQUIRE(hij == Approx(fd).margin(1e-6));
        }
    }
}

TEST_CASE("single-qubit minimization reaches the Z ground state") {
    sim::ParameterizedCircuit c(1);
    c.add(sim::Gate::ry(0, 0));
    auto opt = tight();
    opt.init_scale = 0.0;
    auto res = vqe_minimize(single("Z"), c, sim::ParameterizedCircuit(1), opt, std::vector<double>{0.3});
    REQUIRE(res.converged);
    REQUIRE(res.energy == Approx(-1.0).margin(1e-10));
    double lowest = res.trace.front().energy;
    for (const auto &t : res.trace) lowest = std::min(lowest, t.energy);
    REQUIRE(res.energy == Approx(lowest).margin(1e-15));
}

TEST_CASE("tapered single-parameter ansatz reproduces the reduced ground energy") {
    deriv::FamilyOptions o;
    o.taper = true;
    const auto fam = h2_family(0.741, o);
    const auto h = fam(fam.base());
    REQUIRE(h.n_qubits() == 2);
    auto opt = tight();
    opt.init_scale = 0.0;
    const auto res = vqe_minimize(h, sim::tapered_ansatz(), sim::ParameterizedCircuit(2), opt);
    REQUIRE(res.energy == Approx(-1.137).margin(1.6e-3));
    REQUIRE(res.energy == Approx(ops::ground_energy(h)).margin(1e-8));
}

TEST_CASE("full-register VQE matches the dense ground energy") {
    const auto fam = h2_family(0.9);
    const auto h = fam(fam.base());
    const auto res = vqe_minimize(h, sim::hea_ansatz(4, 10), fam.reference_circuit(), tight());
    REQUIRE(res.energy == Approx(ops::ground_energy(h)).margin(1e-6));
    REQUIRE(res.evaluations > 0);
}

TEST_CASE("SPSA is deterministic under a fixed seed and lowers the energy") {
    const auto fam = h2_family(0.74);
    const auto h = fam(fam.base());
    OptimizerConfig o;
    o.kind = OptimizerKind::Spsa;
    o.max_iterations = 300;
    o.seed = 4;
    const auto ansatz = sim::hea_ansatz(4, 1);
    const auto a = vqe_minimize(h, ansatz, fam.reference_circuit(), o);
    const auto b = vqe_minimize(h, ansatz, fam.reference_circuit(), o);
    REQUIRE(a.energy == b.energy);
    REQUIRE(a.energy <= a.trace.front().energy);
}

TEST_CASE("optimizer settings are validated") {
    OptimizerConfig o;
    o.learning_rate = 0.0;
    REQUIRE_THROWS_AS(o.validate(), ArgumentError);
    o = OptimizerConfig{};
    o.momentum = 1.0;
    REQUIRE_THROWS_AS(o.validate(), ArgumentError);
    o = OptimizerConfig{};
    o.energy_tolerance = -1.0;
    REQUIRE_THROWS_AS(o.validate(), ArgumentError);
}

TEST_CASE("SS-VQE defaults and validation") {
    REQUIRE(lowest_weight_bitstrings(3, 5) == std::vector<std::uint64_t>{0, 1, 2, 4, 3});
    SSVQEConfig c;
    c.k = 3;
    const auto w = c.resolved_weights();
    REQUIRE(w == std::vector<double>{1.0, 0.5, 0.25});
    c.weights = {1.0, 1.0, 0.5};
    REQUIRE_THROWS_AS(c.resolved_weights(), ArgumentError);
    c.weights.clear();
    c.initial_states = {1, 1, 2};
    REQUIRE_THROWS_AS(c.resolved_states(2), ArgumentError);
    c.initial_states = {1, 2, 9};
    REQUIRE_THROWS_AS(c.resolved_states(2), ArgumentError);
    c.initial_states.clear();
    c.ratio = 1.0;
    REQUIRE_THROWS_AS(c.resolved_weights(), ArgumentError);
}

TEST_CASE("SS-VQE recovers the low-lying even-parity spectrum") {
    deriv::FamilyOptions o;
    o.taper = true;
    o.taper_scope = deriv::TaperScope::Parity;
    const auto fam = h2_family(0.74, o);
    const auto h = fam(fam.base());
    REQUIRE(h.n_qubits() == 3);
    const auto spec = ops::spectrum(h);
    auto opt = tight();
    opt.energy_tolerance = 1e-10;
    const auto ansatz = sim::hea_ansatz(3, 6);

    SSVQEConfig one;
    one.repeats = 1;
    const auto g = ssvqe_minimize(h, ansatz, one, opt);
    REQUIRE(g.states.size() == 1);
    REQUIRE(g.states[0].energy == Approx(spec(0)).margin(5e-3));

    SSVQEConfig four;
    four.k = 4;
    four.repeats = 1;
    const auto r = ssvqe_minimize(h, ansatz, four, opt);
    REQUIRE(r.states.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(r.states[i].energy == Approx(spec(static_cast<Eigen::Index>(i))).margin(5e-3));
        if (i > 0) {
            REQUIRE(r.states[i].energy >= r.states[i - 1].energy);
        }
    }

    four.initial_states = {4, 2, 1, 0};
    const auto p = ssvqe_minimize(h, ansatz, four, opt);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(p.states[i].energy == Approx(r.states[i].energy).margin(5e-3));
    }
}

TEST_CASE("particle filter keeps states of the requested electron count") {
    const auto fam = h2_family(0.74);
    const auto es = ops::eigensystem(fam(fam.base()));
    const auto n_op = fam.number_operator();
    const auto n_dense = ops::to_dense_matrix(n_op);
    std::vector<sim::Statevector> states;
    std::size_t expected = 0;
    for (Eigen::Index k = 0; k < 8; ++k) {
        const Eigen::VectorXcd v = es.vectors.col(k);
        states.emplace_back(4, v);
        const double n = (v.adjoint() * n_dense * v)(0, 0).real();
        expected += (std::abs(n - 2.0) < 1e-6) ? 1 : 0;
    }
    const auto kept = particle_filter(states, n_op, 2);
    REQUIRE(kept.size() == expected);
    REQUIRE(expected < states.size());
    for (const auto &k : kept) {
        REQUIRE(k.particles == Approx(2.0).margin(1e-6));
    }
}
