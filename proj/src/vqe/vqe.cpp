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

#include "qderiv/vqe/vqe.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <random>

#include "qderiv/errors.hpp"

namespace qderiv::vqe {

namespace {

struct Problem {
    std::function<double(const std::vector<double> &)> value;
    std::function<std::vector<double>(const std::vector<double> &)> gradient;
};

bool window_converged(const std::vector<TraceEntry> &trace, int window, double tol) {
    if (static_cast<int>(trace.size()) <= window) {
        return false;
    }
    for (int k = 0; k < window; ++k) {
        const std::size_t i = trace.size() - 1 - static_cast<std::size_t>(k);
        if (std::abs(trace[i].energy - trace[i - 1].energy) >= tol) {
            return false;
        }
    }
    return true;
}

VQEResult optimize(const Problem &p, std::vector<double> theta, const OptimizerConfig &opt) {
    VQEResult res;
    double e = p.value(theta);
    res.trace.push_back({opt.trace_parameters ? theta : std::vector<double>{}, e});
    std::vector<double> best_theta = theta;
    double best = e;
    std::vector<double> velocity(theta.size(), 0.0);
    std::mt19937_64 rng(sim::stream_seed(opt.seed, 0x5350u));
    for (int it = 1; it <= opt.max_iterations; ++it) {
        if (opt.kind == OptimizerKind::GradientDescent) {
            const auto g = p.gradient(theta);
            for (std::size_t k = 0; k < theta.size(); ++k) {
                velocity[k] = opt.momentum * velocity[k] + g[k];
                theta[k] -= opt.learning_rate * velocity[k];
            }
        } else {
            const double ak = opt.spsa_a / std::pow(it + opt.spsa_big_a, opt.spsa_alpha);
            const double ck = opt.spsa_c / std::pow(it, opt.spsa_gamma);
            std::vector<double> delta(theta.size());
            for (auto &d : delta) {
                d = (rng() & 1U) ? 1.0 : -1.0;
            }
            auto plus = theta;
            auto minus = theta;
            for (std::size_t k = 0; k < theta.size(); ++k) {
                plus[k] += ck * delta[k];
                minus[k] -= ck * delta[k];
            }
            const double diff = (p.value(plus) - p.value(minus)) / (2.0 * ck);
            for (std::size_t k = 0; k < theta.size(); ++k) {
                theta[k] -= ak * diff * delta[k];
            }
        }
        e = p.value(theta);
        res.trace.push_back({opt.trace_parameters ? theta : std::vector<double>{}, e});
        res.iterations = it;
        if (!std::isfinite(e)) {
            break;
        }
        if (e < best) {
            best = e;
            best_theta = theta;
        }
        if (window_converged(res.trace, opt.window, opt.energy_tolerance)) {
            res.converged = true;
            break;
        }
    }
    res.theta = std::move(best_theta);
    res.energy = best;
    return res;
}

std::vector<std::vector<std::size_t>> slot_occurrences(const sim::ParameterizedCircuit &c) {
    std::vector<std::vector<std::size_t>> occ(c.slot_count());
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
        const auto &gate = c.gates()[g];
        if (gate.parameterized()) {
            occ[static_cast<std::size_t>(gate.slot)].push_back(g);
        }
    }
    return occ;
}

void check_shift(double s) {
    if (!(s > 0.0 && s < M_PI)) {
        throw ArgumentError("parameter shift must lie in (0, pi)");
    }
}

} // namespace

void OptimizerConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw ArgumentError("learning rate must be positive");
    }
    check_shift(shift);
    if (!(energy_tolerance > 0.0)) {
        throw ArgumentError("energy tolerance must be positive");
    }
    if (max_iterations < 0 || window < 1) {
        throw ArgumentError("invalid iteration budget or window");
    }
    if (kind == OptimizerKind::Spsa && !(spsa_a > 0.0 && spsa_c > 0.0 && spsa_big_a >= 0.0)) {
        throw ArgumentError("invalid SPSA gains");
    }
    if (init_scale < 0.0) {
        throw ArgumentError("initial parameter scale must be non-negative");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ArgumentError("momentum must lie in [0, 1)");
    }
}

EnergyFunction::EnergyFunction(const ops::PauliSum &observable, sim::ParameterizedCircuit circuit)
    : EnergyFunction(observable, circuit, sim::Statevector(circuit.n_qubits())) {}

EnergyFunction::EnergyFunction(const ops::PauliSum &observable, sim::ParameterizedCircuit circuit,
                               sim::Statevector input)
    : obs_(observable), circuit_(std::move(circuit)), input_(std::move(input)),
      occurrences_(slot_occurrences(circuit_)) {
    if (!observable.is_observable()) {
        throw NotObservableError("energy requested for a non-Hermitian Pauli sum");
    }
    if (observable.n_qubits() != circuit_.n_qubits() || input_.n_qubits() != circuit_.n_qubits()) {
        throw ArgumentError("observable, circuit and input registers differ");
    }
}

sim::Statevector EnergyFunction::state(const std::vector<double> &theta) const {
    return sim::bind_and_run(circuit_, theta, input_);
}

double EnergyFunction::operator()(const std::vector<double> &theta) const {
    ++evaluations_;
    return obs_.expectation(state(theta));
}

double EnergyFunction::shifted(const std::vector<double> &theta,
                               const std::vector<std::pair<std::size_t, double>> &shifts) const {
    if (theta.size() != circuit_.slot_count()) {
        throw ArgumentError("parameter vector length does not match the circuit");
    }
    ++evaluations_;
    sim::Statevector psi = input_;
    const auto &gates = circuit_.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        sim::Gate gate = gates[g];
        for (const auto &[index, delta] : shifts) {
            if (index == g) {
                gate.offset += delta;
            }
        }
        sim::apply_gate(gate, theta, psi);
    }
    return obs_.expectation(psi);
}

std::vector<double> initial_parameters(std::size_t count, const OptimizerConfig &opt,
                                       std::uint64_t stream) {
    std::vector<double> theta(count, 0.0);
    if (opt.init_scale > 0.0) {
        std::mt19937_64 rng(sim::stream_seed(opt.seed, 0x1000u + stream));
        for (auto &t : theta) {
            t = opt.init_scale * (2.0 * sim::unit_double(rng()) - 1.0);
        }
    }
    return theta;
}

std::vector<double> parameter_shift_gradient(const EnergyFunction &f,
                                             const std::vector<double> &theta, double s) {
    check_shift(s);
    const auto &occ = f.occurrences();
    const auto &gates = f.circuit().gates();
    std::vector<double> grad(occ.size(), 0.0);
    const double denom = 2.0 * std::sin(s);
    for (std::size_t j = 0; j < occ.size(); ++j) {
        for (std::size_t g : occ[j]) {
            const double plus = f.shifted(theta, {{g, s}});
            const double minus = f.shifted(theta, {{g, -s}});
            grad[j] += gates[g].factor * (plus - minus) / denom;
        }
    }
    return grad;
}

std::vector<double> adjoint_gradient(const EnergyFunction &f, const std::vector<double> &theta) {
    const auto &circuit = f.circuit();
    if (theta.size() != circuit.slot_count()) {
        throw ArgumentError("parameter vector length does not match the circuit");
    }
    sim::Statevector phi = f.state(theta);
    sim::Statevector lambda = f.observable().apply(phi);
    std::vector<double> grad(circuit.slot_count(), 0.0);
    const auto &gates = circuit.gates();
    for (std::size_t k = gates.size(); k-- > 0;) {
        const sim::Gate &g = gates[k];
        if (g.parameterized()) {
            // d/dangle exp(-i angle P / 2) = (-i/2) P exp(-i angle P / 2)
            const ops::Complex overlap = sim::generator_overlap(g, lambda, phi);
            grad[static_cast<std::size_t>(g.slot)] += g.factor * overlap.imag();
        }
        sim::Gate inv = g;
        inv.factor = -inv.factor;
        inv.offset = -inv.offset;
        sim::apply_gate(inv, theta, phi);
        sim::apply_gate(inv, theta, lambda);
    }
    f.count_evaluations(1);
    return grad;
}

std::vector<double> energy_gradient(const EnergyFunction &f, const std::vector<double> &theta,
                                    const OptimizerConfig &opt) {
    if (opt.gradient == GradientEvaluation::Adjoint) {
        return adjoint_gradient(f, theta);
    }
    return parameter_shift_gradient(f, theta, opt.shift);
}

double parameter_shift_gradient(const sim::ParameterizedCircuit &circuit,
                                const std::vector<double> &theta, const ops::PauliSum &h,
                                std::size_t j, double s) {
    if (j >= circuit.slot_count()) {
        throw ArgumentError("parameter slot out of range");
    }
    check_shift(s);
    const EnergyFunction f(h, circuit);
    double grad = 0.0;
    for (std::size_t g : f.occurrences()[j]) {
        grad += circuit.gates()[g].factor *
                (f.shifted(theta, {{g, s}}) - f.shifted(theta, {{g, -s}})) / (2.0 * std::sin(s));
    }
    return grad;
}

double parameter_shift_hessian(const sim::ParameterizedCircuit &circuit,
                               const std::vector<double> &theta, const ops::PauliSum &h,
                               std::size_t i, std::size_t j, double s1, double s2) {
    if (i >= circuit.slot_count() || j >= circuit.slot_count()) {
        throw ArgumentError("parameter slot out of range");
    }
    check_shift(s1);
    check_shift(s2);
    const EnergyFunction f(h, circuit);
    const double denom = 4.0 * std::sin(s1) * std::sin(s2);
    double hess = 0.0;
    for (std::size_t a : f.occurrences()[i]) {
        for (std::size_t b : f.occurrences()[j]) {
            const double pp = f.shifted(theta, {{a, s1}, {b, s2}});
            const double pm = f.shifted(theta, {{a, s1}, {b, -s2}});
            const double mp = f.shifted(theta, {{a, -s1}, {b, s2}});
            const double mm = f.shifted(theta, {{a, -s1}, {b, -s2}});
            hess += circuit.gates()[a].factor * circuit.gates()[b].factor *
                    (pp - pm - mp + mm) / denom;
        }
    }
    return hess;
}

VQEResult vqe_minimize(const ops::PauliSum &h, const sim::ParameterizedCircuit &ansatz,
                       const sim::ParameterizedCircuit &reference, const OptimizerConfig &opt,
                       std::optional<std::vector<double>> initial) {
    opt.validate();
    if (ansatz.slot_count() == 0) {
        throw ArgumentError("ansatz has no parameters");
    }
    const EnergyFunction f(h, ansatz, sim::run(reference, {}));
    const Problem p{[&](const std::vector<double> &t) { return f(t); },
                    [&](const std::vector<double> &t) {
                        return energy_gradient(f, t, opt);
                    }};
    auto theta = initial ? *initial : initial_parameters(ansatz.slot_count(), opt);
    if (theta.size() != ansatz.slot_count()) {
        throw ArgumentError("initial parameter vector has the wrong length");
    }
    VQEResult res = optimize(p, std::move(theta), opt);
    res.evaluations = f.evaluations();
    return res;
}

std::vector<double> SSVQEConfig::resolved_weights() const {
    if (k == 0) {
        throw ArgumentError("SS-VQE needs at least one state");
    }
    std::vector<double> w = weights;
    if (w.empty()) {
        if (!(ratio > 0.0 && ratio < 1.0)) {
            throw ArgumentError("geometric weight ratio must lie in (0, 1)");
        }
        for (std::size_t i = 0; i < k; ++i) {
            w.push_back(std::pow(ratio, static_cast<double>(i)));
        }
    }
    if (w.size() != k) {
        throw ArgumentError("one weight is required per state");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!(w[i] > 0.0) || (i > 0 && !(w[i] < w[i - 1]))) {
            throw ArgumentError("SS-VQE weights must be positive and strictly decreasing");
        }
    }
    return w;
}

std::vector<std::uint64_t> SSVQEConfig::resolved_states(std::size_t n_qubits) const {
    if (k > (std::size_t{1} << n_qubits)) {
        throw ArgumentError("more SS-VQE states than basis states");
    }
    auto states = initial_states.empty() ? lowest_weight_bitstrings(n_qubits, k) : initial_states;
    if (states.size() != k) {
        throw ArgumentError("one initial bitstring is required per state");
    }
    auto sorted = states;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ArgumentError("SS-VQE initial states must be mutually orthogonal");
    }
    if (sorted.back() >= (std::uint64_t{1} << n_qubits)) {
        throw ArgumentError("initial bitstring outside the register");
    }
    return states;
}

std::vector<std::uint64_t> lowest_weight_bitstrings(std::size_t n_qubits, std::size_t k) {
    std::vector<std::uint64_t> all(std::size_t{1} << n_qubits);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    std::stable_sort(all.begin(), all.end(), [](std::uint64_t a, std::uint64_t b) {
        return std::popcount(a) < std::popcount(b);
    });
    all.resize(std::min(k, all.size()));
    return all;
}

SSVQEResult ssvqe_minimize(const ops::PauliSum &h, const sim::ParameterizedCircuit &ansatz,
                           const SSVQEConfig &cfg, const OptimizerConfig &opt,
                           std::optional<std::vector<double>> initial) {
    opt.validate();
    const auto weights = cfg.resolved_weights();
    const auto bits = cfg.resolved_states(ansatz.n_qubits());
    if (cfg.repeats < 1) {
        throw ArgumentError("SS-VQE needs at least one repeat");
    }
    std::vector<EnergyFunction> fs;
    for (auto b : bits) {
        fs.emplace_back(h, ansatz, sim::Statevector(ansatz.n_qubits(), b));
    }
    const Problem p{[&](const std::vector<double> &t) {
                        double acc = 0.0;
                        for (std::size_t i = 0; i < fs.size(); ++i) {
                            acc += weights[i] * fs[i](t);
                        }
                        return acc;
                    },
                    [&](const std::vector<double> &t) {
                        std::vector<double> g(t.size(), 0.0);
                        for (std::size_t i = 0; i < fs.size(); ++i) {
                            const auto gi = energy_gradient(fs[i], t, opt);
                            for (std::size_t k = 0; k < g.size(); ++k) {
                                g[k] += weights[i] * gi[k];
                            }
                        }
                        return g;
                    }};
    SSVQEResult best;
    best.cost = std::numeric_limits<double>::infinity();
    VQEResult best_run;
    for (int r = 0; r < cfg.repeats; ++r) {
        auto theta = (r == 0 && initial)
                         ? *initial
                         : initial_parameters(ansatz.slot_count(), opt, static_cast<std::uint64_t>(r));
        if (theta.size() != ansatz.slot_count()) {
            throw ArgumentError("initial parameter vector has the wrong length");
        }
        VQEResult run = optimize(p, std::move(theta), opt);
        best.iterations += run.iterations;
        if (run.energy < best.cost) {
            best.cost = run.energy;
            best.best_repeat = r;
            best_run = std::move(run);
        }
    }
    best.converged = best_run.converged;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        SSVQEState st;
        st.initial_bits = bits[i];
        st.circuit = sim::basis_state_circuit(ansatz.n_qubits(), bits[i]);
        st.circuit.append(ansatz);
        st.theta = best_run.theta;
        st.energy = fs[i](best_run.theta);
        best.states.push_back(std::move(st));
    }
    for (const auto &f : fs) {
        best.evaluations += f.evaluations();
    }
    std::stable_sort(best.states.begin(), best.states.end(),
                     [](const SSVQEState &a, const SSVQEState &b) {
                         if (a.energy != b.energy) {
                             return a.energy < b.energy;
                         }
                         return a.initial_bits < b.initial_bits;
                     });
    return best;
}

std::vector<FilteredState> particle_filter(const std::vector<sim::Statevector> &states,
                                           const ops::PauliSum &number_op, int target,
                                           double tolerance) {
    const sim::CompiledObservable n(number_op);
    std::vector<FilteredState> kept;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double value = n.expectation(states[i]);
        if (std::abs(value - target) < tolerance) {
            kept.push_back({i, value});
        }
    }
    return kept;
}

} // namespace qderiv::vqe
