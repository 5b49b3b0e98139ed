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

#include "qderiv/sim/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "qderiv/errors.hpp"

namespace qderiv::sim {

namespace {

void check_register(std::size_t n_qubits) {
    if (n_qubits > kMaxSimQubits) {
        throw SizeLimitError("statevector simulation is limited to " +
                             std::to_string(kMaxSimQubits) + " qubits");
    }
}

Complex i_power(int k) {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((k % 4) + 4) % 4];
}

void check_observable(const ops::PauliSum &obs) {
    if (!obs.is_observable()) {
        throw NotObservableError("observable has complex coefficients");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Draw `shots` basis indices from |psi|^2 by inverse CDF.
template <typename F>
void sample_outcomes(const Eigen::VectorXcd &amps, std::size_t shots, std::uint64_t seed,
                     F &&visit) {
    std::vector<double> cdf(static_cast<std::size_t>(amps.size()));
    double acc = 0.0;
    for (Eigen::Index k = 0; k < amps.size(); ++k) {
        acc += std::norm(amps(k));
        cdf[static_cast<std::size_t>(k)] = acc;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = unit_double(rng()) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        visit(static_cast<std::uint32_t>(it - cdf.begin()));
    }
}

} // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (index + 0x632BE59BD9B4E019ULL));
}

double unit_double(std::uint64_t draw) {
    return static_cast<double>(draw >> 11) * 0x1.0p-53;
}

Statevector::Statevector(std::size_t n_qubits, std::uint64_t bits) : n_qubits_(n_qubits) {
    check_register(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (bits >= dim) {
        throw ArgumentError("basis state outside the register");
    }
    amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    amps_(static_cast<Eigen::Index>(bits)) = 1.0;
}

Statevector::Statevector(std::size_t n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_register(n_qubits);
    if (static_cast<std::size_t>(amps_.size()) != (std::size_t{1} << n_qubits)) {
        throw ArgumentError("amplitude count does not match the register");
    }
}

Complex Statevector::inner(const Statevector &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw ArgumentError("inner product of states on different registers");
    }
    return amps_.dot(other.amps_);
}

double Gate::angle(const std::vector<double> &theta) const {
    if (slot < 0) {
        return offset;
    }
    return factor * theta[static_cast<std::size_t>(slot)] + offset;
}

Gate Gate::pauli(const ops::PauliTerm &term) {
    Gate g{GateKind::Pauli};
    g.pauli_x = term.x;
    g.pauli_z = term.z;
    return g;
}

std::string to_string(Entangler e) { return e == Entangler::CnotChain ? "cnot" : "cz"; }

Entangler parse_entangler(const std::string &name) {
    if (name == "cnot") {
        return Entangler::CnotChain;
    }
    if (name == "cz") {
        return Entangler::CzChain;
    }
    throw ArgumentError("unknown entangler '" + name + "' (expected cnot or cz)");
}

void ParameterizedCircuit::add(const Gate &g) {
    const bool two_qubit = g.kind == GateKind::CNOT || g.kind == GateKind::CZ;
    if (g.kind != GateKind::Pauli && g.target >= n_qubits_) {
        throw ArgumentError("gate target out of range");
    }
    if (two_qubit && (g.control >= n_qubits_ || g.control == g.target)) {
        throw ArgumentError("invalid control qubit");
    }
    if (g.kind == GateKind::Pauli && ((g.pauli_x | g.pauli_z) >> n_qubits_) != 0U) {
        throw ArgumentError("Pauli gate acts outside the register");
    }
    if (g.parameterized()) {
        if (g.kind != GateKind::Ry && g.kind != GateKind::Rz) {
            throw ArgumentError("only Ry and Rz gates take parameters");
        }
        slots_ = std::max(slots_, static_cast<std::size_t>(g.slot) + 1);
    }
    gates_.push_back(g);
}

void ParameterizedCircuit::append(const ParameterizedCircuit &other, int slot_offset) {
    if (other.n_qubits_ != n_qubits_) {
        throw ArgumentError("appending a circuit over a different register");
    }
    for (Gate g : other.gates_) {
        if (g.parameterized()) {
            g.slot += slot_offset;
        }
        add(g);
    }
}

ParameterizedCircuit ParameterizedCircuit::inverse() const {
    ParameterizedCircuit out(n_qubits_);
    out.depth_ = depth_;
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::Ry || g.kind == GateKind::Rz) {
            g.factor = -g.factor;
            g.offset = -g.offset;
        }
        out.add(g);
    }
    out.slots_ = slots_;
    return out;
}

void ParameterizedCircuit::validate() const {
    std::vector<bool> used(slots_, false);
    for (const auto &g : gates_) {
        if (g.parameterized()) {
            used[static_cast<std::size_t>(g.slot)] = true;
        }
    }
    for (std::size_t k = 0; k < slots_; ++k) {
        if (!used[k]) {
            throw ArgumentError("parameter slot " + std::to_string(k) + " is never used");
        }
    }
}

ParameterizedCircuit basis_state_circuit(std::size_t n_qubits, std::uint64_t bits) {
    ParameterizedCircuit c(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((bits >> q) & 1U) {
            c.add(Gate::x(q));
        }
    }
    return c;
}

ParameterizedCircuit hf_reference_circuit(std::size_t n_electrons, ops::Encoding enc,
                                          std::size_t n_qubits) {
    if (n_electrons > n_qubits) {
        throw ArgumentError("more electrons than spin orbitals");
    }
    const std::uint64_t occupation = (std::uint64_t{1} << n_electrons) - 1U;
    return basis_state_circuit(n_qubits, ops::encode_occupation(occupation, enc, n_qubits));
}

ParameterizedCircuit hea_ansatz(std::size_t n_qubits, int depth, Entangler entangler) {
    if (depth < 1) {
        throw ArgumentError("ansatz depth must be at least 1");
    }
    ParameterizedCircuit c(n_qubits);
    int slot = 0;
    auto rotations = [&] {
        for (std::size_t q = 0; q < n_qubits; ++q) {
            c.add(Gate::ry(q, slot++));
            c.add(Gate::rz(q, slot++));
        }
    };
    for (int d = 0; d < depth; ++d) {
        rotations();
        for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
            c.add(entangler == Entangler::CnotChain ? Gate::cnot(q, q + 1) : Gate::cz(q, q + 1));
        }
    }
    rotations();
    c.set_depth(depth);
    return c;
}

ParameterizedCircuit tapered_ansatz() {
    ParameterizedCircuit c(2);
    c.add(Gate::x(0));
    c.add(Gate::ry(1, 0));
    c.add(Gate::cnot(1, 0));
    c.set_depth(1);
    return c;
}

void apply_gate(const Gate &g, const std::vector<double> &theta, Statevector &psi) {
    auto &a = psi.amplitudes();
    const auto dim = static_cast<std::uint32_t>(a.size());
    const std::uint32_t t = 1U << g.target;
    switch (g.kind) {
    case GateKind::X:
        for (std::uint32_t b = 0; b < dim; ++b) {
            if (!(b & t)) {
                std::swap(a(b), a(b | t));
            }
        }
        break;
    case GateKind::H: {
        const double r = M_SQRT1_2;
        for (std::uint32_t b = 0; b < dim; ++b) {
            if (!(b & t)) {
                const Complex u = a(b);
                const Complex v = a(b | t);
                a(b) = r * (u + v);
                a(b | t) = r * (u - v);
            }
        }
        break;
    }
    case GateKind::Ry: {
        const double half = 0.5 * g.angle(theta);
        const double c = std::cos(half);
        const double s = std::sin(half);
        for (std::uint32_t b = 0; b < dim; ++b) {
            if (!(b & t)) {
                const Complex u = a(b);
                const Complex v = a(b | t);
                a(b) = c * u - s * v;
                a(b | t) = s * u + c * v;
            }
        }
        break;
    }
    case GateKind::Rz: {
        const double half = 0.5 * g.angle(theta);
        const Complex lo = std::polar(1.0, -half);
        const Complex hi = std::polar(1.0, half);
        for (std::uint32_t b = 0; b < dim; ++b) {
            a(b) *= (b & t) ? hi : lo;
        }
        break;
    }
    case GateKind::CNOT: {
        const std::uint32_t c = 1U << g.control;
        for (std::uint32_t b = 0; b < dim; ++b) {
            if ((b & c) && !(b & t)) {
                std::swap(a(b), a(b | t));
            }
        }
        break;
    }
    case GateKind::CZ: {
        const std::uint32_t mask = t | (1U << g.control);
        for (std::uint32_t b = 0; b < dim; ++b) {
            if ((b & mask) == mask) {
                a(b) = -a(b);
            }
        }
        break;
    }
    case GateKind::Pauli: {
        const Complex phase = i_power(std::popcount(g.pauli_x & g.pauli_z));
        Eigen::VectorXcd out(a.size());
        for (std::uint32_t b = 0; b < dim; ++b) {
            const double sign = (std::popcount(b & g.pauli_z) % 2 == 0) ? 1.0 : -1.0;
            out(b ^ g.pauli_x) = sign * phase * a(b);
        }
        a = std::move(out);
        break;
    }
    }
}

Complex generator_overlap(const Gate &g, const Statevector &lambda, const Statevector &phi) {
    if (lambda.n_qubits() != phi.n_qubits() || g.target >= phi.n_qubits()) {
        throw ArgumentError("generator overlap needs matching registers");
    }
    const auto &l = lambda.amplitudes();
    const auto &a = phi.amplitudes();
    const auto dim = static_cast<std::uint32_t>(a.size());
    const std::uint32_t t = 1U << g.target;
    Complex acc = 0.0;
    switch (g.kind) {
    case GateKind::Ry:
        for (std::uint32_t b = 0; b < dim; ++b) {
            if (!(b & t)) {
                acc += std::conj(l(b | t)) * a(b) - std::conj(l(b)) * a(b | t);
            }
        }
        return Complex(0.0, 1.0) * acc;
    case GateKind::Rz:
        for (std::uint32_t b = 0; b < dim; ++b) {
            const Complex term = std::conj(l(b)) * a(b);
            acc += (b & t) ? -term : term;
        }
        return acc;
    default:
        throw ArgumentError("gate has no rotation generator");
    }
}

Statevector bind_and_run(const ParameterizedCircuit &c, const std::vector<double> &theta,
                         const Statevector &input) {
    if (theta.size() != c.slot_count()) {
        throw ArgumentError("expected " + std::to_string(c.slot_count()) + " parameters, got " +
                            std::to_string(theta.size()));
    }
    if (input.n_qubits() != c.n_qubits()) {
        throw ArgumentError("input state register does not match the circuit");
    }
    Statevector psi = input;
    for (const auto &g : c.gates()) {
        apply_gate(g, theta, psi);
    }
    return psi;
}

Statevector run(const ParameterizedCircuit &c, const std::vector<double> &theta) {
    return bind_and_run(c, theta, Statevector(c.n_qubits()));
}

CompiledObservable::CompiledObservable(const ops::PauliSum &s) : n_qubits_(s.n_qubits()) {
    check_register(n_qubits_);
    const std::uint32_t dim = 1U << n_qubits_;
    for (const auto &t : s.terms()) {
        auto it = std::find(masks_.begin(), masks_.end(), t.x);
        std::size_t k = static_cast<std::size_t>(it - masks_.begin());
        if (it == masks_.end()) {
            masks_.push_back(t.x);
            diagonals_.push_back(Eigen::VectorXcd::Zero(dim));
        }
        const Complex base = t.coefficient * i_power(std::popcount(t.x & t.z));
        auto &d = diagonals_[k];
        for (std::uint32_t b = 0; b < dim; ++b) {
            d(b) += (std::popcount(b & t.z) % 2 == 0) ? base : -base;
        }
    }
}

Complex CompiledObservable::matrix_element(const Statevector &a, const Statevector &b) const {
    if (a.n_qubits() != n_qubits_ || b.n_qubits() != n_qubits_) {
        throw ArgumentError("state register does not match the observable");
    }
    const auto &u = a.amplitudes();
    const auto &v = b.amplitudes();
    const std::uint32_t dim = 1U << n_qubits_;
    Complex acc = 0.0;
    for (std::size_t k = 0; k < masks_.size(); ++k) {
        const std::uint32_t x = masks_[k];
        const auto &d = diagonals_[k];
        for (std::uint32_t s = 0; s < dim; ++s) {
            acc += std::conj(u(s ^ x)) * d(s) * v(s);
        }
    }
    return acc;
}

double CompiledObservable::expectation(const Statevector &psi) const {
    return matrix_element(psi, psi).real();
}

Statevector CompiledObservable::apply(const Statevector &psi) const {
    const std::uint32_t dim = 1U << n_qubits_;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    const auto &v = psi.amplitudes();
    for (std::size_t k = 0; k < masks_.size(); ++k) {
        const std::uint32_t x = masks_[k];
        const auto &d = diagonals_[k];
        for (std::uint32_t s = 0; s < dim; ++s) {
            out(s ^ x) += d(s) * v(s);
        }
    }
    return Statevector(n_qubits_, std::move(out));
}

double expectation(const ops::PauliSum &obs, const Statevector &psi) {
    check_observable(obs);
    return CompiledObservable(obs).expectation(psi);
}

SampledEstimate sampled_estimate(const ops::PauliSum &obs, const Statevector &psi,
                                 std::size_t shots, std::uint64_t seed) {
    check_observable(obs);
    if (shots == 0) {
        throw ArgumentError("sampling requires at least one shot");
    }
    if (obs.n_qubits() != psi.n_qubits()) {
        throw ArgumentError("state register does not match the observable");
    }
    SampledEstimate est;
    double variance = 0.0;
    const auto &terms = obs.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto &t = terms[k];
        const double h = t.coefficient.real();
        if (t.is_identity()) {
            est.value += h;
            continue;
        }
        Statevector rotated = psi;
        for (std::size_t q = 0; q < psi.n_qubits(); ++q) {
            switch (t.letter(q)) {
            case ops::Letter::X:
                apply_gate(Gate::h(q), {}, rotated);
                break;
            case ops::Letter::Y:
                apply_gate(Gate::rz_fixed(q, -M_PI_2), {}, rotated); // S^dagger up to phase
                apply_gate(Gate::h(q), {}, rotated);
                break;
            default:
                break;
            }
        }
        const std::uint32_t support = t.support();
        long long parity_sum = 0;
        sample_outcomes(rotated.amplitudes(), shots, stream_seed(seed, k),
                        [&](std::uint32_t b) {
                            parity_sum += (std::popcount(b & support) % 2 == 0) ? 1 : -1;
                        });
        const double mean = static_cast<double>(parity_sum) / static_cast<double>(shots);
        est.value += h * mean;
        variance += h * h * std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots);
    }
    est.standard_error = std::sqrt(variance);
    return est;
}

double sampled_expectation(const ops::PauliSum &obs, const ParameterizedCircuit &c,
                           const std::vector<double> &theta, std::size_t shots,
                           std::uint64_t seed) {
    return sampled_estimate(obs, run(c, theta), shots, seed).value;
}

double overlap_probability(const ParameterizedCircuit &u1, const std::vector<double> &theta1,
                           const ParameterizedCircuit &u2, const std::vector<double> &theta2) {
    if (u1.n_qubits() != u2.n_qubits()) {
        throw ArgumentError("overlap of circuits on different registers");
    }
    const Statevector psi2 = run(u2, theta2);
    const Statevector out = bind_and_run(u1.inverse(), theta1, psi2);
    return std::norm(out.amplitudes()(0));
}

double sampled_overlap_probability(const ParameterizedCircuit &u1,
                                   const std::vector<double> &theta1,
                                   const ParameterizedCircuit &u2,
                                   const std::vector<double> &theta2, std::size_t shots,
                                   std::uint64_t seed) {
    if (u1.n_qubits() != u2.n_qubits()) {
        throw ArgumentError("overlap of circuits on different registers");
    }
    if (shots == 0) {
        throw ArgumentError("sampling requires at least one shot");
    }
    const Statevector out = bind_and_run(u1.inverse(), theta1, run(u2, theta2));
    std::size_t zeros = 0;
    sample_outcomes(out.amplitudes(), shots, stream_seed(seed, 0),
                    [&](std::uint32_t b) { zeros += (b == 0) ? 1 : 0; });
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

} // namespace qderiv::sim
