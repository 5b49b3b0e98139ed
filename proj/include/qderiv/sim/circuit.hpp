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
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qderiv/ops/encoding.hpp"
#include "qderiv/ops/pauli.hpp"

namespace qderiv::sim {

using Complex = std::complex<double>;

/// Largest register the statevector simulator accepts.
inline constexpr std::size_t kMaxSimQubits = 16;

class Statevector {
  public:
    Statevector() = default;
    /// Computational basis state |bits>.
    explicit Statevector(std::size_t n_qubits, std::uint64_t bits = 0);
    Statevector(std::size_t n_qubits, Eigen::VectorXcd amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Eigen::VectorXcd &amplitudes() noexcept { return amps_; }
    [[nodiscard]] double norm() const { return amps_.norm(); }
    /// <this|other>
    [[nodiscard]] Complex inner(const Statevector &other) const;

  private:
    std::size_t n_qubits_ = 0;
    Eigen::VectorXcd amps_;
};

enum class GateKind { X, H, Ry, Rz, CNOT, CZ, Pauli };

/// One gate. Rotation angle = factor * theta[slot] + offset (slot < 0: fixed angle).
struct Gate {
    GateKind kind = GateKind::X;
    std::size_t target = 0;
    std::size_t control = 0;     // CNOT/CZ only
    int slot = -1;
    double factor = 1.0;
    double offset = 0.0;
    std::uint32_t pauli_x = 0;   // Pauli only
    std::uint32_t pauli_z = 0;

    [[nodiscard]] bool parameterized() const noexcept { return slot >= 0; }
    [[nodiscard]] double angle(const std::vector<double> &theta) const;

    static Gate x(std::size_t q) { return {GateKind::X, q}; }
    static Gate h(std::size_t q) { return {GateKind::H, q}; }
    static Gate ry(std::size_t q, int slot) { return {GateKind::Ry, q, 0, slot}; }
    static Gate rz(std::size_t q, int slot) { return {GateKind::Rz, q, 0, slot}; }
    static Gate ry_fixed(std::size_t q, double angle) {
        return {GateKind::Ry, q, 0, -1, 1.0, angle};
    }
    static Gate rz_fixed(std::size_t q, double angle) {
        return {GateKind::Rz, q, 0, -1, 1.0, angle};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control};
    }
    static Gate cz(std::size_t control, std::size_t target) {
        return {GateKind::CZ, target, control};
    }
    /// Applies the Pauli string (letters only; the term coefficient is ignored).
    static Gate pauli(const ops::PauliTerm &term);
};

enum class Entangler { CnotChain, CzChain };

std::string to_string(Entangler e);
Entangler parse_entangler(const std::string &name); // "cnot" | "cz"

class ParameterizedCircuit {
  public:
    ParameterizedCircuit() = default;
    explicit ParameterizedCircuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] std::vector<Gate> &gates() noexcept { return gates_; }
    [[nodiscard]] std::size_t slot_count() const noexcept { return slots_; }
    [[nodiscard]] int depth() const noexcept { return depth_; }
    void set_depth(int d) noexcept { depth_ = d; }

    /// Appends a gate; slots grow to cover the largest index referenced.
    void add(const Gate &g);
    /// Appends `other` with its slots offset by `slot_offset`.
    void append(const ParameterizedCircuit &other, int slot_offset = 0);
    /// Reversed gate order with negated angles; same slot layout.
    [[nodiscard]] ParameterizedCircuit inverse() const;
    /// Throws ArgumentError when a slot is never referenced.
    void validate() const;

  private:
    std::size_t n_qubits_ = 0;
    std::vector<Gate> gates_;
    std::size_t slots_ = 0;
    int depth_ = 0;
};

/// Circuit of X gates preparing a computational basis state.
ParameterizedCircuit basis_state_circuit(std::size_t n_qubits, std::uint64_t bits);

/// X gates on the encoded occupation of the lowest `n_electrons` spin orbitals.
ParameterizedCircuit hf_reference_circuit(std::size_t n_electrons, ops::Encoding enc,
                                          std::size_t n_qubits);

/// D blocks of (Ry, Rz per qubit; entangler chain) and a final rotation layer: 2N(D+1) slots.
ParameterizedCircuit hea_ansatz(std::size_t n_qubits, int depth,
                                Entangler entangler = Entangler::CnotChain);

/// Two-qubit, one-parameter circuit: X(q0), Ry(theta)(q1), CNOT(q1 -> q0).
ParameterizedCircuit tapered_ansatz();

void apply_gate(const Gate &g, const std::vector<double> &theta, Statevector &psi);

/// <lambda| P |phi> for the generator P (Y for Ry, Z for Rz) of a rotation gate.
Complex generator_overlap(const Gate &g, const Statevector &lambda, const Statevector &phi);

/// Gate-by-gate application to `input`.
Statevector bind_and_run(const ParameterizedCircuit &c, const std::vector<double> &theta,
                         const Statevector &input);
/// Run from |0...0>.
Statevector run(const ParameterizedCircuit &c, const std::vector<double> &theta);

/// Pauli sum arranged for fast application: terms grouped by X mask with per-basis-state
/// diagonal coefficients.
class CompiledObservable {
  public:
    CompiledObservable() = default;
    explicit CompiledObservable(const ops::PauliSum &s);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    /// <psi|O|psi>, real part.
    [[nodiscard]] double expectation(const Statevector &psi) const;
    /// <a|O|b>
    [[nodiscard]] Complex matrix_element(const Statevector &a, const Statevector &b) const;
    /// O|psi>
    [[nodiscard]] Statevector apply(const Statevector &psi) const;

  private:
    std::size_t n_qubits_ = 0;
    std::vector<std::uint32_t> masks_;
    std::vector<Eigen::VectorXcd> diagonals_;
};

/// Exact sum_P h_P <psi|P|psi>. Throws NotObservableError for complex coefficients.
double expectation(const ops::PauliSum &obs, const Statevector &psi);

struct SampledEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Per-term basis rotation and bitstring sampling with the parity estimator.
/// Each term draws from its own stream seeded by (seed, term index).
SampledEstimate sampled_estimate(const ops::PauliSum &obs, const Statevector &psi,
                                 std::size_t shots, std::uint64_t seed);
double sampled_expectation(const ops::PauliSum &obs, const ParameterizedCircuit &c,
                           const std::vector<double> &theta, std::size_t shots,
                           std::uint64_t seed);

/// |<0|U1^dagger U2|0>|^2, computed from the amplitude of the concatenated circuit.
double overlap_probability(const ParameterizedCircuit &u1, const std::vector<double> &theta1,
                           const ParameterizedCircuit &u2, const std::vector<double> &theta2);
/// Sampled version: fraction of all-zeros outcomes of U1^dagger U2 over `shots` draws.
double sampled_overlap_probability(const ParameterizedCircuit &u1,
                                   const std::vector<double> &theta1,
                                   const ParameterizedCircuit &u2,
                                   const std::vector<double> &theta2, std::size_t shots,
                                   std::uint64_t seed);

/// Deterministic 64-bit stream seed for (seed, index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);
/// Uniform double in [0, 1) from a 64-bit draw.
double unit_double(std::uint64_t draw);

} // namespace qderiv::sim
