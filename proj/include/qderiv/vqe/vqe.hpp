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

#include <cmath>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qderiv/ops/pauli.hpp"
#include "qderiv/sim/circuit.hpp"

namespace qderiv::vqe {

enum class OptimizerKind { GradientDescent, Spsa };

/// How the exact engine evaluates parameter-shift gradients. Both give the same values
/// for Ry/Rz gates; Adjoint obtains them from one forward and one backward sweep.
enum class GradientEvaluation { ShiftedCircuits, Adjoint };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::GradientDescent;
    double learning_rate = 0.1;
    // Heavy-ball coefficient for gradient descent; 0 is the plain update.
    double momentum = 0.0;
    double shift = M_PI / 2.0;
    GradientEvaluation gradient = GradientEvaluation::Adjoint;
    int max_iterations = 2000;
    double energy_tolerance = 1e-7;
    int window = 5;
    // SPSA gains: a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.
    double spsa_a = 0.2;
    double spsa_c = 0.1;
    double spsa_big_a = 10.0;
    double spsa_alpha = 0.602;
    double spsa_gamma = 0.101;
    std::uint64_t seed = 0;
    // Half-width of the uniform initial-parameter draw; 0 starts from all zeros.
    double init_scale = 0.0;
    // Store theta in every trace entry; energies are always recorded.
    bool trace_parameters = true;

    /// Throws ArgumentError on violated invariants.
    void validate() const;
};

struct TraceEntry {
    std::vector<double> theta;
    double energy = 0.0;
};

struct VQEResult {
    std::vector<double> theta;
    double energy = 0.0;
    std::vector<TraceEntry> trace;
    bool converged = false;
    std::size_t evaluations = 0;
    int iterations = 0;
};

/// <in|U(theta)^dagger O U(theta)|in> with an evaluation counter.
class EnergyFunction {
  public:
    EnergyFunction(const ops::PauliSum &observable, sim::ParameterizedCircuit circuit);
    EnergyFunction(const ops::PauliSum &observable, sim::ParameterizedCircuit circuit,
                   sim::Statevector input);

    double operator()(const std::vector<double> &theta) const;
    [[nodiscard]] const sim::ParameterizedCircuit &circuit() const noexcept { return circuit_; }
    [[nodiscard]] const sim::CompiledObservable &observable() const noexcept { return obs_; }
    [[nodiscard]] const sim::Statevector &input() const noexcept { return input_; }
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }
    void count_evaluations(std::size_t n) const noexcept { evaluations_ += n; }
    [[nodiscard]] sim::Statevector state(const std::vector<double> &theta) const;
    /// Energy with the listed gates' angles moved by the paired deltas.
    double shifted(const std::vector<double> &theta,
                   const std::vector<std::pair<std::size_t, double>> &shifts) const;
    /// Gate indices bound to each slot.
    [[nodiscard]] const std::vector<std::vector<std::size_t>> &occurrences() const noexcept {
        return occurrences_;
    }

  private:
    sim::CompiledObservable obs_;
    sim::ParameterizedCircuit circuit_;
    sim::Statevector input_;
    std::vector<std::vector<std::size_t>> occurrences_;
    mutable std::size_t evaluations_ = 0;
};

/// Random or zero starting point per the configuration; stream `stream` of the seed.
std::vector<double> initial_parameters(std::size_t count, const OptimizerConfig &opt,
                                       std::uint64_t stream = 0);

/// (E(theta_j + s) - E(theta_j - s)) / (2 sin s), summed over every gate bound to slot j.
double parameter_shift_gradient(const sim::ParameterizedCircuit &circuit,
                                const std::vector<double> &theta, const ops::PauliSum &h,
                                std::size_t j, double s = M_PI / 2.0);
std::vector<double> parameter_shift_gradient(const EnergyFunction &f,
                                             const std::vector<double> &theta,
                                             double s = M_PI / 2.0);

/// dE/dtheta from a backward sweep; equals the parameter-shift gradient for Ry/Rz gates.
std::vector<double> adjoint_gradient(const EnergyFunction &f, const std::vector<double> &theta);

/// Gradient per the configured evaluation strategy.
std::vector<double> energy_gradient(const EnergyFunction &f, const std::vector<double> &theta,
                                    const OptimizerConfig &opt);

/// Four-point double-shift formula divided by 4 sin s1 sin s2.
double parameter_shift_hessian(const sim::ParameterizedCircuit &circuit,
                               const std::vector<double> &theta, const ops::PauliSum &h,
                               std::size_t i, std::size_t j, double s1 = M_PI / 2.0,
                               double s2 = M_PI / 2.0);

/// Minimize <ref|U(theta)^dagger H U(theta)|ref> with the reference circuit run first.
VQEResult vqe_minimize(const ops::PauliSum &h, const sim::ParameterizedCircuit &ansatz,
                       const sim::ParameterizedCircuit &reference, const OptimizerConfig &opt,
                       std::optional<std::vector<double>> initial = std::nullopt);

struct SSVQEConfig {
    std::size_t k = 1;
    std::vector<double> weights;          // empty: w_i = ratio^i
    double ratio = 0.5;
    std::vector<std::uint64_t> initial_states; // empty: k lowest-weight bitstrings
    int repeats = 5;

    /// Resolved weights and initial states; throws ArgumentError on invalid settings.
    [[nodiscard]] std::vector<double> resolved_weights() const;
    [[nodiscard]] std::vector<std::uint64_t> resolved_states(std::size_t n_qubits) const;
};

/// Default SS-VQE inputs: the k bitstrings of smallest Hamming weight, ties by value.
std::vector<std::uint64_t> lowest_weight_bitstrings(std::size_t n_qubits, std::size_t k);

struct SSVQEState {
    std::uint64_t initial_bits = 0;
    sim::ParameterizedCircuit circuit; // basis-state preparation followed by the ansatz
    std::vector<double> theta;
    double energy = 0.0;
};

struct SSVQEResult {
    std::vector<SSVQEState> states; // ascending energy
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
    std::size_t evaluations = 0;
    int best_repeat = 0;
};

SSVQEResult ssvqe_minimize(const ops::PauliSum &h, const sim::ParameterizedCircuit &ansatz,
                           const SSVQEConfig &cfg, const OptimizerConfig &opt,
                           std::optional<std::vector<double>> initial = std::nullopt);

/// Exact-path tolerance 1e-3, sampled-path tolerance 0.05.
inline constexpr double kExactParticleTolerance = 1e-3;
inline constexpr double kSampledParticleTolerance = 0.05;

struct FilteredState {
    std::size_t index = 0; // position in the input list
    double particles = 0.0;
};

/// Keep states with |<N> - target| < tolerance.
std::vector<FilteredState> particle_filter(const std::vector<sim::Statevector> &states,
                                           const ops::PauliSum &number_op, int target,
                                           double tolerance = kExactParticleTolerance);

} // namespace qderiv::vqe
