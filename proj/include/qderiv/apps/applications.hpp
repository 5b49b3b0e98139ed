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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qderiv/chem/molecule.hpp"
#include "qderiv/deriv/derivatives.hpp"
#include "qderiv/ops/pauli.hpp"
#include "qderiv/sim/circuit.hpp"
#include "qderiv/vqe/vqe.hpp"

namespace qderiv::apps {

/// Hardware-efficient depth used when none is configured: 2N + 2 blocks.
int default_depth(std::size_t n_qubits);

/// Gradient descent, learning rate 0.5, uniform start in [-0.5, 0.5], |dE| < 1e-15.
vqe::OptimizerConfig default_optimizer();

struct EngineSettings {
    deriv::FamilyOptions family{};
    int depth = 0; // 0: default_depth
    sim::Entangler entangler = sim::Entangler::CnotChain;
    bool tapered_ansatz = false; // single-parameter 2-qubit circuit; requires family.taper
    vqe::OptimizerConfig optimizer = default_optimizer();
    deriv::EngineConfig engine{};
    std::size_t threads = 1;
};

/// Runs fn(0..count-1) on up to `threads` workers. Exceptions are rethrown after joining.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &fn);

struct GroundState {
    deriv::PreparedState state;
    double energy = 0.0; // exact expectation, or the sampled estimate with a sampled engine
    bool converged = false;
    int iterations = 0;
};

/// Reference and ansatz circuits for a family under the given settings.
deriv::PreparedState blank_state(const deriv::HamiltonianFamily &family,
                                 const EngineSettings &settings);

/// VQE ground state of family(eta), optionally warm-started.
GroundState solve_ground(const deriv::HamiltonianFamily &family, const std::vector<double> &eta,
                         const EngineSettings &settings,
                         std::optional<std::vector<double>> warm = std::nullopt);

/// Sorted eigenvalues of h restricted to <N> = n_electrons.
std::vector<double> sector_spectrum(const ops::PauliSum &h, const ops::PauliSum &number_op,
                                    int n_electrons);

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;

    [[nodiscard]] std::vector<double> values() const;
    /// "A:B:N" with A < B and N >= 2.
    static Grid parse(const std::string &text);
};

/// First (and for order 2, second) derivatives of the VQE ground energy over the bond lengths
/// of `mol` and, optionally, a z field, at the given geometry.
deriv::DerivativeReport derivative_report(const chem::Molecule &mol, bool with_field, int order,
                                          const EngineSettings &settings);

// Potential energy surface

struct PesRow {
    double r = 0.0;
    double e_vqe = 0.0;
    double e_fci = 0.0;
    double e_hf = 0.0; // NaN for open shells
    double abs_error = 0.0;
    bool converged = false;
    std::string error; // non-empty when the point failed
};

/// Scans the first bond length of `mol` over `grid`; other bonds stay fixed.
std::vector<PesRow> pes_scan(const chem::Molecule &mol, const std::vector<double> &grid,
                             const EngineSettings &settings);

struct SurfaceSample {
    double r = 0.0;
    double theta = 0.0;
    double energy = 0.0; // exact expectation at (R, theta)
};

/// E(R, theta) over a bond-length grid and a grid for the single ansatz parameter.
/// Requires a one-parameter ansatz (the tapered circuit).
std::vector<SurfaceSample> parameter_surface(const chem::Molecule &mol,
                                             const std::vector<double> &r_grid,
                                             const std::vector<double> &theta_grid,
                                             const EngineSettings &settings);

// Minimum energy configuration search

enum class StepMethod { Gradient, Hessian };

std::string to_string(StepMethod m);
StepMethod parse_step_method(const std::string &name); // "gradient" | "hessian"

struct GeometryOptions {
    StepMethod method = StepMethod::Gradient;
    double gamma = 0.0; // 0: 0.1 for gradient, 1.0 for hessian
    double fallback_gamma = 0.1;
    double ctol = 1e-3;
    int max_iterations = 100;
    std::vector<std::size_t> active; // bond indices; empty: all bonds

    [[nodiscard]] double resolved_gamma() const;
};

struct OptimizationStep {
    std::vector<double> q; // coordinates at which E, gradient and curvature were evaluated
    double energy = 0.0;
    std::vector<double> theta;
    std::vector<double> gradient;
    std::vector<double> curvature; // hessian mode only
    std::vector<double> delta;
    bool fallback = false;
};

struct OptimizationTrajectory {
    std::vector<std::string> names;
    StepMethod method = StepMethod::Gradient;
    std::vector<OptimizationStep> steps;
    bool converged = false;
    std::vector<double> final_q;
    double final_energy = 0.0;
    std::vector<std::string> warnings;
};

/// Bond-length relaxation: q <- q - gamma * dE/dq, or divided by d2E/dq2 in hessian mode.
OptimizationTrajectory geometry_optimize(const chem::Molecule &start,
                                         const GeometryOptions &options,
                                         const EngineSettings &settings);

// Response properties

struct ResponseOptions {
    int axis = 2;
    double field_step = 1e-3;
};

struct ResponseReport {
    double r = 0.0;
    double energy = 0.0;
    double mu_electronic = 0.0; // -dE/dF
    double mu_operator = 0.0;   // <dipole operator>
    double mu_nuclear = 0.0;
    double mu_net = 0.0;        // mu_nuclear - mu_electronic
    double alpha_energy = 0.0;  // -d2E/dF2 from the second-order derivative
    double alpha_dipole = 0.0;  // central difference of mu_electronic over re-optimized states
    double mu_fci = 0.0;
    double alpha_fci = 0.0;
    double mu_hf = 0.0;
    double alpha_hf = 0.0;
    double field_step = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
    std::string error;
};

ResponseReport response_properties(const chem::Molecule &mol, const ResponseOptions &options,
                                   const EngineSettings &settings);
std::vector<ResponseReport> response_scan(const chem::Molecule &mol,
                                          const std::vector<double> &grid,
                                          const ResponseOptions &options,
                                          const EngineSettings &settings);

// Second derivative test and transition states

/// Directional surface access for the test: value of E and its derivatives along modes.
struct SurfacePoint {
    std::vector<double> gradient;             // dE/dq
    std::vector<std::vector<double>> hessian; // d2E/dq_a dq_b
};

struct SaddleTest {
    double a = 0.0; // along m1
    double b = 0.0; // along m2
    double c = 0.0; // mixed
    double discriminant = 0.0;
    bool saddle = false;
};

/// Throws NotExtremumError when |gradient| >= ctol.
SaddleTest second_derivative_test(const SurfacePoint &point, const std::vector<double> &m1,
                                  const std::vector<double> &m2, double ctol = 1e-3);

/// Gradient and Hessian over all bond lengths of the family at q from a VQE state.
SurfacePoint surface_point(const deriv::HamiltonianFamily &family, const std::vector<double> &q,
                           const deriv::PreparedState &state, const EngineSettings &settings);

struct ReactionSpec {
    chem::Molecule reactants;
    chem::Molecule products;
    std::vector<std::vector<double>> modes; // unit vectors over bond lengths
    bool collinear = true;

    void validate() const;
};

/// (R1 - R2)/sqrt(2) and (R1 + R2)/sqrt(2) for a three-atom chain, symmetric first.
std::vector<std::vector<double>> default_triatomic_modes();

struct ModeSearch {
    std::vector<double> mode;
    OptimizationTrajectory trajectory;
    std::optional<SaddleTest> test;
    std::string error;
};

struct TransitionStateResult {
    bool found = false;
    std::vector<double> geometry;
    double energy = 0.0;
    std::vector<ModeSearch> searches;
};

struct TransitionOptions {
    double ctol = 1e-3;
    int max_iterations = 100;
};

TransitionStateResult transition_state_search(const ReactionSpec &spec,
                                              const TransitionOptions &options,
                                              const EngineSettings &settings);

// Excited-state derivative curves

struct ExcitedRow {
    double r = 0.0;
    std::size_t state = 0; // rank among the particle-filtered states, 0 = ground
    std::uint64_t initial_bits = 0;
    double particles = 0.0;
    double energy = 0.0;
    double derivative = 0.0; // dE_k/dR
    double e_fci = 0.0;      // nearest <N> = target oracle eigenvalue
    double d_fci = 0.0;      // central difference of that oracle eigenvalue
    std::string error;
};

struct ExcitedOptions {
    ExcitedOptions() { ssvqe.k = 5; }

    vqe::SSVQEConfig ssvqe;
    int target_particles = 2;
    double oracle_step = 1e-3;
};

/// Parity-tapered family, depth 6, |dE| < 1e-9: the odd-parity sectors are removed so the
/// lowest SS-VQE states all carry an even particle number.
EngineSettings excited_settings();

/// Grid of 14 bond lengths from 0.24 to 1.54 Angstrom.
std::vector<double> excited_default_grid();

std::vector<ExcitedRow> excited_derivative_curves(const chem::Molecule &mol,
                                                  const std::vector<double> &grid,
                                                  const ExcitedOptions &options,
                                                  const EngineSettings &settings);

} // namespace qderiv::apps
