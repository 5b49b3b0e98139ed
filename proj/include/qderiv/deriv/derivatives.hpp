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
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qderiv/chem/molecule.hpp"
#include "qderiv/chem/scf.hpp"
#include "qderiv/ops/encoding.hpp"
#include "qderiv/ops/pauli.hpp"
#include "qderiv/ops/taper.hpp"
#include "qderiv/sim/circuit.hpp"
#include "qderiv/vqe/vqe.hpp"

namespace qderiv::deriv {

enum class ParameterKind {
    NuclearCoordinate, // absolute coordinate of one atom along one axis, Angstrom
    BondLength,        // distance between atoms a and a+1; atoms beyond a move rigidly, Angstrom
    FieldComponent,    // uniform field along one axis, atomic units
};

struct SystemParameter {
    std::string name;
    ParameterKind kind = ParameterKind::NuclearCoordinate;
    std::size_t atom = 0;
    int axis = 2;
    double value = std::numeric_limits<double>::quiet_NaN(); // NaN: read from the molecule

    [[nodiscard]] std::string units() const;
    [[nodiscard]] bool is_field() const noexcept { return kind == ParameterKind::FieldComponent; }
};

/// Named system parameters eta; names are unique and values finite.
class SystemParameters {
  public:
    SystemParameters() = default;
    explicit SystemParameters(std::vector<SystemParameter> entries);

    [[nodiscard]] const std::vector<SystemParameter> &entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const SystemParameter &operator[](std::size_t i) const { return entries_.at(i); }
    [[nodiscard]] std::size_t index_of(const std::string &name) const;
    [[nodiscard]] std::vector<double> values() const;

    static SystemParameter nuclear_coordinate(std::string name, std::size_t atom, int axis);
    static SystemParameter bond_length(std::string name, std::size_t atom);
    static SystemParameter field_component(std::string name, int axis);

  private:
    std::vector<SystemParameter> entries_;
};

/// One bond-length parameter per consecutive atom pair plus, optionally, a z field.
SystemParameters chain_parameters(const chem::Molecule &mol, bool with_field_z);

enum class OrbitalChoice { Automatic, Rhf, Lowdin };

/// All: every I/Z-only qubit, sector chosen by ground energy. Parity: only the qubit holding
/// total fermion parity, fixed by the electron count.
enum class TaperScope { All, Parity };

struct FamilyOptions {
    ops::Encoding encoding = ops::Encoding::BravyiKitaev;
    bool taper = false;
    TaperScope taper_scope = TaperScope::All;
    OrbitalChoice orbitals = OrbitalChoice::Automatic; // RHF when closed shell, else Lowdin
};

/// eta -> H(eta): geometry and field -> integrals -> fermion operator -> encoding -> taper.
/// The tapering map is fixed at the base parameters and reused for every eta.
class HamiltonianFamily {
  public:
    /// Base parameter values are read from `mol` (geometry entries) and zero (field entries)
    /// unless set explicitly in `params`.
    HamiltonianFamily(chem::Molecule mol, SystemParameters params, FamilyOptions options = {});

    [[nodiscard]] const SystemParameters &parameters() const noexcept { return params_; }
    [[nodiscard]] const std::vector<double> &base() const noexcept { return base_; }
    [[nodiscard]] const FamilyOptions &options() const noexcept { return options_; }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] int electron_count() const noexcept { return electrons_; }
    [[nodiscard]] const std::optional<ops::TaperingMap> &tapering() const noexcept {
        return tapering_;
    }

    [[nodiscard]] chem::Molecule molecule(const std::vector<double> &eta) const;
    [[nodiscard]] Eigen::Vector3d field(const std::vector<double> &eta) const;
    [[nodiscard]] chem::SpinOrbitalIntegrals integrals(const std::vector<double> &eta) const;
    [[nodiscard]] ops::PauliSum operator()(const std::vector<double> &eta) const;
    /// Restricted Hartree-Fock energy at eta (closed shell only).
    [[nodiscard]] double hartree_fock_energy(const std::vector<double> &eta) const;

    /// Encoded (and tapered) number operator.
    [[nodiscard]] ops::PauliSum number_operator() const;
    /// Encoded (and tapered) dipole operator along `axis` at eta.
    [[nodiscard]] ops::PauliSum dipole_operator(const std::vector<double> &eta, int axis) const;
    /// Qubit bitstring of the encoded Hartree-Fock occupation.
    [[nodiscard]] std::uint64_t reference_bits() const;
    [[nodiscard]] sim::ParameterizedCircuit reference_circuit() const;

  private:
    [[nodiscard]] ops::PauliSum build(const std::vector<double> &eta) const;
    [[nodiscard]] ops::PauliSum reduce(const ops::PauliSum &s) const;

    chem::Molecule mol_;
    SystemParameters params_;
    FamilyOptions options_;
    std::vector<double> base_;
    std::size_t n_modes_ = 0;
    std::size_t n_qubits_ = 0;
    int electrons_ = 0;
    std::optional<ops::TaperingMap> tapering_;

    struct Cache {
        std::mutex mutex;
        std::map<std::vector<double>, ops::PauliSum> entries;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Default finite-difference step for Hamiltonian derivatives (Angstrom or a.u.).
inline constexpr double kDefaultStep = 1e-3;

/// (H(eta + h e_i) - H(eta - h e_i)) / 2h, coefficient-wise.
ops::PauliSum dH(const HamiltonianFamily &family, const std::vector<double> &eta, std::size_t i,
                 double h = kDefaultStep);
/// Diagonal (H+ - 2H0 + H-)/h^2 or the four-point cross stencil for i != j.
ops::PauliSum d2H(const HamiltonianFamily &family, const std::vector<double> &eta, std::size_t i,
                  std::size_t j, double h = kDefaultStep);

/// A trial state: reference preparation, ansatz and bound parameters.
struct PreparedState {
    sim::ParameterizedCircuit reference;
    sim::ParameterizedCircuit ansatz;
    std::vector<double> theta;

    [[nodiscard]] sim::Statevector state() const;
    /// Reference followed by the ansatz as one circuit acting on |0...0>.
    [[nodiscard]] sim::ParameterizedCircuit full_circuit() const;
};

enum class EngineKind { Exact, Sampled };

struct EngineConfig {
    EngineKind kind = EngineKind::Exact;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
};

struct FirstOrderResult {
    double value = 0.0;
    double theta_gradient_norm = 0.0; // parameter-shift gradient of <H(eta)> at theta*
    bool stale = false;               // theta_gradient_norm > kStaleGradient
};

inline constexpr double kStaleGradient = 1e-3;

/// <psi(theta*)| dH_i |psi(theta*)> with a staleness check of theta* against H(eta).
FirstOrderResult first_order(const HamiltonianFamily &family, const std::vector<double> &eta,
                             const PreparedState &state, std::size_t i, double h = kDefaultStep,
                             const EngineConfig &engine = {});

/// Re<psi1|A|psi2>. The sampled path estimates |<0|U1^dagger P U2|0>| per term from the
/// all-zeros probability and takes the sign of <psi1|P|psi1> (real-amplitude assumption);
/// terms with an odd number of Y letters contribute zero under that assumption.
double matrix_element_real(const ops::PauliSum &a, const PreparedState &psi1,
                           const PreparedState &psi2, const EngineConfig &engine = {});

/// Re-optimizes a state for a shifted Hamiltonian, warm-started from `warm`.
using Reoptimizer =
    std::function<std::pair<PreparedState, bool>(const ops::PauliSum &h, const PreparedState &warm)>;

/// Warm-started ground-state VQE with the given optimizer settings.
Reoptimizer vqe_reoptimizer(const vqe::OptimizerConfig &opt);

struct SecondOrderOptions {
    double h = kDefaultStep;
    double d_eta = 1e-3;
    vqe::OptimizerConfig shifted_optimizer = [] {
        vqe::OptimizerConfig o;
        o.energy_tolerance = 1e-8;
        return o;
    }();
    EngineConfig engine{};
};

struct SecondOrderResult {
    double value = 0.0; // I + J
    double i_term = 0.0;
    double j_term = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    bool shifted_converged = true;
};

/// I + J with I = <psi|d2H_ij|psi>, J = (2/d_eta) Re[<psi|dH_j|psi(eta + d_eta e_i)> - <psi|dH_j|psi>].
SecondOrderResult second_order(const HamiltonianFamily &family, const std::vector<double> &eta,
                               const PreparedState &state, std::size_t i, std::size_t j,
                               const SecondOrderOptions &options = {},
                               const Reoptimizer &reoptimize = {});

/// n^4 N_eta^order (sum |h_P|)^2 / eps^2, rounded up; n defaults to the qubit count.
std::uint64_t cost_estimate(const ops::PauliSum &h, std::size_t n_eta, double epsilon, int order,
                            std::size_t n_spin_orbitals = 0);

struct DerivativeReport {
    std::vector<std::string> names;
    std::vector<std::string> units;
    std::vector<double> first;                // dE/d eta_i
    std::vector<std::vector<double>> second;  // d2E/d eta_i d eta_j (may be empty)
    std::size_t state_index = 0;
    double energy = 0.0;
    std::map<std::string, std::string> metadata;
    std::vector<std::string> warnings;

    /// One `key=value` line per field.
    [[nodiscard]] std::string to_text() const;
    static DerivativeReport from_text(const std::string &text);
};

} // namespace qderiv::deriv
