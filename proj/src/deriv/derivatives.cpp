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

#include "qderiv/deriv/derivatives.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "qderiv/chem/integrals.hpp"
#include "qderiv/errors.hpp"

namespace qderiv::deriv {

namespace {

constexpr std::size_t kCacheLimit = 4096;

std::string format_eta(const std::vector<double> &eta) {
    std::string out = "(";
    char buf[32];
    for (std::size_t k = 0; k < eta.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%s%.10g", k ? ", " : "", eta[k]);
        out += buf;
    }
    return out + ")";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_axis(int axis) {
    if (axis < 0 || axis > 2) {
        throw ArgumentError("axis must be 0, 1 or 2");
    }
}

// Evaluate H at eta, rethrowing geometry failures with the offending parameters.
ops::PauliSum evaluate(const HamiltonianFamily &family, const std::vector<double> &eta) {
    try {
        return family(eta);
    } catch (const SingularGeometryError &e) {
        throw SingularGeometryError(std::string(e.what()) + " at eta = " + format_eta(eta));
    } catch (const InvalidMoleculeError &e) {
        throw InvalidMoleculeError(std::string(e.what()) + " at eta = " + format_eta(eta));
    } catch (const FieldRegimeError &e) {
        throw FieldRegimeError(std::string(e.what()) + " at eta = " + format_eta(eta));
    }
}

std::vector<double> displaced(std::vector<double> eta, std::size_t i, double d) {
    eta[i] += d;
    return eta;
}

double observable_value(const ops::PauliSum &obs, const sim::Statevector &psi,
                        const EngineConfig &engine, std::uint64_t stream) {
    if (engine.kind == EngineKind::Exact) {
        return sim::expectation(obs, psi);
    }
    return sim::sampled_estimate(obs, psi, engine.shots, sim::stream_seed(engine.seed, stream))
        .value;
}

void check_index(const HamiltonianFamily &family, std::size_t i) {
    if (i >= family.parameters().size()) {
        throw ArgumentError("system parameter index out of range");
    }
}

} // namespace

std::string SystemParameter::units() const {
    return kind == ParameterKind::FieldComponent ? "au" : "angstrom";
}

SystemParameters::SystemParameters(std::vector<SystemParameter> entries)
    : entries_(std::move(entries)) {
    for (std::size_t a = 0; a < entries_.size(); ++a) {
        if (entries_[a].name.empty()) {
            throw ArgumentError("system parameters need a name");
        }
        check_axis(entries_[a].axis);
        if (std::isinf(entries_[a].value)) {
            throw ArgumentError("system parameter '" + entries_[a].name + "' is not finite");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (entries_[a].name == entries_[b].name) {
                throw ArgumentError("duplicate system parameter '" + entries_[a].name + "'");
            }
        }
    }
}

std::size_t SystemParameters::index_of(const std::string &name) const {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (entries_[k].name == name) {
            return k;
        }
    }
    throw ArgumentError("unknown system parameter '" + name + "'");
}

std::vector<double> SystemParameters::values() const {
    std::vector<double> v;
    for (const auto &e : entries_) {
        v.push_back(e.value);
    }
    return v;
}

SystemParameter SystemParameters::nuclear_coordinate(std::string name, std::size_t atom,
                                                     int axis) {
    return {std::move(name), ParameterKind::NuclearCoordinate, atom, axis};
}

SystemParameter SystemParameters::bond_length(std::string name, std::size_t atom) {
    return {std::move(name), ParameterKind::BondLength, atom, 2};
}

SystemParameter SystemParameters::field_component(std::string name, int axis) {
    return {std::move(name), ParameterKind::FieldComponent, 0, axis, 0.0};
}

SystemParameters chain_parameters(const chem::Molecule &mol, bool with_field_z) {
    std::vector<SystemParameter> entries;
    for (std::size_t a = 0; a + 1 < mol.size(); ++a) {
        entries.push_back(SystemParameters::bond_length("R" + std::to_string(a + 1), a));
    }
    if (with_field_z) {
        entries.push_back(SystemParameters::field_component("Fz", 2));
    }
    return SystemParameters(std::move(entries));
}

HamiltonianFamily::HamiltonianFamily(chem::Molecule mol, SystemParameters params,
                                     FamilyOptions options)
    : mol_(std::move(mol)), params_(std::move(params)), options_(options) {
    for (const auto &p : params_.entries()) {
        if (p.kind != ParameterKind::FieldComponent && p.atom >= mol_.size()) {
            throw ArgumentError("parameter '" + p.name + "' refers to a missing atom");
        }
        if (p.kind == ParameterKind::BondLength && p.atom + 1 >= mol_.size()) {
            throw ArgumentError("bond-length parameter '" + p.name + "' needs a following atom");
        }
        double v = p.value;
        if (std::isnan(v)) {
            if (p.kind == ParameterKind::NuclearCoordinate) {
                v = mol_.atoms()[p.atom].position[p.axis];
            } else if (p.kind == ParameterKind::BondLength) {
                v = (mol_.atoms()[p.atom + 1].position - mol_.atoms()[p.atom].position).norm();
            } else {
                v = 0.0;
            }
        }
        base_.push_back(v);
    }
    electrons_ = mol_.electron_count();
    n_modes_ = 2 * mol_.size();
    n_qubits_ = n_modes_;
    if (options_.orbitals == OrbitalChoice::Rhf && electrons_ % 2 != 0) {
        throw RestrictedShellError("RHF orbitals requested for an open-shell system");
    }
    if (options_.taper) {
        const ops::PauliSum full = build(base_);
        if (options_.taper_scope == TaperScope::All) {
            tapering_ = ops::select_sector(full, ops::taperable_qubits(full));
        } else {
            const auto rows = ops::encoding_matrix(options_.encoding, n_modes_);
            const std::uint32_t all = (n_modes_ >= 32) ? ~0u : ((1u << n_modes_) - 1u);
            std::optional<std::size_t> qubit;
            for (std::size_t q = 0; q < rows.size(); ++q) {
                if (rows[q] == all) qubit = q;
            }
            const auto free = ops::taperable_qubits(full);
            if (!qubit || std::find(free.begin(), free.end(), *qubit) == free.end()) {
                throw NotTaperableError("no single qubit holds the total parity");
            }
            const int eigenvalue = (electrons_ % 2 == 0) ? 1 : -1;
            tapering_ = ops::taper(full, {*qubit}, {eigenvalue}).second;
        }
        n_qubits_ = tapering_->reduced_qubits();
    }
}

chem::Molecule HamiltonianFamily::molecule(const std::vector<double> &eta) const {
    if (eta.size() != params_.size()) {
        throw ArgumentError("expected " + std::to_string(params_.size()) + " parameter values");
    }
    std::vector<chem::Atom> atoms = mol_.atoms();
    for (std::size_t k = 0; k < eta.size(); ++k) {
        const auto &p = params_[k];
        if (!std::isfinite(eta[k])) {
            throw ArgumentError("parameter '" + p.name + "' is not finite");
        }
        if (p.kind == ParameterKind::NuclearCoordinate) {
            atoms[p.atom].position[p.axis] = eta[k];
        } else if (p.kind == ParameterKind::BondLength) {
            const Eigen::Vector3d d = atoms[p.atom + 1].position - atoms[p.atom].position;
            const double len = d.norm();
            if (!(eta[k] > 0.0) || len == 0.0) {
                throw SingularGeometryError("bond length '" + p.name + "' must be positive");
            }
            const Eigen::Vector3d shift = (eta[k] - len) * d / len;
            for (std::size_t a = p.atom + 1; a < atoms.size(); ++a) {
                atoms[a].position += shift;
            }
        }
    }
    return chem::Molecule(std::move(atoms), mol_.net_charge());
}

Eigen::Vector3d HamiltonianFamily::field(const std::vector<double> &eta) const {
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < eta.size(); ++k) {
        if (params_[k].is_field()) {
            f[params_[k].axis] += eta[k];
        }
    }
    return f;
}

chem::SpinOrbitalIntegrals HamiltonianFamily::integrals(const std::vector<double> &eta) const {
    const chem::Molecule mol = molecule(eta);
    const chem::IntegralSet bare = chem::core_integrals(mol, chem::sto3g(mol));
    const bool closed = electrons_ % 2 == 0;
    const bool use_rhf = options_.orbitals == OrbitalChoice::Rhf ||
                         (options_.orbitals == OrbitalChoice::Automatic && closed);
    // Orbitals are taken at zero field so the field enters the operator linearly.
    const Eigen::MatrixXd c = use_rhf ? chem::run_rhf(bare, electrons_).coefficients
                                      : chem::lowdin_orbitals(bare.overlap);
    const chem::IntegralSet ints = chem::apply_field(bare, field(eta));
    return chem::spin_orbital_integrals(ints, c,
                                        use_rhf ? chem::OrbitalKind::Rhf : chem::OrbitalKind::Lowdin);
}

ops::PauliSum HamiltonianFamily::build(const std::vector<double> &eta) const {
    return reduce(ops::encode(ops::hamiltonian_from_integrals(integrals(eta)), options_.encoding));
}

ops::PauliSum HamiltonianFamily::reduce(const ops::PauliSum &s) const {
    return tapering_ ? tapering_->apply(s) : s;
}

ops::PauliSum HamiltonianFamily::operator()(const std::vector<double> &eta) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        const auto it = cache_->entries.find(eta);
        if (it != cache_->entries.end()) {
            return it->second;
        }
    }
    ops::PauliSum h = build(eta);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->entries.size() >= kCacheLimit) {
        cache_->entries.clear();
    }
    cache_->entries.emplace(eta, h);
    return h;
}

double HamiltonianFamily::hartree_fock_energy(const std::vector<double> &eta) const {
    const chem::Molecule mol = molecule(eta);
    const chem::IntegralSet ints =
        chem::apply_field(chem::core_integrals(mol, chem::sto3g(mol)), field(eta));
    return chem::run_rhf(ints, electrons_).energy;
}

ops::PauliSum HamiltonianFamily::number_operator() const {
    return reduce(ops::number_operator(n_modes_, options_.encoding));
}

ops::PauliSum HamiltonianFamily::dipole_operator(const std::vector<double> &eta, int axis) const {
    return reduce(ops::dipole_operator(integrals(eta), axis, options_.encoding));
}

std::uint64_t HamiltonianFamily::reference_bits() const {
    const std::uint64_t occupation = (std::uint64_t{1} << electrons_) - 1U;
    const std::uint64_t bits = ops::encode_occupation(occupation, options_.encoding, n_modes_);
    return tapering_ ? tapering_->reduce_bits(bits) : bits;
}

sim::ParameterizedCircuit HamiltonianFamily::reference_circuit() const {
    return sim::basis_state_circuit(n_qubits_, reference_bits());
}

ops::PauliSum dH(const HamiltonianFamily &family, const std::vector<double> &eta, std::size_t i,
                 double h) {
    check_index(family, i);
    if (!(h > 0.0)) {
        throw ArgumentError("finite-difference step must be positive");
    }
    const auto plus = evaluate(family, displaced(eta, i, h));
    const auto minus = evaluate(family, displaced(eta, i, -h));
    return (plus - minus) * ops::Complex(1.0 / (2.0 * h));
}

ops::PauliSum d2H(const HamiltonianFamily &family, const std::vector<double> &eta, std::size_t i,
                  std::size_t j, double h) {
    check_index(family, i);
    check_index(family, j);
    if (!(h > 0.0)) {
        throw ArgumentError("finite-difference step must be positive");
    }
    if (i == j) {
        const auto plus = evaluate(family, displaced(eta, i, h));
        const auto zero = evaluate(family, eta);
        const auto minus = evaluate(family, displaced(eta, i, -h));
        return (plus + minus - zero * ops::Complex(2.0)) * ops::Complex(1.0 / (h * h));
    }
    const auto pp = evaluate(family, displaced(displaced(eta, i, h), j, h));
    const auto pm = evaluate(family, displaced(displaced(eta, i, h), j, -h));
    const auto mp = evaluate(family, displaced(displaced(eta, i, -h), j, h));
    const auto mm = evaluate(family, displaced(displaced(eta, i, -h), j, -h));
    // Group symmetric pairs so the stencil is exactly symmetric in (i, j).
    return ((pp + mm) - (pm + mp)) * ops::Complex(1.0 / (4.0 * h * h));
}

sim::Statevector PreparedState::state() const {
    return sim::bind_and_run(ansatz, theta, sim::run(reference, {}));
}

sim::ParameterizedCircuit PreparedState::full_circuit() const {
    sim::ParameterizedCircuit c = reference;
    c.append(ansatz);
    return c;
}

FirstOrderResult first_order(const HamiltonianFamily &family, const std::vector<double> &eta,
                             const PreparedState &state, std::size_t i, double h,
                             const EngineConfig &engine) {
    const auto dh = dH(family, eta, i, h);
    const sim::Statevector psi = state.state();
    FirstOrderResult res;
    res.value = observable_value(dh, psi, engine, i);
    const vqe::EnergyFunction f(evaluate(family, eta), state.ansatz, sim::run(state.reference, {}));
    double norm2 = 0.0;
    for (double g : vqe::adjoint_gradient(f, state.theta)) {
        norm2 += g * g;
    }
    res.theta_gradient_norm = std::sqrt(norm2);
    res.stale = res.theta_gradient_norm > kStaleGradient;
    return res;
}

double matrix_element_real(const ops::PauliSum &a, const PreparedState &psi1,
                           const PreparedState &psi2, const EngineConfig &engine) {
    if (!a.is_observable()) {
        throw NotObservableError("matrix element of a non-Hermitian Pauli sum");
    }
    if (engine.kind == EngineKind::Exact) {
        return sim::CompiledObservable(a).matrix_element(psi1.state(), psi2.state()).real();
    }
    if (engine.shots == 0) {
        throw ArgumentError("sampled engine needs a positive shot count");
    }
    const auto u1 = psi1.full_circuit();
    const auto u2 = psi2.full_circuit();
    const sim::Statevector ref = psi1.state();
    double acc = 0.0;
    const auto &terms = a.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto &t = terms[k];
        if (std::popcount(t.x & t.z) % 2 == 1) {
            continue; // purely imaginary for real amplitudes
        }
        auto u2p = u2;
        u2p.add(sim::Gate::pauli(t));
        const double prob = sim::sampled_overlap_probability(
            u1, psi1.theta, u2p, psi2.theta, engine.shots, sim::stream_seed(engine.seed, 2 * k));
        const ops::PauliSum single(a.n_qubits(), {ops::PauliTerm{1.0, t.x, t.z, t.n_qubits}});
        const double diag =
            sim::sampled_estimate(single, ref, engine.shots, sim::stream_seed(engine.seed, 2 * k + 1))
                .value;
        acc += t.coefficient.real() * (diag < 0.0 ? -1.0 : 1.0) * std::sqrt(prob);
    }
    return acc;
}

Reoptimizer vqe_reoptimizer(const vqe::OptimizerConfig &opt) {
    return [opt](const ops::PauliSum &h, const PreparedState &warm) {
        const auto res = vqe::vqe_minimize(h, warm.ansatz, warm.reference, opt, warm.theta);
        return std::make_pair(PreparedState{warm.reference, warm.ansatz, res.theta}, res.converged);
    };
}

SecondOrderResult second_order(const HamiltonianFamily &family, const std::vector<double> &eta,
                               const PreparedState &state, std::size_t i, std::size_t j,
                               const SecondOrderOptions &options, const Reoptimizer &reoptimize) {
    check_index(family, i);
    check_index(family, j);
    if (!(options.d_eta > 0.0)) {
        throw ArgumentError("d_eta must be positive");
    }
    const Reoptimizer solver = reoptimize ? reoptimize : vqe_reoptimizer(options.shifted_optimizer);
    const auto shifted_h = evaluate(family, displaced(eta, i, options.d_eta));
    const auto [shifted, converged] = solver(shifted_h, state);

    const sim::Statevector psi = state.state();
    const auto dhj = dH(family, eta, j, options.h);
    SecondOrderResult res;
    res.shifted_converged = converged;
    res.i_term = observable_value(d2H(family, eta, i, j, options.h), psi, options.engine, 100 + i);
    res.j2 = observable_value(dhj, psi, options.engine, 200 + j);
    res.j1 = matrix_element_real(dhj, state, shifted, options.engine);
    res.j_term = 2.0 / options.d_eta * (res.j1 - res.j2);
    res.value = res.i_term + res.j_term;
    return res;
}

std::uint64_t cost_estimate(const ops::PauliSum &h, std::size_t n_eta, double epsilon, int order,
                            std::size_t n_spin_orbitals) {
    if (!(epsilon > 0.0)) {
        throw ArgumentError("precision epsilon must be positive");
    }
    if (order != 1 && order != 2) {
        throw ArgumentError("derivative order must be 1 or 2");
    }
    const double n = static_cast<double>(n_spin_orbitals ? n_spin_orbitals : h.n_qubits());
    const double l1 = h.l1_norm();
    const double count =
        std::pow(n, 4) * std::pow(static_cast<double>(n_eta), order) * l1 * l1 / (epsilon * epsilon);
    if (!(count < 1.8e19)) {
        throw SizeLimitError("measurement estimate exceeds 64-bit range");
    }
    return static_cast<std::uint64_t>(std::ceil(count));
}

std::string DerivativeReport::to_text() const {
    std::ostringstream out;
    out << "state_index=" << state_index << '\n';
    out << "energy=" << format_double(energy) << '\n';
    for (std::size_t k = 0; k < names.size(); ++k) {
        out << "parameter." << k << '=' << names[k] << '\n';
        out << "units." << names[k] << '=' << (k < units.size() ? units[k] : "") << '\n';
        if (k < first.size()) {
            out << "first." << names[k] << '=' << format_double(first[k]) << '\n';
        }
    }
    for (std::size_t a = 0; a < second.size(); ++a) {
        for (std::size_t b = 0; b < second[a].size(); ++b) {
            out << "second." << names[a] << '.' << names[b] << '=' << format_double(second[a][b])
                << '\n';
        }
    }
    for (const auto &[k, v] : metadata) {
        out << "meta." << k << '=' << v << '\n';
    }
    for (std::size_t k = 0; k < warnings.size(); ++k) {
        out << "warning." << k << '=' << warnings[k] << '\n';
    }
    return out.str();
}

DerivativeReport DerivativeReport::from_text(const std::string &text) {
    DerivativeReport r;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto number = [&](const std::string &key) {
        try {
            return std::stod(kv.at(key));
        } catch (const std::exception &) {
            throw ParseError(0, "missing or invalid '" + key + "'");
        }
    };
    r.state_index = static_cast<std::size_t>(number("state_index"));
    r.energy = number("energy");
    for (std::size_t k = 0; kv.count("parameter." + std::to_string(k)); ++k) {
        r.names.push_back(kv["parameter." + std::to_string(k)]);
    }
    bool has_second = false;
    for (const auto &n : r.names) {
        r.units.push_back(kv["units." + n]);
        if (kv.count("first." + n)) {
            r.first.push_back(number("first." + n));
        }
        has_second = has_second || kv.count("second." + n + "." + n);
    }
    if (has_second) {
        r.second.assign(r.names.size(), std::vector<double>(r.names.size(), 0.0));
        for (std::size_t a = 0; a < r.names.size(); ++a) {
            for (std::size_t b = 0; b < r.names.size(); ++b) {
                r.second[a][b] = number("second." + r.names[a] + "." + r.names[b]);
            }
        }
    }
    for (const auto &[k, v] : kv) {
        if (k.rfind("meta.", 0) == 0) {
            r.metadata[k.substr(5)] = v;
        } else if (k.rfind("warning.", 0) == 0) {
            r.warnings.push_back(v);
        }
    }
    return r;
}

} // namespace qderiv::deriv
