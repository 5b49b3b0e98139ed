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

#include "qderiv/apps/applications.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qderiv/chem/integrals.hpp"
#include "qderiv/errors.hpp"
#include "qderiv/ops/dense.hpp"

namespace qderiv::apps {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm2(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double quadratic_form(const std::vector<std::vector<double>> &h, const std::vector<double> &u,
                      const std::vector<double> &v) {
    double s = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
        for (std::size_t b = 0; b < v.size(); ++b) {
            s += u[a] * h[a][b] * v[b];
        }
    }
    return s;
}

std::vector<double> bond_lengths(const chem::Molecule &mol) {
    std::vector<double> out;
    for (std::size_t a = 0; a + 1 < mol.size(); ++a) {
        out.push_back((mol.atoms()[a + 1].position - mol.atoms()[a].position).norm());
    }
    return out;
}

deriv::SystemParameters bond_parameters(const chem::Molecule &mol) {
    return deriv::chain_parameters(mol, false);
}

deriv::SecondOrderOptions second_order_options(const EngineSettings &settings, double h) {
    deriv::SecondOrderOptions so;
    so.h = h;
    so.d_eta = h;
    so.shifted_optimizer = settings.optimizer;
    so.engine = settings.engine;
    return so;
}

double sector_ground(const deriv::HamiltonianFamily &family, const std::vector<double> &eta) {
    return sector_spectrum(family(eta), family.number_operator(), family.electron_count()).front();
}

double observable(const ops::PauliSum &obs, const sim::Statevector &psi,
                  const deriv::EngineConfig &engine, std::uint64_t stream) {
    if (engine.kind == deriv::EngineKind::Exact) {
        return sim::expectation(obs, psi);
    }
    return sim::sampled_estimate(obs, psi, engine.shots, sim::stream_seed(engine.seed, stream))
        .value;
}

} // namespace

int default_depth(std::size_t n_qubits) { return static_cast<int>(2 * n_qubits + 2); }

vqe::OptimizerConfig default_optimizer() {
    vqe::OptimizerConfig o;
    o.learning_rate = 0.5;
    o.init_scale = 0.5;
    o.energy_tolerance = 1e-15;
    o.max_iterations = 100000;
    o.seed = 1;
    return o;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

deriv::PreparedState blank_state(const deriv::HamiltonianFamily &family,
                                 const EngineSettings &settings) {
    deriv::PreparedState st;
    if (settings.tapered_ansatz) {
        if (family.n_qubits() != 2) {
            throw ArgumentError("the single-parameter ansatz needs a 2-qubit tapered Hamiltonian");
        }
        st.reference = sim::ParameterizedCircuit(2);
        st.ansatz = sim::tapered_ansatz();
        return st;
    }
    const int depth = settings.depth > 0 ? settings.depth : default_depth(family.n_qubits());
    st.reference = family.reference_circuit();
    st.ansatz = sim::hea_ansatz(family.n_qubits(), depth, settings.entangler);
    return st;
}

GroundState solve_ground(const deriv::HamiltonianFamily &family, const std::vector<double> &eta,
                         const EngineSettings &settings, std::optional<std::vector<double>> warm) {
    GroundState gs;
    gs.state = blank_state(family, settings);
    const ops::PauliSum h = family(eta);
    const auto res =
        vqe::vqe_minimize(h, gs.state.ansatz, gs.state.reference, settings.optimizer, std::move(warm));
    gs.state.theta = res.theta;
    gs.converged = res.converged;
    gs.iterations = res.iterations;
    gs.energy = settings.engine.kind == deriv::EngineKind::Exact
                    ? res.energy
                    : observable(h, gs.state.state(), settings.engine, 0);
    return gs;
}

std::vector<double> sector_spectrum(const ops::PauliSum &h, const ops::PauliSum &number_op,
                                    int n_electrons) {
    const auto es = ops::eigensystem(h);
    const Eigen::MatrixXcd n = ops::to_dense_matrix(number_op);
    std::vector<double> out;
    for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
        const Eigen::VectorXcd v = es.vectors.col(k);
        const double particles = v.dot(n * v).real();
        if (std::abs(particles - n_electrons) < 1e-6) {
            out.push_back(es.values[k]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> Grid::values() const {
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = start + (stop - start) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return out;
}

Grid Grid::parse(const std::string &text) {
    Grid g;
    std::istringstream in(text);
    std::string a, b, n;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, n)) {
        throw ArgumentError("grid must be START:STOP:POINTS, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        g.start = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        g.stop = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        const long long count = std::stoll(n, &used);
        if (used != n.size() || count < 2) throw std::invalid_argument(n);
        g.points = static_cast<std::size_t>(count);
    } catch (const std::logic_error &) {
        throw ArgumentError("grid must be START:STOP:POINTS with POINTS >= 2, got '" + text + "'");
    }
    if (!(g.start < g.stop)) {
        throw ArgumentError("grid start must be below stop");
    }
    return g;
}

// ---------------------------------------------------------------------------------------------

std::vector<PesRow> pes_scan(const chem::Molecule &mol, const std::vector<double> &grid,
                             const EngineSettings &settings) {
    if (mol.size() < 2) {
        throw ArgumentError("a scan needs at least one bond");
    }
    const deriv::HamiltonianFamily family(mol, bond_parameters(mol), settings.family);
    std::vector<PesRow> rows(grid.size());
    parallel_for(grid.size(), settings.threads, [&](std::size_t k) {
        PesRow &row = rows[k];
        row.r = grid[k];
        try {
            std::vector<double> eta = family.base();
            eta[0] = grid[k];
            const GroundState gs = solve_ground(family, eta, settings);
            row.e_vqe = gs.energy;
            row.converged = gs.converged;
            row.e_fci = sector_ground(family, eta);
            row.abs_error = std::abs(row.e_vqe - row.e_fci);
            try {
                row.e_hf = family.hartree_fock_energy(eta);
            } catch (const RestrictedShellError &) {
                row.e_hf = kNaN;
            }
        } catch (const Error &e) {
            row.error = e.what();
            row.e_vqe = row.e_fci = row.e_hf = row.abs_error = kNaN;
        }
    });
    return rows;
}

std::vector<SurfaceSample> parameter_surface(const chem::Molecule &mol,
                                             const std::vector<double> &r_grid,
                                             const std::vector<double> &theta_grid,
                                             const EngineSettings &settings) {
    if (mol.size() < 2) {
        throw ArgumentError("a scan needs at least one bond");
    }
    const deriv::HamiltonianFamily family(mol, bond_parameters(mol), settings.family);
    const deriv::PreparedState blank = blank_state(family, settings);
    if (blank.ansatz.slot_count() != 1) {
        throw ArgumentError("the parameter surface needs a one-parameter ansatz");
    }
    const sim::ParameterizedCircuit circuit = blank.full_circuit();
    std::vector<SurfaceSample> out(r_grid.size() * theta_grid.size());
    parallel_for(r_grid.size(), settings.threads, [&](std::size_t i) {
        std::vector<double> eta = family.base();
        eta[0] = r_grid[i];
        const ops::PauliSum h = family(eta);
        for (std::size_t j = 0; j < theta_grid.size(); ++j) {
            SurfaceSample &s = out[i * theta_grid.size() + j];
            s.r = r_grid[i];
            s.theta = theta_grid[j];
            s.energy = sim::expectation(h, sim::run(circuit, {theta_grid[j]}));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------------------------

std::string to_string(StepMethod m) { return m == StepMethod::Gradient ? "gradient" : "hessian"; }

StepMethod parse_step_method(const std::string &name) {
    if (name == "gradient") return StepMethod::Gradient;
    if (name == "hessian") return StepMethod::Hessian;
    throw ArgumentError("method must be 'gradient' or 'hessian', got '" + name + "'");
}

double GeometryOptions::resolved_gamma() const {
    if (gamma > 0.0) return gamma;
    return method == StepMethod::Gradient ? 0.1 : 1.0;
}

OptimizationTrajectory geometry_optimize(const chem::Molecule &start,
                                         const GeometryOptions &options,
                                         const EngineSettings &settings) {
    if (options.gamma < 0.0 || !(options.ctol > 0.0) || options.max_iterations < 1) {
        throw ArgumentError("gamma must be positive, ctol positive and the cap at least 1");
    }
    const deriv::HamiltonianFamily family(start, bond_parameters(start), settings.family);
    std::vector<std::size_t> active = options.active;
    if (active.empty()) {
        for (std::size_t a = 0; a < family.parameters().size(); ++a) active.push_back(a);
    }
    const double gamma = options.resolved_gamma();

    OptimizationTrajectory traj;
    traj.method = options.method;
    for (const auto &p : family.parameters().entries()) traj.names.push_back(p.name);

    std::vector<double> q = family.base();
    std::optional<std::vector<double>> warm;
    for (int it = 0; it < options.max_iterations; ++it) {
        const GroundState gs = solve_ground(family, q, settings, warm);
        warm = gs.state.theta;
        OptimizationStep step;
        step.q = q;
        step.energy = gs.energy;
        step.theta = gs.state.theta;
        step.delta.assign(q.size(), 0.0);
        step.gradient.assign(q.size(), 0.0);
        for (std::size_t a : active) {
            const auto fo = deriv::first_order(family, q, gs.state, a, deriv::kDefaultStep,
                                               settings.engine);
            step.gradient[a] = fo.value;
            if (fo.stale) {
                traj.warnings.push_back("iteration " + std::to_string(it) +
                                        ": stale parameters for " + traj.names[a]);
            }
        }
        if (options.method == StepMethod::Hessian) {
            step.curvature.assign(q.size(), 0.0);
            const auto so = second_order_options(settings, deriv::kDefaultStep);
            for (std::size_t a : active) {
                step.curvature[a] = deriv::second_order(family, q, gs.state, a, a, so).value;
            }
        }
        for (std::size_t a : active) {
            if (options.method == StepMethod::Hessian && step.curvature[a] > 0.0) {
                step.delta[a] = gamma * step.gradient[a] / step.curvature[a];
            } else if (options.method == StepMethod::Hessian) {
                step.delta[a] = options.fallback_gamma * step.gradient[a];
                step.fallback = true;
            } else {
                step.delta[a] = gamma * step.gradient[a];
            }
        }
        for (std::size_t a = 0; a < q.size(); ++a) q[a] -= step.delta[a];
        const bool done = norm2(step.delta) < options.ctol;
        traj.steps.push_back(std::move(step));
        if (done) {
            traj.converged = true;
            break;
        }
    }
    traj.final_q = q;
    traj.final_energy = solve_ground(family, q, settings, warm).energy;
    return traj;
}

// ---------------------------------------------------------------------------------------------

deriv::DerivativeReport derivative_report(const chem::Molecule &mol, bool with_field, int order,
                                          const EngineSettings &settings) {
    if (order != 1 && order != 2) {
        throw ArgumentError("derivative order must be 1 or 2");
    }
    const deriv::HamiltonianFamily family(mol, deriv::chain_parameters(mol, with_field),
                                          settings.family);
    if (family.parameters().size() == 0) {
        throw ArgumentError("no system parameters: add a bond or the field");
    }
    const std::vector<double> eta = family.base();
    const GroundState gs = solve_ground(family, eta, settings);
    deriv::DerivativeReport r;
    r.energy = gs.energy;
    if (!gs.converged) r.warnings.push_back("ground-state VQE did not converge");
    const std::size_t n = family.parameters().size();
    for (std::size_t a = 0; a < n; ++a) {
        const auto &p = family.parameters()[a];
        r.names.push_back(p.name);
        r.units.push_back(p.units());
        const auto fo = deriv::first_order(family, eta, gs.state, a, deriv::kDefaultStep,
                                           settings.engine);
        r.first.push_back(fo.value);
        if (fo.stale) r.warnings.push_back("stale parameters for " + p.name);
    }
    if (order == 2) {
        const auto so = second_order_options(settings, deriv::kDefaultStep);
        r.second.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                const auto res = deriv::second_order(family, eta, gs.state, a, b, so);
                r.second[a][b] = r.second[b][a] = res.value;
                if (!res.shifted_converged) {
                    r.warnings.push_back("shifted re-optimization did not converge for " +
                                         r.names[a] + "," + r.names[b]);
                }
            }
        }
    }
    r.metadata["qubits"] = std::to_string(family.n_qubits());
    r.metadata["encoding"] = std::string(ops::to_string(settings.family.encoding));
    return r;
}

// ---------------------------------------------------------------------------------------------

ResponseReport response_properties(const chem::Molecule &mol, const ResponseOptions &options,
                                   const EngineSettings &settings) {
    if (options.axis < 0 || options.axis > 2 || !(options.field_step > 0.0)) {
        throw ArgumentError("field axis must be 0..2 and the field step positive");
    }
    static const char *axes = "xyz";
    std::vector<deriv::SystemParameter> entries = bond_parameters(mol).entries();
    entries.push_back(deriv::SystemParameters::field_component(
        std::string("F") + axes[options.axis], options.axis));
    const deriv::HamiltonianFamily family(mol, deriv::SystemParameters(entries), settings.family);
    const std::size_t fi = entries.size() - 1;
    const double h = options.field_step;
    const std::vector<double> eta0 = family.base();
    auto at_field = [&](double f) {
        auto e = eta0;
        e[fi] = f;
        return e;
    };

    ResponseReport rep;
    rep.r = eta0.empty() ? 0.0 : eta0[0];
    rep.field_step = h;
    const GroundState gs = solve_ground(family, eta0, settings);
    rep.energy = gs.energy;
    rep.converged = gs.converged;

    const auto fo = deriv::first_order(family, eta0, gs.state, fi, h, settings.engine);
    if (fo.stale) rep.warnings.push_back("stale parameters at zero field");
    rep.mu_electronic = -fo.value;
    rep.mu_operator =
        observable(family.dipole_operator(eta0, options.axis), gs.state.state(), settings.engine, 1);
    rep.mu_nuclear = chem::core_integrals(mol, chem::sto3g(mol)).nuclear_dipole[options.axis];
    rep.mu_net = rep.mu_nuclear - rep.mu_electronic;

    const auto so = deriv::second_order(family, eta0, gs.state, fi, fi,
                                        second_order_options(settings, h));
    if (!so.shifted_converged) rep.warnings.push_back("shifted-state optimization unconverged");
    rep.alpha_energy = -so.value;

    double mu_pm[2];
    for (int s = 0; s < 2; ++s) {
        const auto eta = at_field(s == 0 ? h : -h);
        const GroundState shifted = solve_ground(family, eta, settings, gs.state.theta);
        if (!shifted.converged) rep.warnings.push_back("field-shifted optimization unconverged");
        mu_pm[s] = -deriv::first_order(family, eta, shifted.state, fi, h, settings.engine).value;
    }
    rep.alpha_dipole = (mu_pm[0] - mu_pm[1]) / (2.0 * h);

    const double e0 = sector_ground(family, eta0);
    const double ep = sector_ground(family, at_field(h));
    const double em = sector_ground(family, at_field(-h));
    rep.mu_fci = -(ep - em) / (2.0 * h);
    rep.alpha_fci = -(ep - 2.0 * e0 + em) / (h * h);
    try {
        const double hp = family.hartree_fock_energy(at_field(h));
        const double hm = family.hartree_fock_energy(at_field(-h));
        const double h0 = family.hartree_fock_energy(eta0);
        rep.mu_hf = -(hp - hm) / (2.0 * h);
        rep.alpha_hf = -(hp - 2.0 * h0 + hm) / (h * h);
    } catch (const RestrictedShellError &) {
        rep.mu_hf = rep.alpha_hf = kNaN;
    }
    return rep;
}

std::vector<ResponseReport> response_scan(const chem::Molecule &mol,
                                          const std::vector<double> &grid,
                                          const ResponseOptions &options,
                                          const EngineSettings &settings) {
    if (mol.size() < 2) {
        throw ArgumentError("a scan needs at least one bond");
    }
    const deriv::HamiltonianFamily family(mol, bond_parameters(mol), settings.family);
    std::vector<ResponseReport> out(grid.size());
    parallel_for(grid.size(), settings.threads, [&](std::size_t k) {
        try {
            std::vector<double> eta = family.base();
            eta[0] = grid[k];
            out[k] = response_properties(family.molecule(eta), options, settings);
            out[k].r = grid[k];
        } catch (const Error &e) {
            out[k] = ResponseReport{};
            out[k].r = grid[k];
            out[k].error = e.what();
        }
    });
    return out;
}

// ---------------------------------------------------------------------------------------------

SaddleTest second_derivative_test(const SurfacePoint &point, const std::vector<double> &m1,
                                  const std::vector<double> &m2, double ctol) {
    const std::size_t n = point.gradient.size();
    if (m1.size() != n || m2.size() != n || point.hessian.size() != n) {
        throw ArgumentError("mode length does not match the coordinates");
    }
    const double g = norm2(point.gradient);
    if (!(g < ctol)) {
        throw NotExtremumError("gradient norm " + std::to_string(g) + " is not below " +
                               std::to_string(ctol));
    }
    SaddleTest t;
    t.a = quadratic_form(point.hessian, m1, m1);
    t.b = quadratic_form(point.hessian, m2, m2);
    t.c = quadratic_form(point.hessian, m1, m2);
    t.discriminant = t.a * t.b - t.c * t.c;
    t.saddle = t.discriminant < 0.0;
    return t;
}

SurfacePoint surface_point(const deriv::HamiltonianFamily &family, const std::vector<double> &q,
                           const deriv::PreparedState &state, const EngineSettings &settings) {
    const std::size_t n = family.parameters().size();
    SurfacePoint p;
    p.gradient.assign(n, 0.0);
    p.hessian.assign(n, std::vector<double>(n, 0.0));
    const auto so = second_order_options(settings, deriv::kDefaultStep);
    for (std::size_t a = 0; a < n; ++a) {
        p.gradient[a] =
            deriv::first_order(family, q, state, a, deriv::kDefaultStep, settings.engine).value;
        for (std::size_t b = a; b < n; ++b) {
            p.hessian[a][b] = p.hessian[b][a] = deriv::second_order(family, q, state, a, b, so).value;
        }
    }
    return p;
}

void ReactionSpec::validate() const {
    if (reactants.size() != products.size()) {
        throw ArgumentError("reactants and products must have the same atom count");
    }
    if (reactants.size() < 2) {
        throw ArgumentError("a reaction needs at least one bond");
    }
    if (modes.empty()) {
        throw ArgumentError("at least one search mode is required");
    }
    const std::size_t n = reactants.size() - 1;
    for (const auto &m : modes) {
        if (m.size() != n || std::abs(norm2(m) - 1.0) > 1e-9) {
            throw ArgumentError("modes must be unit vectors over the bond lengths");
        }
    }
}

std::vector<std::vector<double>> default_triatomic_modes() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{s, s}, {s, -s}};
}

TransitionStateResult transition_state_search(const ReactionSpec &spec,
                                              const TransitionOptions &options,
                                              const EngineSettings &settings) {
    spec.validate();
    const auto qr = bond_lengths(spec.reactants);
    const auto qp = bond_lengths(spec.products);
    std::vector<double> guess(qr.size());
    for (std::size_t a = 0; a < qr.size(); ++a) guess[a] = 0.5 * (qr[a] + qp[a]);

    const chem::Molecule start = chem::hydrogen_chain(guess, spec.reactants.net_charge());
    const deriv::HamiltonianFamily family(start, bond_parameters(start), settings.family);

    TransitionStateResult result;
    for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
        const auto &m = spec.modes[mi];
        ModeSearch search;
        search.mode = m;
        search.trajectory.method = StepMethod::Hessian;
        for (const auto &p : family.parameters().entries()) search.trajectory.names.push_back(p.name);

        std::vector<double> q = guess;
        std::optional<std::vector<double>> warm;
        GroundState gs;
        SurfacePoint point;
        try {
            for (int it = 0; it < options.max_iterations; ++it) {
                gs = solve_ground(family, q, settings, warm);
                warm = gs.state.theta;
                point = surface_point(family, q, gs.state, settings);
                const double gm = dot(point.gradient, m);
                const double cm = quadratic_form(point.hessian, m, m);
                OptimizationStep step;
                step.q = q;
                step.energy = gs.energy;
                step.theta = gs.state.theta;
                step.gradient = point.gradient;
                step.curvature = {cm};
                // Newton step to the stationary point of the quadratic model along m.
                const double s = cm != 0.0 ? gm / cm : 0.0;
                step.delta.resize(q.size());
                for (std::size_t a = 0; a < q.size(); ++a) step.delta[a] = s * m[a];
                const bool done = std::abs(s) < options.ctol;
                search.trajectory.steps.push_back(step);
                if (done) {
                    search.trajectory.converged = true;
                    break;
                }
                for (std::size_t a = 0; a < q.size(); ++a) q[a] -= step.delta[a];
            }
            search.trajectory.final_q = q;
            search.trajectory.final_energy = gs.energy;
            if (search.trajectory.converged) {
                const auto &other = spec.modes.size() > 1 ? spec.modes[(mi + 1) % spec.modes.size()]
                                                          : default_triatomic_modes()[1];
                search.test = second_derivative_test(point, m, other, options.ctol);
            }
        } catch (const Error &e) {
            search.error = e.what();
        }
        const bool saddle = search.test && search.test->saddle;
        result.searches.push_back(std::move(search));
        if (saddle) {
            result.found = true;
            result.geometry = result.searches.back().trajectory.final_q;
            result.energy = result.searches.back().trajectory.final_energy;
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------------------------

std::vector<double> excited_default_grid() { return Grid{0.24, 1.54, 14}.values(); }

EngineSettings excited_settings() {
    EngineSettings s;
    s.family.taper = true;
    s.family.taper_scope = deriv::TaperScope::Parity;
    s.depth = 6;
    s.optimizer.energy_tolerance = 1e-9;
    return s;
}

std::vector<ExcitedRow> excited_derivative_curves(const chem::Molecule &mol,
                                                  const std::vector<double> &grid,
                                                  const ExcitedOptions &options,
                                                  const EngineSettings &settings) {
    if (mol.size() < 2) {
        throw ArgumentError("a scan needs at least one bond");
    }
    const deriv::HamiltonianFamily family(mol, bond_parameters(mol), settings.family);
    const double tol = settings.engine.kind == deriv::EngineKind::Exact
                           ? vqe::kExactParticleTolerance
                           : vqe::kSampledParticleTolerance;
    std::vector<std::vector<ExcitedRow>> per_point(grid.size());
    parallel_for(grid.size(), settings.threads, [&](std::size_t k) {
        std::vector<double> eta = family.base();
        eta[0] = grid[k];
        try {
            const ops::PauliSum h = family(eta);
            const deriv::PreparedState blank = blank_state(family, settings);
            const auto res = vqe::ssvqe_minimize(h, blank.ansatz, options.ssvqe, settings.optimizer);
            std::vector<sim::Statevector> states;
            for (const auto &s : res.states) states.push_back(sim::run(s.circuit, s.theta));
            const auto kept = vqe::particle_filter(states, family.number_operator(),
                                                   options.target_particles, tol);

            const ops::PauliSum n_op = family.number_operator();
            auto oracle = [&](double r) {
                auto e = eta;
                e[0] = r;
                return sector_spectrum(family(e), n_op, options.target_particles);
            };
            const auto e0 = oracle(grid[k]);
            const auto ep = oracle(grid[k] + options.oracle_step);
            const auto em = oracle(grid[k] - options.oracle_step);

            std::size_t rank = 0;
            for (const auto &f : kept) {
                const auto &s = res.states[f.index];
                ExcitedRow row;
                row.r = grid[k];
                row.state = rank++;
                row.initial_bits = s.initial_bits;
                row.particles = f.particles;
                row.energy = settings.engine.kind == deriv::EngineKind::Exact
                                 ? s.energy
                                 : observable(h, states[f.index], settings.engine, 10 + f.index);
                const deriv::PreparedState ps{sim::ParameterizedCircuit(h.n_qubits()), s.circuit,
                                              s.theta};
                row.derivative =
                    deriv::first_order(family, eta, ps, 0, deriv::kDefaultStep, settings.engine).value;
                std::size_t best = 0;
                for (std::size_t j = 1; j < e0.size(); ++j) {
                    if (std::abs(e0[j] - s.energy) < std::abs(e0[best] - s.energy)) best = j;
                }
                row.e_fci = e0[best];
                row.d_fci = (ep[best] - em[best]) / (2.0 * options.oracle_step);
                per_point[k].push_back(row);
            }
        } catch (const Error &e) {
            ExcitedRow row;
            row.r = grid[k];
            row.error = e.what();
            row.energy = row.derivative = row.e_fci = row.d_fci = kNaN;
            per_point[k].push_back(row);
        }
    });
    std::vector<ExcitedRow> out;
    for (auto &rows : per_point) {
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

} // namespace qderiv::apps
