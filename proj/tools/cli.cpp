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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qderiv/apps/applications.hpp"
#include "qderiv/chem/molecule.hpp"
#include "qderiv/errors.hpp"

namespace qderiv::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"scan",    "optimize", "response",
                                            "ts",      "excited",  "derivative"};

struct Outcome {
    Table table;
    json extra = json::object();
    std::string summary;
    bool ok = true;
    std::vector<std::string> warnings;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

double rounded(double v) {
    return std::isfinite(v) ? std::strtod(format_number(v).c_str(), nullptr) : v;
}

std::size_t thread_count() {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QDERIV_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw UsageError("QDERIV_THREADS must be a positive integer");
        }
        n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
    }
    return n;
}

chem::Molecule load_molecule(const std::string &path) {
    if (path.empty()) {
        throw UsageError("--molecule is required");
    }
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read molecule file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return chem::parse_xyz(buf.str());
    } catch (const Error &e) {
        throw UsageError("invalid molecule file '" + path + "': " + e.what());
    }
}

chem::Molecule reversed(const chem::Molecule &mol) {
    std::vector<chem::Atom> atoms(mol.atoms().rbegin(), mol.atoms().rend());
    return chem::Molecule(std::move(atoms), mol.net_charge());
}

std::vector<double> parse_grid(const std::string &text) {
    try {
        return apps::Grid::parse(text).values();
    } catch (const ArgumentError &e) {
        throw UsageError(e.what());
    }
}

std::vector<double> grid_values(const RunConfig &c, const std::string &fallback) {
    return parse_grid(c.grid.empty() ? fallback : c.grid);
}

apps::EngineSettings settings_for(const RunConfig &c, std::size_t threads) {
    apps::EngineSettings s = c.command == "excited" ? apps::excited_settings() : apps::EngineSettings{};
    s.family.encoding = ops::parse_encoding(c.mapping);
    if (c.command != "excited") {
        s.family.taper = c.taper;
    }
    if (c.depth > 0) {
        s.depth = c.depth;
    }
    s.tapered_ansatz = c.ansatz == "tapered";
    s.optimizer.seed = c.seed;
    s.engine.kind = c.engine == "sampled" ? deriv::EngineKind::Sampled : deriv::EngineKind::Exact;
    s.engine.shots = c.shots;
    s.engine.seed = c.seed;
    s.threads = threads;
    return s;
}

void validate(const RunConfig &c) {
    if (c.engine == "sampled" && c.shots == 0) {
        throw UsageError("--shots is required with --engine sampled");
    }
    if (c.engine == "exact" && c.shots != 0) {
        throw UsageError("--shots applies only to --engine sampled");
    }
    if (c.ansatz == "tapered" && !c.taper) {
        throw UsageError("--ansatz tapered requires --taper");
    }
    if (!c.theta_grid.empty() && c.command != "scan") {
        throw UsageError("--theta-grid applies only to scan");
    }
    if (c.order != 1 && c.order != 2) {
        throw UsageError("--order must be 1 or 2");
    }
    if (!(c.ctol > 0.0) || !(c.field_step > 0.0) || c.gamma < 0.0) {
        throw UsageError("--ctol and --field-step must be positive and --gamma non-negative");
    }
    try {
        (void)apps::parse_step_method(c.method);
    } catch (const ArgumentError &e) {
        throw UsageError(e.what());
    }
}

// Commands

Outcome run_scan(const RunConfig &c, const apps::EngineSettings &s) {
    const auto mol = load_molecule(c.molecule);
    const auto grid = grid_values(c, "0.2:1.5:27");
    Outcome o;
    if (!c.theta_grid.empty()) {
        const auto samples = apps::parameter_surface(mol, grid, parse_grid(c.theta_grid), s);
        o.table.columns = {"R_angstrom", "theta", "E"};
        for (const auto &x : samples) o.table.rows.push_back({x.r, x.theta, x.energy});
        o.summary = "scan: " + std::to_string(samples.size()) + " (R, theta) samples";
        return o;
    }
    const auto rows = apps::pes_scan(mol, grid, s);
    o.table.columns = {"R_angstrom", "E_vqe", "E_fci", "E_hf", "abs_error"};
    double worst = 0.0;
    for (const auto &r : rows) {
        o.table.rows.push_back({r.r, r.e_vqe, r.e_fci, r.e_hf, r.abs_error});
        if (!r.error.empty()) {
            o.ok = false;
            o.warnings.push_back("R = " + format_number(r.r) + ": " + r.error);
        } else {
            worst = std::max(worst, r.abs_error);
            if (!r.converged) {
                o.ok = false;
                o.warnings.push_back("R = " + format_number(r.r) + ": VQE did not converge");
            }
        }
    }
    o.extra["max_abs_error"] = rounded(worst);
    o.summary = "scan: " + std::to_string(rows.size()) +
                " points, max |E_vqe - E_fci| = " + sci(worst) + " Ha";
    return o;
}

Outcome run_optimize(const RunConfig &c, const apps::EngineSettings &s) {
    const auto mol = load_molecule(c.molecule);
    apps::GeometryOptions g;
    g.method = apps::parse_step_method(c.method);
    g.gamma = c.gamma;
    g.ctol = c.ctol;
    const auto traj = apps::geometry_optimize(mol, g, s);
    Outcome o;
    const bool hessian = traj.method == apps::StepMethod::Hessian;
    const std::size_t n_theta = traj.steps.empty() ? 0 : traj.steps.front().theta.size();
    o.table.columns = {"iteration"};
    for (const auto &n : traj.names) o.table.columns.push_back(n + "_angstrom");
    o.table.columns.push_back("E_vqe");
    for (const auto &n : traj.names) o.table.columns.push_back("dE_d" + n);
    if (hessian) {
        for (const auto &n : traj.names) o.table.columns.push_back("d2E_d" + n + "2");
    }
    for (const auto &n : traj.names) o.table.columns.push_back("delta_" + n);
    o.table.columns.push_back("fallback");
    for (std::size_t k = 0; k < n_theta; ++k) o.table.columns.push_back("theta_" + std::to_string(k));
    for (std::size_t it = 0; it < traj.steps.size(); ++it) {
        const auto &st = traj.steps[it];
        std::vector<Cell> row{static_cast<long long>(it)};
        for (double q : st.q) row.emplace_back(q);
        row.emplace_back(st.energy);
        for (double v : st.gradient) row.emplace_back(v);
        if (hessian) {
            for (double v : st.curvature) row.emplace_back(v);
        }
        for (double v : st.delta) row.emplace_back(v);
        row.emplace_back(static_cast<long long>(st.fallback ? 1 : 0));
        for (double t : st.theta) row.emplace_back(t);
        o.table.rows.push_back(std::move(row));
    }
    o.ok = traj.converged;
    o.warnings = traj.warnings;
    std::string geom;
    for (std::size_t a = 0; a < traj.names.size(); ++a) {
        geom += (a ? ", " : "") + traj.names[a] + " = " + fixed(traj.final_q[a], 3) + " A";
    }
    o.extra["method"] = apps::to_string(traj.method);
    o.extra["gamma"] = g.resolved_gamma();
    o.extra["converged"] = traj.converged;
    o.extra["iterations"] = traj.steps.size();
    json q = json::array();
    for (double v : traj.final_q) q.push_back(rounded(v));
    o.extra["final_geometry_angstrom"] = q;
    o.extra["final_energy"] = rounded(traj.final_energy);
    o.summary = "optimize (" + apps::to_string(traj.method) + "): " +
                (traj.converged ? "converged" : "not converged") + " after " +
                std::to_string(traj.steps.size()) + " iterations, " + geom +
                ", E = " + fixed(traj.final_energy, 3) + " Ha";
    return o;
}

Outcome run_response(const RunConfig &c, const apps::EngineSettings &s) {
    const auto mol = load_molecule(c.molecule);
    const auto grid = grid_values(c, "0.2:1.5:14");
    apps::ResponseOptions r;
    r.field_step = c.field_step;
    const auto rows = apps::response_scan(mol, grid, r, s);
    Outcome o;
    o.table.columns = {"R_angstrom",  "E_vqe",       "mu_electronic", "mu_operator",
                       "mu_nuclear",  "mu_net",      "alpha_energy",  "alpha_dipole",
                       "mu_fci",      "alpha_fci",   "mu_hf",         "alpha_hf",
                       "field_step"};
    double mu = 0.0;
    double alpha = 0.0;
    for (const auto &x : rows) {
        o.table.rows.push_back({x.r, x.energy, x.mu_electronic, x.mu_operator, x.mu_nuclear,
                                x.mu_net, x.alpha_energy, x.alpha_dipole, x.mu_fci, x.alpha_fci,
                                x.mu_hf, x.alpha_hf, x.field_step});
        for (const auto &w : x.warnings) o.warnings.push_back("R = " + format_number(x.r) + ": " + w);
        if (!x.error.empty()) {
            o.ok = false;
            o.warnings.push_back("R = " + format_number(x.r) + ": " + x.error);
            continue;
        }
        if (!x.converged) o.ok = false;
        mu = std::max(mu, std::abs(x.mu_net));
        alpha = std::max(alpha, std::abs(x.alpha_energy - x.alpha_dipole));
    }
    o.extra["max_abs_mu_net"] = rounded(mu);
    o.extra["max_alpha_difference"] = rounded(alpha);
    o.summary = "response: " + std::to_string(rows.size()) + " points, max |mu_net| = " + sci(mu) +
                " au, max |alpha_energy - alpha_dipole| = " + sci(alpha) + " au";
    return o;
}

Outcome run_ts(const RunConfig &c, const apps::EngineSettings &s) {
    const auto reactants = load_molecule(c.molecule);
    const auto products = c.products.empty() ? reversed(reactants) : load_molecule(c.products);
    if (reactants.size() != 3) {
        throw UsageError("ts expects a three-atom chain");
    }
    apps::ReactionSpec spec{reactants, products, apps::default_triatomic_modes(), true};
    apps::TransitionOptions t;
    t.ctol = c.ctol;
    const auto res = apps::transition_state_search(spec, t, s);
    Outcome o;
    const auto &names = res.searches.empty() ? std::vector<std::string>{}
                                             : res.searches.front().trajectory.names;
    o.table.columns = {"mode", "iteration"};
    for (const auto &n : names) o.table.columns.push_back(n + "_angstrom");
    o.table.columns.push_back("E_vqe");
    for (const auto &n : names) o.table.columns.push_back("dE_d" + n);
    o.table.columns.push_back("d2E_dm2");
    o.table.columns.push_back("step");
    json tests = json::array();
    for (std::size_t m = 0; m < res.searches.size(); ++m) {
        const auto &search = res.searches[m];
        for (std::size_t it = 0; it < search.trajectory.steps.size(); ++it) {
            const auto &st = search.trajectory.steps[it];
            std::vector<Cell> row{static_cast<long long>(m), static_cast<long long>(it)};
            for (double q : st.q) row.emplace_back(q);
            row.emplace_back(st.energy);
            for (double v : st.gradient) row.emplace_back(v);
            row.emplace_back(st.curvature.empty() ? std::nan("") : st.curvature.front());
            double step = 0.0;
            for (std::size_t a = 0; a < st.delta.size(); ++a) step += st.delta[a] * search.mode[a];
            row.emplace_back(step);
            o.table.rows.push_back(std::move(row));
        }
        json entry;
        json mode = json::array();
        for (double v : search.mode) mode.push_back(rounded(v));
        entry["mode"] = mode;
        entry["iterations"] = search.trajectory.steps.size();
        entry["converged"] = search.trajectory.converged;
        if (search.test) {
            entry["a"] = rounded(search.test->a);
            entry["b"] = rounded(search.test->b);
            entry["c"] = rounded(search.test->c);
            entry["discriminant"] = rounded(search.test->discriminant);
            entry["saddle"] = search.test->saddle;
        }
        if (!search.error.empty()) {
            entry["error"] = search.error;
            o.warnings.push_back("mode " + std::to_string(m) + ": " + search.error);
        }
        tests.push_back(entry);
    }
    o.extra["searches"] = tests;
    o.extra["found"] = res.found;
    o.ok = res.found;
    if (res.found) {
        json q = json::array();
        for (double v : res.geometry) q.push_back(rounded(v));
        o.extra["geometry_angstrom"] = q;
        o.extra["energy"] = rounded(res.energy);
        std::string geom;
        for (std::size_t a = 0; a < res.geometry.size(); ++a) {
            geom += (a ? ", " : "") + names[a] + " = " + fixed(res.geometry[a], 3) + " A";
        }
        const auto &test = *res.searches.back().test;
        o.summary = "ts: saddle at " + geom + ", E = " + fixed(res.energy, 6) +
                    " Ha, discriminant = " + fixed(test.discriminant, 4) + " after " +
                    std::to_string(res.searches.back().trajectory.steps.size()) + " iterations";
    } else {
        o.summary = "ts: no saddle found over " + std::to_string(res.searches.size()) + " modes";
    }
    return o;
}

Outcome run_excited(const RunConfig &c, const apps::EngineSettings &s) {
    const auto mol = load_molecule(c.molecule);
    const auto grid = grid_values(c, "0.24:1.54:14");
    apps::ExcitedOptions e;
    e.ssvqe.k = static_cast<std::size_t>(c.states);
    e.ssvqe.repeats = c.repeats;
    e.target_particles = mol.electron_count();
    const auto rows = apps::excited_derivative_curves(mol, grid, e, s);
    Outcome o;
    o.table.columns = {"R_angstrom", "state",     "initial_bits", "particles",
                       "E_vqe",      "dE_dR",     "E_fci",        "dE_dR_fci",
                       "abs_error",  "abs_derivative_error"};
    double worst_e = 0.0;
    double worst_d = 0.0;
    std::size_t states = 0;
    for (const auto &r : rows) {
        if (!r.error.empty()) {
            o.ok = false;
            o.warnings.push_back("R = " + format_number(r.r) + ": " + r.error);
            continue;
        }
        const double de = std::abs(r.energy - r.e_fci);
        const double dd = std::abs(r.derivative - r.d_fci);
        worst_e = std::max(worst_e, de);
        worst_d = std::max(worst_d, dd);
        ++states;
        o.table.rows.push_back({r.r, static_cast<long long>(r.state),
                                static_cast<long long>(r.initial_bits), r.particles, r.energy,
                                r.derivative, r.e_fci, r.d_fci, de, dd});
    }
    o.extra["max_abs_error"] = rounded(worst_e);
    o.extra["max_abs_derivative_error"] = rounded(worst_d);
    o.summary = "excited: " + std::to_string(grid.size()) + " points, " + std::to_string(states) +
                " filtered states, max |E - E_fci| = " + sci(worst_e) +
                " Ha, max |dE/dR - FD| = " + sci(worst_d) + " Ha/A";
    return o;
}

Outcome run_derivative(const RunConfig &c, const apps::EngineSettings &s) {
    const auto mol = load_molecule(c.molecule);
    const auto rep = apps::derivative_report(mol, c.field, c.order, s);
    Outcome o;
    o.table.columns = {"parameter", "units", "dE"};
    for (const auto &n : rep.names) {
        if (c.order == 2) o.table.columns.push_back("d2E_d" + n);
    }
    for (std::size_t a = 0; a < rep.names.size(); ++a) {
        std::vector<Cell> row{rep.names[a], "Ha/" + rep.units[a], rep.first[a]};
        if (c.order == 2) {
            for (double v : rep.second[a]) row.emplace_back(v);
        }
        o.table.rows.push_back(std::move(row));
    }
    o.warnings = rep.warnings;
    o.extra["energy"] = rounded(rep.energy);
    for (const auto &[k, v] : rep.metadata) o.extra[k] = v;
    std::string parts;
    for (std::size_t a = 0; a < rep.names.size(); ++a) {
        parts += ", dE/d" + rep.names[a] + " = " + fixed(rep.first[a], 6) + " Ha/" + rep.units[a];
    }
    o.summary = "derivative: E = " + fixed(rep.energy, 6) + " Ha" + parts;
    return o;
}

std::string csv_cell(const Cell &cell) {
    if (const auto *d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto *i = std::get_if<long long>(&cell)) return std::to_string(*i);
    const auto &s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

} // namespace

json RunConfig::to_json() const {
    return json{{"command", command},     {"molecule", molecule}, {"products", products},
                {"grid", grid},           {"theta_grid", theta_grid},
                {"mapping", mapping},     {"taper", taper},
                {"ansatz", ansatz},       {"depth", depth},       {"engine", engine},
                {"shots", shots},         {"seed", seed},         {"method", method},
                {"gamma", gamma},         {"ctol", ctol},         {"field_step", field_step},
                {"states", states},       {"repeats", repeats},   {"order", order},
                {"field", field},         {"format", format}};
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string to_csv(const Table &t) {
    std::string out;
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
        out += (k ? "," : "") + t.columns[k];
    }
    out += '\n';
    for (const auto &row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out += (k ? "," : "") + csv_cell(row[k]);
        }
        out += '\n';
    }
    return out;
}

json table_to_json(const Table &t, const json &metadata) {
    json rows = json::array();
    for (const auto &row : t.rows) {
        json r = json::object();
        for (std::size_t k = 0; k < row.size() && k < t.columns.size(); ++k) {
            const auto &cell = row[k];
            if (const auto *d = std::get_if<double>(&cell)) {
                r[t.columns[k]] = std::isfinite(*d) ? json(rounded(*d)) : json(nullptr);
            } else if (const auto *i = std::get_if<long long>(&cell)) {
                r[t.columns[k]] = *i;
            } else {
                r[t.columns[k]] = std::get<std::string>(cell);
            }
        }
        rows.push_back(std::move(r));
    }
    return json{{"metadata", metadata}, {"columns", t.columns}, {"rows", rows}};
}

Table table_from_json(const json &j) {
    Table t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto &r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto &c : t.columns) {
            const auto &v = r.at(c);
            if (v.is_null()) {
                row.emplace_back(std::nan(""));
            } else if (v.is_number_integer()) {
                row.emplace_back(v.get<long long>());
            } else if (v.is_number()) {
                row.emplace_back(v.get<double>());
            } else {
                row.emplace_back(v.get<std::string>());
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

int execute(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    RunConfig c;
    CLI::App app{"Energy derivatives from statevector-simulated VQE", "qderiv"};
    app.set_config("--config", "", "Plain-text key=value file; command-line flags take precedence");
    app.add_option("command", c.command, "scan | optimize | response | ts | excited | derivative")
        ->required()
        ->check(CLI::IsMember(kCommands));
    app.add_option("--molecule", c.molecule, "XYZ file (reactants for ts)");
    app.add_option("--products", c.products, "XYZ file of the ts products");
    app.add_option("--grid", c.grid, "Bond-length grid START:STOP:POINTS in Angstrom");
    app.add_option("--theta-grid", c.theta_grid,
                   "scan: sample E(R, theta) of the one-parameter ansatz over A:B:N radians");
    app.add_option("--mapping", c.mapping, "Fermion-to-qubit encoding")
        ->check(CLI::IsMember({"jw", "bk"}));
    app.add_flag("--taper", c.taper, "Remove Z2-symmetric qubits");
    app.add_option("--ansatz", c.ansatz, "hea or the single-parameter tapered circuit")
        ->check(CLI::IsMember({"hea", "tapered"}));
    app.add_option("--depth", c.depth, "Hardware-efficient ansatz depth D")
        ->check(CLI::PositiveNumber);
    app.add_option("--engine", c.engine, "Expectation engine")
        ->check(CLI::IsMember({"exact", "sampled"}));
    app.add_option("--shots", c.shots, "Shots per Pauli term for the sampled engine");
    app.add_option("--seed", c.seed, "Seed for parameter initialization and sampling");
    app.add_option("--method", c.method, "Geometry step rule")
        ->check(CLI::IsMember({"gradient", "hessian"}));
    app.add_option("--gamma", c.gamma, "Geometry learning rate (0: method default)");
    app.add_option("--ctol", c.ctol, "Convergence threshold on the step norm");
    app.add_option("--field-step", c.field_step, "Finite-difference field step, au");
    app.add_option("--states", c.states, "SS-VQE state count for excited")
        ->check(CLI::PositiveNumber);
    app.add_option("--repeats", c.repeats, "SS-VQE restarts for excited")
        ->check(CLI::PositiveNumber);
    app.add_option("--order", c.order, "Derivative order for derivative (1 or 2)");
    app.add_flag("--field", c.field, "Include the z field parameter in derivative");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    Outcome o;
    try {
        validate(c);
        const apps::EngineSettings s = settings_for(c, thread_count());
        if (c.command == "scan") o = run_scan(c, s);
        else if (c.command == "optimize") o = run_optimize(c, s);
        else if (c.command == "response") o = run_response(c, s);
        else if (c.command == "ts") o = run_ts(c, s);
        else if (c.command == "excited") o = run_excited(c, s);
        else o = run_derivative(c, s);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }

    for (const auto &w : o.warnings) err << "warning: " << w << '\n';
    if (!c.out.empty()) {
        json meta{{"tool", "qderiv"}, {"version", kToolVersion}, {"seed", c.seed},
                  {"config", c.to_json()}, {"results", o.extra}};
        std::ofstream f(c.out, std::ios::binary);
        if (f) {
            if (c.format == "json") {
                f << table_to_json(o.table, meta).dump(2) << '\n';
            } else {
                f << to_csv(o.table);
            }
        }
        if (!f) {
            err << "error: cannot write '" << c.out << "'\n";
            return kFailure;
        }
    }
    out << o.summary << '\n';
    return o.ok ? kSuccess : kFailure;
}

} // namespace qderiv::cli
