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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qderiv/apps/applications.hpp"
#include "qderiv/chem/molecule.hpp"
#include "qderiv/deriv/derivatives.hpp"
#include "qderiv/ops/dense.hpp"
#include "qderiv/ops/encoding.hpp"
#include "qderiv/sim/circuit.hpp"
#include "qderiv/vqe/vqe.hpp"

using namespace qderiv;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("missed: ") + what;
        }
    }
    void note(const std::string &text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::size_t threads() { return std::max(1U, std::thread::hardware_concurrency()); }

apps::EngineSettings exact_settings() {
    apps::EngineSettings s;
    s.threads = threads();
    return s;
}

deriv::HamiltonianFamily chain_family(const std::vector<double> &q,
                                      deriv::FamilyOptions o = {}) {
    const auto mol = chem::hydrogen_chain(q);
    return deriv::HamiltonianFamily(mol, deriv::chain_parameters(mol, false), o);
}

Outcome pes_accuracy() {
    Outcome o;
    const auto grid = apps::Grid{0.2, 1.5, 27}.values();
    const auto rows = apps::pes_scan(chem::hydrogen_chain({0.74}), grid, exact_settings());
    double worst = 0.0;
    bool clean = rows.size() == 27;
    for (const auto &r : rows) {
        clean = clean && r.error.empty() && r.converged;
        worst = std::max(worst, std::isfinite(r.abs_error) ? r.abs_error : 1e9);
    }
    o.require(clean, "27 converged points");
    o.require(worst < 1.6e-3, "max |E_vqe - E_fci| < 1.6 mHa");
    o.note("max |E_vqe - E_fci| = " + fmt("%.2e", worst) + " Ha");
    return o;
}

Outcome equilibrium_geometry() {
    Outcome o;
    auto s = exact_settings();
    s.family.taper = true;
    s.tapered_ansatz = true;
    const auto start = chem::hydrogen_chain({0.2});
    apps::GeometryOptions g;
    g.method = apps::StepMethod::Gradient;
    const auto grad = apps::geometry_optimize(start, g, s);
    g.method = apps::StepMethod::Hessian;
    const auto hess = apps::geometry_optimize(start, g, s);
    o.require(grad.converged, "gradient mode converged");
    o.require(hess.converged, "hessian mode converged");
    o.require(std::abs(grad.final_q[0] - 0.741) <= 0.005, "gradient R = 0.741 +- 0.005 A");
    o.require(std::abs(grad.final_energy + 1.137) <= 0.001, "gradient E = -1.137 +- 0.001 Ha");
    o.require(std::abs(hess.final_q[0] - 0.740) <= 0.005, "hessian R = 0.740 +- 0.005 A");
    o.require(std::abs(hess.final_energy + 1.137) <= 0.001, "hessian E = -1.137 +- 0.001 Ha");
    o.require(hess.steps.size() <= grad.steps.size(), "hessian iterations <= gradient iterations");
    o.note("gradient R = " + fmt("%.5f", grad.final_q[0]) + " A, E = " +
           fmt("%.6f", grad.final_energy) + " Ha, " + std::to_string(grad.steps.size()) +
           " iterations");
    o.note("hessian R = " + fmt("%.5f", hess.final_q[0]) + " A, E = " +
           fmt("%.6f", hess.final_energy) + " Ha, " + std::to_string(hess.steps.size()) +
           " iterations");
    return o;
}

Outcome response_properties() {
    Outcome o;
    const auto grid = apps::Grid{0.2, 1.5, 14}.values();
    const auto rows =
        apps::response_scan(chem::hydrogen_chain({0.74}), grid, {}, exact_settings());
    double mu_net = 0.0;
    double alpha = 0.0;
    double mu = 0.0;
    bool clean = rows.size() == 14;
    for (const auto &r : rows) {
        clean = clean && r.error.empty();
        mu_net = std::max(mu_net, std::abs(r.mu_net));
        alpha = std::max(alpha, std::abs(r.alpha_energy - r.alpha_dipole));
        mu = std::max(mu, std::abs(r.mu_electronic - r.mu_operator));
    }
    o.require(clean, "14 points without errors");
    o.require(mu_net < 1e-6, "|mu_net| < 1e-6 au");
    o.require(alpha < 1e-3, "|alpha_E - alpha_mu| < 1e-3 au");
    o.require(mu < 1e-6, "|mu_E - <mu>| < 1e-6 au");
    o.note("max |mu_net| = " + fmt("%.1e", mu_net) + ", max |alpha_E - alpha_mu| = " +
           fmt("%.1e", alpha) + ", max |mu_E - <mu>| = " + fmt("%.1e", mu));
    return o;
}

Outcome transition_state() {
    Outcome o;
    const apps::ReactionSpec spec{chem::hydrogen_chain({0.74, 1.5}),
                                  chem::hydrogen_chain({1.5, 0.74}),
                                  apps::default_triatomic_modes(), true};
    const auto res = apps::transition_state_search(spec, {}, exact_settings());
    o.require(res.found, "saddle point found");
    if (!res.found) return o;
    const apps::ModeSearch *hit = nullptr;
    for (const auto &m : res.searches) {
        if (m.test && m.test->saddle) {
            hit = &m;
            break;
        }
    }
    o.require(hit != nullptr, "second-derivative test reported");
    if (hit == nullptr) return o;
    o.require(std::abs(res.geometry[0] - 0.936) <= 0.01 && std::abs(res.geometry[1] - 0.936) <= 0.01,
              "(R1, R2) = (0.936, 0.936) +- 0.01 A");
    o.require(hit->test->discriminant < 0.0, "discriminant < 0");
    o.require(hit->trajectory.steps.size() <= 10, "<= 10 geometry iterations");
    o.note("(R1, R2) = (" + fmt("%.5f", res.geometry[0]) + ", " + fmt("%.5f", res.geometry[1]) +
           ") A, E = " + fmt("%.6f", res.energy) + " Ha, discriminant = " +
           fmt("%.4f", hit->test->discriminant) + ", " +
           std::to_string(hit->trajectory.steps.size()) + " iterations");
    return o;
}

Outcome excited_derivatives() {
    Outcome o;
    const auto grid = apps::excited_default_grid();
    auto s = apps::excited_settings();
    s.threads = threads();
    const auto mol = chem::hydrogen_chain({0.74});
    const auto rows = apps::excited_derivative_curves(mol, grid, {}, s);
    const auto fam = chain_family({0.74});
    std::map<double, int> per_point;
    double e_err = 0.0;
    double d_err = 0.0;
    bool clean = grid.size() == 14;
    bool grounds = true;
    for (const auto &r : rows) {
        clean = clean && r.error.empty();
        ++per_point[r.r];
        e_err = std::max(e_err, std::abs(r.energy - r.e_fci));
        d_err = std::max(d_err, std::abs(r.derivative - r.d_fci));
        if (r.state == 0) {
            const double ground =
                apps::sector_spectrum(fam({r.r}), fam.number_operator(), 2).front();
            grounds = grounds && std::abs(r.e_fci - ground) < 1e-8;
        }
    }
    std::size_t fewest = rows.empty() ? 0 : SIZE_MAX;
    for (double r : grid) fewest = std::min<std::size_t>(fewest, per_point[r]);
    o.require(clean, "14 points without errors");
    o.require(fewest >= 3, "ground plus >= 2 excited <N> = 2 states per point");
    o.require(grounds, "state 0 is the N = 2 ground state");
    o.require(e_err < 5e-3, "|E - E_fci| < 5 mHa");
    o.require(d_err < 1e-3, "|dE/dR - FD| < 1e-3 Ha/A");
    o.note(std::to_string(rows.size()) + " states, at least " + std::to_string(fewest) +
           " per point, max |E - E_fci| = " + fmt("%.1e", e_err) + ", max |dE/dR - FD| = " +
           fmt("%.1e", d_err));
    return o;
}

double spectrum_distance(const ops::PauliSum &a, const ops::PauliSum &b) {
    const auto sa = ops::spectrum(a);
    const auto sb = ops::spectrum(b);
    if (sa.size() != sb.size()) return INFINITY;
    return (sa - sb).cwiseAbs().maxCoeff();
}

Outcome property_suite() {
    Outcome o;
    const auto h2 = chain_family({0.74});
    const auto h = h2(h2.base());

    const auto base = static_cast<double>(deriv::cost_estimate(h, 1, 1e-2, 1));
    const double eps_ratio = static_cast<double>(deriv::cost_estimate(h, 1, 5e-3, 1)) / base;
    const double lin = static_cast<double>(deriv::cost_estimate(h, 3, 1e-2, 1)) / base;
    const double quad = static_cast<double>(deriv::cost_estimate(h, 3, 1e-2, 2)) / base;
    o.require(std::abs(eps_ratio - 4.0) < 1e-6 && std::abs(lin - 3.0) < 1e-6 &&
                  std::abs(quad - 9.0) < 1e-6,
              "cost scalings 1/eps^2, N_eta, N_eta^2");

    auto circ = h2.reference_circuit();
    circ.append(sim::hea_ansatz(4, 2));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> theta(circ.slot_count());
    for (auto &t : theta) t = u(rng);
    const auto psi = sim::run(circ, theta);
    const double exact = sim::expectation(h, psi);
    bool within = true;
    std::vector<double> rms;
    for (std::size_t shots : {1000U, 100000U}) {
        double sq = 0.0;
        const int trials = 20;
        for (int k = 0; k < trials; ++k) {
            const auto est = sim::sampled_estimate(h, psi, shots, static_cast<std::uint64_t>(k));
            within = within && std::abs(est.value - exact) < 5.0 * est.standard_error + 1e-12;
            sq += (est.value - exact) * (est.value - exact);
        }
        rms.push_back(std::sqrt(sq / trials));
    }
    o.require(within && rms[1] < rms[0] / 3.0, "sampled estimates converge");

    const vqe::EnergyFunction f(h, circ);
    const auto ps = vqe::parameter_shift_gradient(f, theta);
    double ps_err = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        auto tp = theta;
        auto tm = theta;
        tp[j] += 1e-5;
        tm[j] -= 1e-5;
        ps_err = std::max(ps_err, std::abs(ps[j] - (f(tp) - f(tm)) / 2e-5));
    }
    o.require(ps_err < 1e-6, "parameter shift vs FD < 1e-6");

    const auto s = exact_settings();
    double hf_err = 0.0;
    for (double r : {0.5, 0.74, 1.3}) {
        const auto fam = chain_family({r});
        const auto g = apps::solve_ground(fam, {r}, s);
        const double d = deriv::first_order(fam, {r}, g.state, 0).value;
        const double step = 1e-3;
        const auto up = apps::solve_ground(fam, {r + step}, s, g.state.theta);
        const auto down = apps::solve_ground(fam, {r - step}, s, g.state.theta);
        hf_err = std::max(hf_err, std::abs(d - (up.energy - down.energy) / (2.0 * step)));
    }
    o.require(hf_err < 1e-4, "Hellmann-Feynman vs re-optimized FD < 1e-4 Ha/A");

    double iso = 0.0;
    double taper = 0.0;
    double comm = 0.0;
    for (const auto &q : std::vector<std::vector<double>>{{0.5}, {0.74}, {1.3}, {0.9, 1.1}}) {
        deriv::FamilyOptions jw_opts;
        jw_opts.encoding = ops::Encoding::JordanWigner;
        const auto jw = chain_family(q, jw_opts);
        const auto bk = chain_family(q);
        const auto hj = jw(jw.base());
        const auto hb = bk(bk.base());
        iso = std::max(iso, spectrum_distance(hj, hb));
        for (const auto *fam : {&jw, &bk}) {
            const auto hh = (*fam)(fam->base());
            const auto n = fam->number_operator();
            comm = std::max(comm, (hh * n - n * hh).l1_norm());
        }
        if (q.size() == 1) {
            deriv::FamilyOptions t;
            t.taper = true;
            const auto tapered = chain_family(q, t);
            taper = std::max(taper, std::abs(ops::ground_energy(tapered(tapered.base())) -
                                             ops::ground_energy(hb)));
        }
    }
    o.require(iso < 1e-10, "JW/BK isospectral < 1e-10");
    o.require(taper < 1e-10, "tapering preserves the ground energy < 1e-10");
    o.require(comm < 1e-10, "[H, N] = 0 < 1e-10");
    o.note("PS-FD " + fmt("%.1e", ps_err) + ", HF-FD " + fmt("%.1e", hf_err) + ", JW/BK " +
           fmt("%.1e", iso) + ", taper " + fmt("%.1e", taper) + ", [H,N] " + fmt("%.1e", comm) +
           ", sampled RMS " + fmt("%.1e", rms[0]) + " -> " + fmt("%.1e", rms[1]));
    return o;
}

struct Criterion {
    int id;
    const char *name;
    double budget_s; // 0: none
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "PES accuracy", 120.0, pes_accuracy},
        {2, "equilibrium geometry", 120.0, equilibrium_geometry},
        {3, "response properties", 120.0, response_properties},
        {4, "transition state", 180.0, transition_state},
        {5, "excited-state derivatives", 180.0, excited_derivatives},
        {6, "property suite", 0.0, property_suite},
    };
    int failed = 0;
    const auto suite_start = std::chrono::steady_clock::now();
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.note(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0) {
            o.require(secs < c.budget_s, "runtime < " + fmt("%.0f", c.budget_s) + " s");
        }
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
    std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed,
                criteria.size(), total);
    return failed == 0 ? 0 : 1;
}
