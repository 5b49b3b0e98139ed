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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using qderiv::cli::execute;

namespace {

const std::string kData = QDERIV_DATA_DIR;

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qderiv");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = execute(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "qderiv_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"scan"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/missing.xyz"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--mapping", "parity"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--engine", "sampled"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--shots", "100"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--ansatz", "tapered"}).code == 2);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--grid", "1.5:0.2:3"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("--molecule") != std::string::npos);
}

TEST_CASE("format_number keeps twelve significant digits") {
    CHECK(qderiv::cli::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(qderiv::cli::format_number(-1.1372838344885) == "-1.13728383449");
    CHECK(qderiv::cli::format_number(0.5) == "0.5");
    CHECK(qderiv::cli::format_number(std::nan("")) == "nan");
    CHECK(qderiv::cli::format_number(-INFINITY) == "-inf");
}

TEST_CASE("scan writes the default 27-point table") {
    const auto path = scratch("scan.csv");
    const auto r = run({"scan", "--molecule", kData + "/h2.xyz", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("scan") != std::string::npos);
    const auto l = lines(slurp(path));
    REQUIRE(l.size() == 28);
    CHECK(l.front() == "R_angstrom,E_vqe,E_fci,E_hf,abs_error");
    CHECK(l[1].rfind("0.2,", 0) == 0);
    CHECK(l.back().rfind("1.5,", 0) == 0);
    for (std::size_t k = 1; k < l.size(); ++k) {
        const double err = std::stod(l[k].substr(l[k].rfind(',') + 1));
        CHECK(err < 1.6e-3);
    }
}

TEST_CASE("identical configurations give byte-identical output") {
    const auto a = scratch("a.csv");
    const auto b = scratch("b.csv");
    const std::vector<std::string> base{"scan", "--molecule", kData + "/h2.xyz", "--grid",
                                        "0.5:1.0:3", "--seed", "7", "--out"};
    auto ra = base;
    ra.push_back(a.string());
    auto rb = base;
    rb.push_back(b.string());
    REQUIRE(run(ra).code == 0);
    REQUIRE(run(rb).code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("json output round-trips through the table reader") {
    const auto path = scratch("scan.json");
    const auto r = run({"scan", "--molecule", kData + "/h2.xyz", "--grid", "0.6:0.9:4", "--format",
                        "json", "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j.at("metadata").at("tool") == "qderiv");
    CHECK(j.at("metadata").at("version") == qderiv::cli::kToolVersion);
    CHECK(j.at("metadata").at("config").at("grid") == "0.6:0.9:4");
    const auto t = qderiv::cli::table_from_json(j);
    CHECK(t.rows.size() == 4);
    CHECK(t.columns.front() == "R_angstrom");
    CHECK(qderiv::cli::table_to_json(t, j.at("metadata")) == j);
}

TEST_CASE("command-line flags override the config file") {
    const auto cfg = scratch("run.cfg");
    const auto path = scratch("cfg.csv");
    {
        std::ofstream f(cfg);
        f << "molecule=" << kData << "/h2.xyz\n";
        f << "grid=0.5:1.0:6\n";
        f << "out=" << path.string() << '\n';
    }
    REQUIRE(run({"scan", "--config", cfg.string()}).code == 0);
    CHECK(lines(slurp(path)).size() == 7);
    REQUIRE(run({"scan", "--config", cfg.string(), "--grid", "0.5:1.0:3"}).code == 0);
    CHECK(lines(slurp(path)).size() == 4);
}

TEST_CASE("derivative reports geometry and field derivatives") {
    const auto path = scratch("d.csv");
    const auto r = run({"derivative", "--molecule", kData + "/h2.xyz", "--field", "--order", "2",
                        "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto l = lines(slurp(path));
    REQUIRE(l.size() == 3);
    CHECK(l[0].rfind("parameter,units,dE,", 0) == 0);
    CHECK(l[1].rfind("R1,Ha/angstrom,", 0) == 0);
    CHECK(l[2].rfind("Fz,Ha/au,", 0) == 0);
    CHECK(run({"derivative", "--molecule", kData + "/h2.xyz", "--order", "3"}).code == 2);
}

TEST_CASE("scan samples the one-parameter energy surface") {
    const auto path = scratch("surface.csv");
    const auto r = run({"scan", "--molecule", kData + "/h2.xyz", "--taper", "--ansatz", "tapered",
                        "--grid", "0.5:1.0:3", "--theta-grid=-3:3:5", "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto l = lines(slurp(path));
    REQUIRE(l.size() == 16);
    CHECK(l[0] == "R_angstrom,theta,E");
    CHECK(l[1].rfind("0.5,-3,", 0) == 0);
    CHECK(run({"scan", "--molecule", kData + "/h2.xyz", "--theta-grid=-3:3:5"}).code == 2);
    CHECK(run({"optimize", "--molecule", kData + "/h2.xyz", "--taper", "--ansatz", "tapered",
               "--theta-grid=-3:3:5"})
              .code == 2);
}

TEST_CASE("unwritable output path fails") {
    const auto r = run({"scan", "--molecule", kData + "/h2.xyz", "--grid", "0.7:0.8:2", "--out",
                        "/nonexistent-dir/x.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot write") != std::string::npos);
}
