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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qderiv::cli {

inline constexpr const char *kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

struct RunConfig {
    std::string command;
    std::string molecule;
    std::string products; // ts only; empty: reactant chain reversed
    std::string grid;     // empty: per-command default
    std::string theta_grid; // scan only: E(R, theta) surface of the one-parameter ansatz
    std::string mapping = "bk";
    bool taper = false;
    std::string ansatz = "hea"; // hea | tapered
    int depth = 0;              // 0: default for the command
    std::string engine = "exact";
    std::size_t shots = 0;
    std::uint64_t seed = 1;
    std::string method = "gradient";
    double gamma = 0.0; // 0: method default
    double ctol = 1e-3;
    double field_step = 1e-3;
    int states = 5;  // excited
    int repeats = 5; // excited
    int order = 1;   // derivative
    bool field = false; // derivative: include the z field parameter
    std::string format = "csv";
    std::string out;

    [[nodiscard]] nlohmann::json to_json() const;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Twelve significant digits; "nan"/"inf" for non-finite values.
std::string format_number(double v);

std::string to_csv(const Table &t);
/// {"metadata": ..., "columns": [...], "rows": [{column: value}, ...]}; non-finite numbers as null.
nlohmann::json table_to_json(const Table &t, const nlohmann::json &metadata);
/// Inverse of table_to_json for the rows and columns.
Table table_from_json(const nlohmann::json &j);

/// Parses argv, runs the command and writes the report. Returns an ExitCode.
int execute(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qderiv::cli
