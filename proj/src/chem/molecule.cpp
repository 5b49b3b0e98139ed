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

#include "qderiv/chem/molecule.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qderiv/errors.hpp"

namespace qderiv::chem {

namespace {

constexpr double kMinSeparation = 1e-6; // Angstrom

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

} // namespace

Molecule::Molecule(std::vector<Atom> atoms, int net_charge)
    : atoms_(std::move(atoms)), net_charge_(net_charge) {
    if (atoms_.empty()) {
        throw InvalidMoleculeError("molecule has no atoms");
    }
    for (const auto &atom : atoms_) {
        if (atom.nuclear_charge < 1) {
            throw InvalidMoleculeError("nuclear charge must be >= 1 for " + atom.symbol);
        }
        if (!atom.position.allFinite()) {
            throw InvalidMoleculeError("non-finite position for " + atom.symbol);
        }
    }
    if (electron_count() < 1) {
        throw InvalidMoleculeError("electron count must be >= 1, got " +
                                   std::to_string(electron_count()));
    }
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        for (std::size_t b = a + 1; b < atoms_.size(); ++b) {
            if ((atoms_[a].position - atoms_[b].position).norm() < kMinSeparation) {
                throw SingularGeometryError("atoms " + std::to_string(a) + " and " +
                                            std::to_string(b) + " coincide");
            }
        }
    }
}

int Molecule::electron_count() const noexcept {
    int z = 0;
    for (const auto &atom : atoms_) {
        z += atom.nuclear_charge;
    }
    return z - net_charge_;
}

Eigen::Vector3d Molecule::position_bohr(std::size_t i) const {
    return atoms_.at(i).position / kBohrAngstrom;
}

Molecule Molecule::translated(const Eigen::Vector3d &shift) const {
    auto atoms = atoms_;
    for (auto &atom : atoms) {
        atom.position += shift;
    }
    return Molecule(std::move(atoms), net_charge_);
}

int nuclear_charge_of(std::string_view symbol) {
    if (symbol == "H" || symbol == "h") {
        return 1;
    }
    throw UnsupportedElementError("unsupported element '" + std::string(symbol) + "'");
}

Molecule parse_xyz(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]).empty()) {
        throw ParseError(1, "missing atom count");
    }
    const auto count_field = trim(lines[0]);
    std::size_t count = 0;
    const auto [ptr, ec] =
        std::from_chars(count_field.data(), count_field.data() + count_field.size(), count);
    if (ec != std::errc{} || ptr != count_field.data() + count_field.size()) {
        throw ParseError(1, "invalid atom count '" + std::string(count_field) + "'");
    }

    int charge = 0;
    if (lines.size() > 1) {
        std::istringstream comment{std::string(lines[1])};
        std::string token;
        while (comment >> token) {
            if (token.rfind("charge=", 0) == 0) {
                try {
                    std::size_t used = 0;
                    charge = std::stoi(token.substr(7), &used);
                    if (used != token.size() - 7) {
                        throw std::invalid_argument("trailing characters");
                    }
                } catch (const std::exception &) {
                    throw ParseError(2, "invalid charge token '" + token + "'");
                }
            }
        }
    }

    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t line_no = i + 3;
        if (line_no > lines.size()) {
            throw ParseError(line_no, "expected " + std::to_string(count) + " atom lines");
        }
        std::istringstream row{std::string(lines[line_no - 1])};
        std::string symbol;
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
        if (!(row >> symbol >> x >> y >> z)) {
            throw ParseError(line_no, "malformed atom line '" +
                                          std::string(trim(lines[line_no - 1])) + "'");
        }
        std::string rest;
        if (row >> rest) {
            throw ParseError(line_no, "unexpected trailing field '" + rest + "'");
        }
        atoms.push_back(Atom{symbol, nuclear_charge_of(symbol), Eigen::Vector3d(x, y, z)});
    }
    for (std::size_t i = count + 2; i < lines.size(); ++i) {
        if (!trim(lines[i]).empty()) {
            throw ParseError(i + 1, "more atom lines than the declared count");
        }
    }
    return Molecule(std::move(atoms), charge);
}

Molecule hydrogen_chain(const std::vector<double> &bond_lengths, int net_charge) {
    std::vector<Atom> atoms;
    double z = 0.0;
    atoms.push_back(Atom{"H", 1, Eigen::Vector3d(0.0, 0.0, z)});
    for (double r : bond_lengths) {
        z += r;
        atoms.push_back(Atom{"H", 1, Eigen::Vector3d(0.0, 0.0, z)});
    }
    return Molecule(std::move(atoms), net_charge);
}

double nuclear_repulsion(const Molecule &mol) {
    double energy = 0.0;
    for (std::size_t a = 0; a < mol.size(); ++a) {
        for (std::size_t b = a + 1; b < mol.size(); ++b) {
            const double r = (mol.position_bohr(a) - mol.position_bohr(b)).norm();
            if (r * kBohrAngstrom < kMinSeparation) {
                throw SingularGeometryError("nuclear repulsion diverges for coincident atoms");
            }
            energy += mol.atoms()[a].nuclear_charge * mol.atoms()[b].nuclear_charge / r;
        }
    }
    return energy;
}

Eigen::Vector3d nuclear_dipole(const Molecule &mol, const Eigen::Vector3d &origin) {
    Eigen::Vector3d mu = Eigen::Vector3d::Zero();
    for (std::size_t a = 0; a < mol.size(); ++a) {
        mu += mol.atoms()[a].nuclear_charge * (mol.position_bohr(a) - origin);
    }
    return mu;
}

Eigen::Vector3d charge_center(const Molecule &mol) {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double total = 0.0;
    for (std::size_t a = 0; a < mol.size(); ++a) {
        center += mol.atoms()[a].nuclear_charge * mol.position_bohr(a);
        total += mol.atoms()[a].nuclear_charge;
    }
    return center / total;
}

} // namespace qderiv::chem
