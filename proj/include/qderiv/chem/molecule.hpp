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

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qderiv::chem {

/// Angstrom per Bohr.
inline constexpr double kBohrAngstrom = 0.52917721092;

struct Atom {
    std::string symbol;
    int nuclear_charge = 1;
    Eigen::Vector3d position; // Angstrom
};

/// A set of nuclei plus a net charge. Construction validates every invariant.
class Molecule {
  public:
    Molecule(std::vector<Atom> atoms, int net_charge = 0);

    [[nodiscard]] const std::vector<Atom> &atoms() const noexcept { return atoms_; }
    [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
    [[nodiscard]] int net_charge() const noexcept { return net_charge_; }
    [[nodiscard]] int electron_count() const noexcept;

    /// Position of atom `i` in Bohr.
    [[nodiscard]] Eigen::Vector3d position_bohr(std::size_t i) const;

    /// Copy with all atoms rigidly shifted by `shift` (Angstrom).
    [[nodiscard]] Molecule translated(const Eigen::Vector3d &shift) const;

  private:
    std::vector<Atom> atoms_;
    int net_charge_;
};

/// Nuclear charge for a supported element symbol. Only hydrogen for now.
int nuclear_charge_of(std::string_view symbol);

/// Parse XYZ text: count line, comment line (may carry `charge=k`), then
/// `Symbol x y z` per atom in Angstrom.
Molecule parse_xyz(std::string_view text);

/// Hydrogen chain along z with the given consecutive bond lengths (Angstrom).
Molecule hydrogen_chain(const std::vector<double> &bond_lengths, int net_charge = 0);

/// Sum over pairs of Z_A Z_B / |R_A - R_B| in Hartree.
double nuclear_repulsion(const Molecule &mol);

/// Sum of Z_A (R_A - origin), atomic units. `origin` in Bohr.
Eigen::Vector3d nuclear_dipole(const Molecule &mol, const Eigen::Vector3d &origin);

/// Center of nuclear charge in Bohr.
Eigen::Vector3d charge_center(const Molecule &mol);

} // namespace qderiv::chem
