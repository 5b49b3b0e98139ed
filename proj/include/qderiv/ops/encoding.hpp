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
#include <string_view>
#include <vector>

#include "qderiv/chem/scf.hpp"
#include "qderiv/ops/fermion.hpp"
#include "qderiv/ops/pauli.hpp"

namespace qderiv::ops {

enum class Encoding { JordanWigner, BravyiKitaev };

std::string_view to_string(Encoding enc);
Encoding parse_encoding(std::string_view name); // "jw" | "bk"

/// Binary matrix beta with qubit bits b = beta f (mod 2); row i is a bitmask over modes.
/// Bravyi-Kitaev uses the Fenwick-tree matrix of the next power of two, truncated.
std::vector<std::uint32_t> encoding_matrix(Encoding enc, std::size_t n_modes);

/// Qubit bitstring (bit q = qubit q) for a mode occupation bitmask.
std::uint64_t encode_occupation(std::uint64_t occupation, Encoding enc, std::size_t n_modes);

/// Images of a+_j and a_j as Pauli sums.
PauliSum creation_image(std::size_t mode, Encoding enc, std::size_t n_modes);
PauliSum annihilation_image(std::size_t mode, Encoding enc, std::size_t n_modes);

PauliSum encode(const FermionOperator &op, Encoding enc);
inline PauliSum jordan_wigner(const FermionOperator &op) {
    return encode(op, Encoding::JordanWigner);
}
inline PauliSum bravyi_kitaev(const FermionOperator &op) {
    return encode(op, Encoding::BravyiKitaev);
}

/// Encoded sum_i a+_i a_i.
PauliSum number_operator(std::size_t n_modes, Encoding enc);

/// Encoded dipole component along `axis`: D_axis - mu_N,axis I, i.e. -dH/dF_axis.
PauliSum dipole_operator(const chem::SpinOrbitalIntegrals &so, int axis, Encoding enc);

} // namespace qderiv::ops
