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
#include <vector>

#include "qderiv/ops/pauli.hpp"

namespace qderiv::ops {

/// Removal of I/Z-only qubits at fixed +-1 eigenvalues.
struct TaperingMap {
    std::size_t source_qubits = 0;
    std::vector<std::size_t> removed;
    std::vector<int> eigenvalues;       // one per removed qubit
    std::vector<std::size_t> surviving; // new index -> old index

    [[nodiscard]] std::size_t reduced_qubits() const noexcept { return surviving.size(); }
    /// Apply the frozen map to another sum over the same source register.
    [[nodiscard]] PauliSum apply(const PauliSum &s) const;
    /// Drop removed qubits from a source bitstring.
    [[nodiscard]] std::uint64_t reduce_bits(std::uint64_t bits) const;
};

/// Qubits that carry only I or Z in every term.
std::vector<std::size_t> taperable_qubits(const PauliSum &s);

std::pair<PauliSum, TaperingMap> taper(const PauliSum &s, const std::vector<std::size_t> &qubits,
                                       const std::vector<int> &eigenvalues);

/// |ground(reduced) - ground(full)| for the given map (dense oracle).
double sector_energy_gap(const PauliSum &s, const TaperingMap &map);

/// Enumerate all eigenvalue assignments on `qubits`; keep the first whose reduced ground
/// energy matches the full one within `tol`.
TaperingMap select_sector(const PauliSum &s, const std::vector<std::size_t> &qubits,
                          double tol = 1e-10);

} // namespace qderiv::ops
