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

#include "qderiv/ops/taper.hpp"

#include <algorithm>
#include <cmath>

#include "qderiv/errors.hpp"
#include "qderiv/ops/dense.hpp"

namespace qderiv::ops {

namespace {

std::uint32_t compress(std::uint32_t bits, const std::vector<std::size_t> &surviving) {
    std::uint32_t out = 0;
    for (std::size_t k = 0; k < surviving.size(); ++k) {
        out |= ((bits >> surviving[k]) & 1U) << k;
    }
    return out;
}

} // namespace

PauliSum TaperingMap::apply(const PauliSum &s) const {
    if (s.n_qubits() != source_qubits) {
        throw ArgumentError("tapering map applied to a sum over a different register");
    }
    std::vector<PauliTerm> out;
    out.reserve(s.size());
    for (const auto &t : s.terms()) {
        Complex c = t.coefficient;
        for (std::size_t k = 0; k < removed.size(); ++k) {
            const std::size_t q = removed[k];
            if ((t.x >> q) & 1U) {
                throw NotTaperableError("qubit " + std::to_string(q) +
                                        " carries an X or Y letter");
            }
            if ((t.z >> q) & 1U) {
                c *= static_cast<double>(eigenvalues[k]);
            }
        }
        out.push_back(
            PauliTerm{c, compress(t.x, surviving), compress(t.z, surviving), surviving.size()});
    }
    return PauliSum(surviving.size(), std::move(out));
}

std::uint64_t TaperingMap::reduce_bits(std::uint64_t bits) const {
    return compress(static_cast<std::uint32_t>(bits), surviving);
}

std::vector<std::size_t> taperable_qubits(const PauliSum &s) {
    std::uint32_t touched = 0;
    for (const auto &t : s.terms()) {
        touched |= t.x;
    }
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < s.n_qubits(); ++q) {
        if (((touched >> q) & 1U) == 0U) {
            out.push_back(q);
        }
    }
    return out;
}

std::pair<PauliSum, TaperingMap> taper(const PauliSum &s, const std::vector<std::size_t> &qubits,
                                       const std::vector<int> &eigenvalues) {
    if (qubits.size() != eigenvalues.size()) {
        throw ArgumentError("one eigenvalue is required per tapered qubit");
    }
    TaperingMap map;
    map.source_qubits = s.n_qubits();
    std::vector<std::pair<std::size_t, int>> pairs;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        if (qubits[k] >= s.n_qubits()) {
            throw ArgumentError("tapered qubit out of range");
        }
        if (eigenvalues[k] != 1 && eigenvalues[k] != -1) {
            throw ArgumentError("sector eigenvalues must be +1 or -1");
        }
        pairs.emplace_back(qubits[k], eigenvalues[k]);
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (k > 0 && pairs[k].first == pairs[k - 1].first) {
            throw ArgumentError("qubit listed twice for tapering");
        }
        map.removed.push_back(pairs[k].first);
        map.eigenvalues.push_back(pairs[k].second);
    }
    for (std::size_t q = 0; q < s.n_qubits(); ++q) {
        if (!std::binary_search(map.removed.begin(), map.removed.end(), q)) {
            map.surviving.push_back(q);
        }
    }
    PauliSum reduced = map.apply(s);
    return {std::move(reduced), std::move(map)};
}

double sector_energy_gap(const PauliSum &s, const TaperingMap &map) {
    return std::abs(ground_energy(map.apply(s)) - ground_energy(s));
}

TaperingMap select_sector(const PauliSum &s, const std::vector<std::size_t> &qubits,
                          double tol) {
    const double full = ground_energy(s);
    const std::size_t r = qubits.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
        std::vector<int> eig(r);
        for (std::size_t k = 0; k < r; ++k) {
            eig[k] = ((mask >> k) & 1U) ? -1 : 1;
        }
        auto [reduced, map] = taper(s, qubits, eig);
        if (std::abs(ground_energy(reduced) - full) < tol) {
            return map;
        }
    }
    throw NotTaperableError("no symmetry sector reproduces the full ground energy");
}

} // namespace qderiv::ops
