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

#include "qderiv/ops/encoding.hpp"

#include <bit>

#include "qderiv/errors.hpp"

namespace qderiv::ops {

namespace {

std::vector<std::uint32_t> fenwick_matrix(std::size_t size) {
    if (size == 1) {
        return {1U};
    }
    const std::size_t half = size / 2;
    const auto sub = fenwick_matrix(half);
    std::vector<std::uint32_t> rows(size, 0U);
    for (std::size_t i = 0; i < half; ++i) {
        rows[i] = sub[i];
        rows[half + i] = sub[i] << half;
    }
    rows[size - 1] |= (1U << half) - 1U;
    return rows;
}

// Inverse of a unit lower-triangular GF(2) matrix by forward substitution.
std::vector<std::uint32_t> gf2_inverse(const std::vector<std::uint32_t> &rows) {
    const std::size_t n = rows.size();
    std::vector<std::uint32_t> inv(n, 0U);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 1U << i;
        for (std::size_t k = 0; k < i; ++k) {
            if ((rows[i] >> k) & 1U) {
                r ^= inv[k];
            }
        }
        inv[i] = r;
    }
    return inv;
}

void check_modes(std::size_t n_modes) {
    if (n_modes > kMaxQubits) {
        throw SizeLimitError("encodings support at most " + std::to_string(kMaxQubits) +
                             " modes");
    }
}

struct LadderSets {
    std::uint32_t flip = 0;
    std::uint32_t parity = 0;
    std::uint32_t occupation = 0;
};

LadderSets ladder_sets(std::size_t mode, Encoding enc, std::size_t n_modes) {
    const auto beta = encoding_matrix(enc, n_modes);
    const auto inv = gf2_inverse(beta);
    LadderSets sets;
    for (std::size_t i = 0; i < n_modes; ++i) {
        if ((beta[i] >> mode) & 1U) {
            sets.flip |= 1U << i;
        }
    }
    for (std::size_t k = 0; k < mode; ++k) {
        sets.parity ^= inv[k];
    }
    sets.occupation = inv[mode];
    return sets;
}

PauliTerm z_string(std::uint32_t mask, std::size_t n, Complex c) {
    return PauliTerm{c, 0U, mask, n};
}

} // namespace

std::string_view to_string(Encoding enc) {
    return enc == Encoding::JordanWigner ? "jw" : "bk";
}

Encoding parse_encoding(std::string_view name) {
    if (name == "jw") {
        return Encoding::JordanWigner;
    }
    if (name == "bk") {
        return Encoding::BravyiKitaev;
    }
    throw ArgumentError("unknown mapping '" + std::string(name) + "' (expected jw or bk)");
}

std::vector<std::uint32_t> encoding_matrix(Encoding enc, std::size_t n_modes) {
    check_modes(n_modes);
    if (n_modes == 0) {
        return {};
    }
    if (enc == Encoding::JordanWigner) {
        std::vector<std::uint32_t> rows(n_modes);
        for (std::size_t i = 0; i < n_modes; ++i) {
            rows[i] = 1U << i;
        }
        return rows;
    }
    const std::size_t padded = std::bit_ceil(n_modes);
    auto rows = fenwick_matrix(padded);
    rows.resize(n_modes);
    return rows;
}

std::uint64_t encode_occupation(std::uint64_t occupation, Encoding enc, std::size_t n_modes) {
    const auto beta = encoding_matrix(enc, n_modes);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n_modes; ++i) {
        if (std::popcount(beta[i] & static_cast<std::uint32_t>(occupation)) % 2 == 1) {
            bits |= std::uint64_t{1} << i;
        }
    }
    return bits;
}

PauliSum creation_image(std::size_t mode, Encoding enc, std::size_t n_modes) {
    if (mode >= n_modes) {
        throw ArgumentError("mode out of range");
    }
    const auto sets = ladder_sets(mode, enc, n_modes);
    // a+_j = X_F Z_P (I + Z_O)/2
    const PauliSum flip(n_modes, {PauliTerm{1.0, sets.flip, 0U, n_modes}});
    const PauliSum parity(n_modes, {z_string(sets.parity, n_modes, 1.0)});
    const PauliSum projector(n_modes, {z_string(0U, n_modes, 0.5),
                                       z_string(sets.occupation, n_modes, 0.5)});
    return flip * parity * projector;
}

PauliSum annihilation_image(std::size_t mode, Encoding enc, std::size_t n_modes) {
    const auto sets = ladder_sets(mode, enc, n_modes);
    const PauliSum flip(n_modes, {PauliTerm{1.0, sets.flip, 0U, n_modes}});
    const PauliSum parity(n_modes, {z_string(sets.parity, n_modes, 1.0)});
    const PauliSum projector(n_modes, {z_string(0U, n_modes, 0.5),
                                       z_string(sets.occupation, n_modes, 0.5)});
    return projector * parity * flip;
}

PauliSum encode(const FermionOperator &op, Encoding enc) {
    const std::size_t n = op.n_modes();
    check_modes(n);
    std::vector<PauliSum> creators;
    std::vector<PauliSum> annihilators;
    for (std::size_t j = 0; j < n; ++j) {
        creators.push_back(creation_image(j, enc, n));
        annihilators.push_back(annihilation_image(j, enc, n));
    }
    std::vector<PauliTerm> out;
    std::vector<PauliTerm> partial;
    std::vector<PauliTerm> next;
    for (const auto &term : op.terms()) {
        partial.assign(1, PauliTerm{term.coefficient, 0U, 0U, n});
        for (const auto &ladder : term.ops) {
            const auto &image = ladder.creation ? creators[ladder.mode] : annihilators[ladder.mode];
            next.clear();
            for (const auto &a : partial) {
                for (const auto &b : image.terms()) {
                    next.push_back(pauli_product(a, b));
                }
            }
            partial = PauliSum(n, std::move(next)).terms();
            next = {};
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return PauliSum(n, std::move(out));
}

PauliSum number_operator(std::size_t n_modes, Encoding enc) {
    return encode(one_body_operator(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_modes),
                                                              static_cast<Eigen::Index>(n_modes))),
                  enc);
}

PauliSum dipole_operator(const chem::SpinOrbitalIntegrals &so, int axis, Encoding enc) {
    if (axis < 0 || axis > 2) {
        throw ArgumentError("dipole axis must be 0, 1 or 2");
    }
    return encode(one_body_operator(so.dipole[static_cast<std::size_t>(axis)],
                                    -so.nuclear_dipole[axis]),
                  enc);
}

} // namespace qderiv::ops
