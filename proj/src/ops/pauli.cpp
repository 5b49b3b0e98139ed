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

#include "qderiv/ops/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "qderiv/errors.hpp"

namespace qderiv::ops {

namespace {

// i^k for k mod 4.
Complex i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

void check_register(std::size_t n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw SizeLimitError("Pauli strings support at most " + std::to_string(kMaxQubits) +
                             " qubits");
    }
}

std::string format_coefficient(Complex c) {
    char buf[96];
    if (c.imag() == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.real());
    } else {
        std::snprintf(buf, sizeof(buf), "(%.17g,%.17g)", c.real(), c.imag());
    }
    return buf;
}

} // namespace

Letter PauliTerm::letter(std::size_t qubit) const noexcept {
    const bool xb = (x >> qubit) & 1U;
    const bool zb = (z >> qubit) & 1U;
    if (xb) {
        return zb ? Letter::Y : Letter::X;
    }
    return zb ? Letter::Z : Letter::I;
}

std::string PauliTerm::letters() const {
    static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (q != 0) {
            out += ' ';
        }
        out += kNames[static_cast<int>(letter(q))];
    }
    return out;
}

PauliTerm PauliTerm::from_letters(std::size_t n_qubits, std::string_view letters,
                                  Complex coefficient) {
    check_register(n_qubits);
    PauliTerm term{coefficient, 0, 0, n_qubits};
    std::size_t q = 0;
    for (char ch : letters) {
        if (ch == ' ' || ch == '\t') {
            continue;
        }
        if (q >= n_qubits) {
            throw ArgumentError("too many letters for " + std::to_string(n_qubits) + " qubits");
        }
        switch (ch) {
        case 'I':
            break;
        case 'X':
            term.x |= 1U << q;
            break;
        case 'Y':
            term.x |= 1U << q;
            term.z |= 1U << q;
            break;
        case 'Z':
            term.z |= 1U << q;
            break;
        default:
            throw ArgumentError(std::string("invalid Pauli letter '") + ch + "'");
        }
        ++q;
    }
    if (q != n_qubits) {
        throw ArgumentError("expected " + std::to_string(n_qubits) + " letters");
    }
    return term;
}

PauliTerm PauliTerm::from_sparse(std::size_t n_qubits,
                                 const std::vector<std::pair<std::size_t, char>> &letters,
                                 Complex coefficient) {
    std::string dense(n_qubits, 'I');
    for (const auto &[q, ch] : letters) {
        if (q >= n_qubits) {
            throw ArgumentError("qubit index out of range");
        }
        dense[q] = ch;
    }
    return from_letters(n_qubits, dense, coefficient);
}

bool letters_less(const PauliTerm &a, const PauliTerm &b) noexcept {
    const std::uint32_t diff = (a.x ^ b.x) | (a.z ^ b.z);
    if (diff == 0) {
        return false;
    }
    const auto q = static_cast<std::size_t>(std::countr_zero(diff));
    return static_cast<int>(a.letter(q)) < static_cast<int>(b.letter(q));
}

PauliTerm pauli_product(const PauliTerm &a, const PauliTerm &b) {
    if (a.n_qubits != b.n_qubits) {
        throw ArgumentError("Pauli product of mismatched registers (" +
                            std::to_string(a.n_qubits) + " vs " + std::to_string(b.n_qubits) +
                            ")");
    }
    // P = i^{|x&z|} X^x Z^z; Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
    PauliTerm out{a.coefficient * b.coefficient, a.x ^ b.x, a.z ^ b.z, a.n_qubits};
    const int phase = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) -
                      std::popcount(out.x & out.z) + 2 * std::popcount(a.z & b.x);
    out.coefficient *= i_power(phase);
    return out;
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    check_register(n_qubits);
    for (const auto &t : terms_) {
        if (t.n_qubits != n_qubits_) {
            throw ArgumentError("term register does not match the sum");
        }
    }
    canonicalize();
}

PauliSum PauliSum::identity(std::size_t n_qubits, Complex coefficient) {
    return PauliSum(n_qubits, {PauliTerm{coefficient, 0, 0, n_qubits}});
}

void PauliSum::canonicalize() {
    std::stable_sort(terms_.begin(), terms_.end(), letters_less);
    std::vector<PauliTerm> merged;
    merged.reserve(terms_.size());
    for (const auto &t : terms_) {
        if (!merged.empty() && merged.back().x == t.x && merged.back().z == t.z) {
            merged.back().coefficient += t.coefficient;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const PauliTerm &t) { return std::abs(t.coefficient) < kPruneThreshold; });
    terms_ = std::move(merged);
}

Complex PauliSum::coefficient(const PauliTerm &letters) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), letters, letters_less);
    if (it != terms_.end() && it->x == letters.x && it->z == letters.z) {
        return it->coefficient;
    }
    return {0.0, 0.0};
}

Complex PauliSum::coefficient(std::string_view letters) const {
    return coefficient(PauliTerm::from_letters(n_qubits_, letters));
}

bool PauliSum::is_observable(double tol) const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const PauliTerm &t) { return std::abs(t.coefficient.imag()) <= tol; });
}

double PauliSum::l1_norm() const noexcept {
    double acc = 0.0;
    for (const auto &t : terms_) {
        acc += std::abs(t.coefficient);
    }
    return acc;
}

PauliSum &PauliSum::operator+=(const PauliSum &other) {
    if (terms_.empty() && n_qubits_ == 0) {
        n_qubits_ = other.n_qubits_;
    }
    if (other.n_qubits_ != n_qubits_) {
        throw ArgumentError("adding PauliSums over different registers");
    }
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
}

PauliSum &PauliSum::operator-=(const PauliSum &other) { return *this += other * Complex(-1.0); }

PauliSum &PauliSum::operator*=(Complex scale) {
    for (auto &t : terms_) {
        t.coefficient *= scale;
    }
    canonicalize();
    return *this;
}

PauliSum operator*(const PauliSum &a, const PauliSum &b) {
    if (a.n_qubits_ != b.n_qubits_) {
        throw ArgumentError("multiplying PauliSums over different registers");
    }
    std::vector<PauliTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto &ta : a.terms_) {
        for (const auto &tb : b.terms_) {
            out.push_back(pauli_product(ta, tb));
        }
    }
    return PauliSum(a.n_qubits_, std::move(out));
}

std::string PauliSum::to_text() const {
    std::string out;
    for (const auto &t : terms_) {
        out += format_coefficient(t.coefficient);
        out += ' ';
        out += t.letters();
        out += '\n';
    }
    return out;
}

PauliSum PauliSum::from_text(std::string_view text) {
    std::vector<PauliTerm> terms;
    std::size_t n_qubits = 0;
    bool have_register = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string coeff_field;
        if (!(row >> coeff_field)) {
            continue;
        }
        Complex coefficient;
        try {
            if (coeff_field.front() == '(') {
                const auto comma = coeff_field.find(',');
                if (comma == std::string::npos || coeff_field.back() != ')') {
                    throw std::invalid_argument("bad complex");
                }
                coefficient = {std::stod(coeff_field.substr(1, comma - 1)),
                               std::stod(coeff_field.substr(comma + 1))};
            } else {
                std::size_t used = 0;
                coefficient = std::stod(coeff_field, &used);
                if (used != coeff_field.size()) {
                    throw std::invalid_argument("trailing");
                }
            }
        } catch (const std::exception &) {
            throw ParseError(line_no, "invalid coefficient '" + coeff_field + "'");
        }
        std::string letters;
        std::string letter;
        std::size_t count = 0;
        while (row >> letter) {
            letters += letter;
            ++count;
        }
        if (!have_register) {
            n_qubits = count;
            have_register = true;
        } else if (count != n_qubits) {
            throw ParseError(line_no, "inconsistent qubit count");
        }
        try {
            terms.push_back(PauliTerm::from_letters(n_qubits, letters, coefficient));
        } catch (const ArgumentError &e) {
            throw ParseError(line_no, e.what());
        }
    }
    return PauliSum(n_qubits, std::move(terms));
}

PauliSum sum_simplify(const PauliSum &s) {
    PauliSum out = s;
    out.canonicalize();
    return out;
}

double max_coefficient_difference(const PauliSum &a, const PauliSum &b) {
    double worst = 0.0;
    const PauliSum diff = a - b;
    for (const auto &t : diff.terms()) {
        worst = std::max(worst, std::abs(t.coefficient));
    }
    return worst;
}

} // namespace qderiv::ops
