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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qderiv::ops {

using Complex = std::complex<double>;

/// Coefficients with magnitude below this are pruned by simplify().
inline constexpr double kPruneThreshold = 1e-12;
/// Largest register handled by the bitmask representation.
inline constexpr std::size_t kMaxQubits = 32;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// A weighted N-qubit Pauli string, stored as X/Z bitmasks (Y = both bits set).
struct PauliTerm {
    Complex coefficient{1.0, 0.0};
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    std::size_t n_qubits = 0;

    [[nodiscard]] Letter letter(std::size_t qubit) const noexcept;
    [[nodiscard]] bool is_identity() const noexcept { return x == 0 && z == 0; }
    /// Qubits carrying a non-identity letter.
    [[nodiscard]] std::uint32_t support() const noexcept { return x | z; }
    /// Letters in qubit order, e.g. "Z I Z Z".
    [[nodiscard]] std::string letters() const;

    static PauliTerm from_letters(std::size_t n_qubits, std::string_view letters,
                                  Complex coefficient = 1.0);
    /// Sparse constructor: {{qubit, 'X'}, ...}.
    static PauliTerm from_sparse(std::size_t n_qubits,
                                 const std::vector<std::pair<std::size_t, char>> &letters,
                                 Complex coefficient = 1.0);
};

/// Lexicographic order on letter strings (qubit 0 first, I < X < Y < Z).
bool letters_less(const PauliTerm &a, const PauliTerm &b) noexcept;

/// Single-term product; accumulates the {+-1, +-i} phase.
PauliTerm pauli_product(const PauliTerm &a, const PauliTerm &b);

/// Canonically ordered sum of Pauli terms over a fixed register.
class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
    PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

    static PauliSum identity(std::size_t n_qubits, Complex coefficient = 1.0);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

    /// Coefficient of the given letter string (0 if absent).
    [[nodiscard]] Complex coefficient(const PauliTerm &letters) const;
    [[nodiscard]] Complex coefficient(std::string_view letters) const;

    /// True when every coefficient is real within `tol`.
    [[nodiscard]] bool is_observable(double tol = kPruneThreshold) const noexcept;
    /// Sum of |h_P| over all terms.
    [[nodiscard]] double l1_norm() const noexcept;

    PauliSum &operator+=(const PauliSum &other);
    PauliSum &operator-=(const PauliSum &other);
    PauliSum &operator*=(Complex scale);

    friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, Complex s) { return a *= s; }
    friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }
    friend PauliSum operator*(const PauliSum &a, const PauliSum &b);

    /// One line per term: "coeff letters". Complex coefficients print as (re,im).
    [[nodiscard]] std::string to_text() const;
    static PauliSum from_text(std::string_view text);

  private:
    void canonicalize();

    std::size_t n_qubits_ = 0;
    std::vector<PauliTerm> terms_;

    friend PauliSum sum_simplify(const PauliSum &s);
};

/// Merge duplicate strings, prune |c| < 1e-12, sort. Idempotent.
PauliSum sum_simplify(const PauliSum &s);

/// Max |a_P - b_P| over the union of strings.
double max_coefficient_difference(const PauliSum &a, const PauliSum &b);

} // namespace qderiv::ops
