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

#include "qderiv/ops/fermion.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "qderiv/errors.hpp"

namespace qderiv::ops {

namespace {

using Key = std::vector<std::pair<std::size_t, bool>>;

Key key_of(const std::vector<LadderOp> &ops) {
    Key key;
    key.reserve(ops.size());
    for (const auto &op : ops) {
        key.emplace_back(op.mode, op.creation);
    }
    return key;
}

// Position of the first adjacent pair that is out of normal order, or npos.
std::size_t first_disorder(const std::vector<LadderOp> &ops) {
    for (std::size_t k = 0; k + 1 < ops.size(); ++k) {
        const auto &l = ops[k];
        const auto &r = ops[k + 1];
        if (!l.creation && r.creation) {
            return k;
        }
        if (l.creation == r.creation && l.mode <= r.mode) {
            return k;
        }
    }
    return std::string::npos;
}

} // namespace

void FermionOperator::add(std::complex<double> coefficient, std::vector<LadderOp> ops) {
    for (const auto &op : ops) {
        if (op.mode >= n_modes_) {
            throw ArgumentError("ladder operator mode " + std::to_string(op.mode) +
                                " out of range");
        }
    }
    terms_.push_back({coefficient, std::move(ops)});
}

FermionOperator &FermionOperator::operator+=(const FermionOperator &other) {
    if (other.n_modes_ != n_modes_) {
        throw ArgumentError("adding fermion operators over different mode counts");
    }
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

FermionOperator FermionOperator::adjoint() const {
    FermionOperator out(n_modes_);
    for (const auto &t : terms_) {
        std::vector<LadderOp> ops(t.ops.rbegin(), t.ops.rend());
        for (auto &op : ops) {
            op.creation = !op.creation;
        }
        out.terms_.push_back({std::conj(t.coefficient), std::move(ops)});
    }
    return out;
}

FermionOperator FermionOperator::normal_ordered() const {
    std::map<Key, std::complex<double>> acc;
    std::vector<FermionTerm> work(terms_.begin(), terms_.end());
    while (!work.empty()) {
        FermionTerm t = std::move(work.back());
        work.pop_back();
        bool vanished = false;
        for (;;) {
            const std::size_t k = first_disorder(t.ops);
            if (k == std::string::npos) {
                break;
            }
            const LadderOp l = t.ops[k];
            const LadderOp r = t.ops[k + 1];
            if (l.creation == r.creation && l.mode == r.mode) {
                vanished = true; // a+ a+ or a a on one mode
                break;
            }
            if (!l.creation && r.creation && l.mode == r.mode) {
                // a_p a+_p = 1 - a+_p a_p
                FermionTerm contracted{t.coefficient, {}};
                contracted.ops.insert(contracted.ops.end(), t.ops.begin(), t.ops.begin() + k);
                contracted.ops.insert(contracted.ops.end(), t.ops.begin() + k + 2, t.ops.end());
                work.push_back(std::move(contracted));
            }
            std::swap(t.ops[k], t.ops[k + 1]);
            t.coefficient = -t.coefficient;
        }
        if (!vanished) {
            acc[key_of(t.ops)] += t.coefficient;
        }
    }
    FermionOperator out(n_modes_);
    for (const auto &[key, c] : acc) {
        if (std::abs(c) < 1e-14) {
            continue;
        }
        std::vector<LadderOp> ops;
        for (const auto &[mode, creation] : key) {
            ops.push_back({mode, creation});
        }
        out.terms_.push_back({c, std::move(ops)});
    }
    return out;
}

bool FermionOperator::is_hermitian(double tol) const {
    FermionOperator diff = *this;
    for (const auto &t : adjoint().terms_) {
        diff.terms_.push_back({-t.coefficient, t.ops});
    }
    const auto ordered = diff.normal_ordered();
    return std::all_of(ordered.terms_.begin(), ordered.terms_.end(),
                       [tol](const FermionTerm &t) { return std::abs(t.coefficient) <= tol; });
}

FermionOperator one_body_operator(const Eigen::MatrixXd &matrix, double constant) {
    if (matrix.rows() != matrix.cols()) {
        throw ArgumentError("one-body matrix must be square");
    }
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw HermiticityError("one-body matrix is not Hermitian");
    }
    const auto n = static_cast<std::size_t>(matrix.rows());
    FermionOperator op(n);
    if (constant != 0.0) {
        op.add_constant(constant);
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            const double v = matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
            if (v != 0.0) {
                op.add(v, {cre(p), ann(q)});
            }
        }
    }
    return op;
}

FermionOperator hamiltonian_from_integrals(const chem::SpinOrbitalIntegrals &so) {
    FermionOperator op = one_body_operator(so.one_body, so.constant);
    const std::size_t n = so.modes();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t s = 0; s < n; ++s) {
                    const double v = so.two(p, q, r, s);
                    if (v != 0.0 && p != q && r != s) {
                        op.add(v, {cre(p), cre(q), ann(r), ann(s)});
                    }
                }
            }
        }
    }
    return op;
}

} // namespace qderiv::ops
