// Copyright 2026 The Retrodictor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "retro/qla.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "retro/tolerances.h"

namespace retro {

namespace {

std::string dims_message(const std::string &what, std::size_t lhs, std::size_t rhs) {
    std::ostringstream out;
    out << what << ": dimension mismatch (" << lhs << " vs " << rhs << ")";
    return out.str();
}

void require_same_dim(const char *what, std::size_t lhs, std::size_t rhs) {
    if (lhs != rhs) {
        throw DimensionError(what, lhs, rhs);
    }
}

std::string format_double(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

}  // namespace

DimensionError::DimensionError(const std::string &what, std::size_t lhs, std::size_t rhs)
    : std::invalid_argument(dims_message(what, lhs, rhs)), lhs_(lhs), rhs_(rhs) {
}

InvariantError::InvariantError(std::string invariant, const std::string &detail)
    : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) {
        throw InvariantError("square", "dimension must be positive");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) {
        throw InvariantError("square", "dimension must be positive");
    }
    if (entries_.size() != dim * dim) {
        throw InvariantError("square", "expected " + std::to_string(dim * dim) + " entries, got " +
                                           std::to_string(entries_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_norm() const {
    double m = 0.0;
    for (const auto &z : entries_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim("multiply", a.dim_, b.dim_);
    const std::size_t n = a.dim_;
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim("add", a.dim_, b.dim_);
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) {
        out.entries_[i] += b.entries_[i];
    }
    return out;
}

ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim("subtract", a.dim_, b.dim_);
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) {
        out.entries_[i] -= b.entries_[i];
    }
    return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix &a) {
    ComplexMatrix out = a;
    for (auto &z : out.entries_) {
        z *= s;
    }
    return out;
}

ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b;
}
ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a + b;
}
ComplexMatrix adjoint(const ComplexMatrix &a) {
    return a.adjoint();
}
ComplexMatrix scale(Complex s, const ComplexMatrix &a) {
    return s * a;
}
Complex trace(const ComplexMatrix &a) {
    return a.trace();
}
double max_norm(const ComplexMatrix &a) {
    return a.max_norm();
}
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).max_norm();
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &input) {
    const std::size_t n = input.dim();
    // Work on the Hermitian part so round-off asymmetry cannot stall the sweep.
    ComplexMatrix a = 0.5 * (input + input.adjoint());

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) {
                    s += std::norm(a(p, q));
                }
            }
        }
        return std::sqrt(s);
    };
    const double scale_ref = std::max(a.max_norm(), 1e-300);

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > 1e-15 * scale_ref; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) {
                    continue;
                }
                // Phase D = diag(1, e^{-i phi}) makes the (p,q) entry real, then a
                // real rotation annihilates it. G = D R, A <- G^H A G.
                const Complex unit = a(p, q) / r;
                const double alpha = a(p, p).real();
                const double beta = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, beta - alpha);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex g00 = c;
                const Complex g01 = s;
                const Complex g10 = -s * std::conj(unit);
                const Complex g11 = c * std::conj(unit);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * g00 + akq * g10;
                    a(k, q) = akp * g01 + akq * g11;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
                    a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) {
        eig[i] = a(i, i).real();
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

// ---------------------------------------------------------------------------
// Ket

Ket::Ket(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw InvariantError("unit norm", "ket must have positive dimension");
    }
    double norm2 = 0.0;
    for (const auto &z : amplitudes_) {
        norm2 += std::norm(z);
    }
    if (!(std::abs(norm2 - 1.0) <= tol::kStructural)) {
        throw InvariantError("unit norm", "squared norm is " + format_double(norm2) + ", expected 1");
    }
}

Ket Ket::normalized(std::vector<Complex> raw) {
    double norm2 = 0.0;
    for (const auto &z : raw) {
        norm2 += std::norm(z);
    }
    if (!(norm2 > 1e-300)) {
        throw InvariantError("unit norm", "cannot normalize the zero vector");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &z : raw) {
        z *= inv;
    }
    return Ket(std::move(raw));
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range for dim " +
                                std::to_string(dim));
    }
    std::vector<Complex> v(dim);
    v[index] = 1.0;
    return Ket(std::move(v));
}

Complex inner(const Ket &a, const Ket &b) {
    require_same_dim("inner product", a.dim(), b.dim());
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

Complex sandwich(const Ket &a, const ComplexMatrix &m, const Ket &b) {
    require_same_dim("sandwich", a.dim(), m.dim());
    require_same_dim("sandwich", m.dim(), b.dim());
    Complex s = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < m.dim(); ++c) {
            row += m(r, c) * b[c];
        }
        s += std::conj(a[r]) * row;
    }
    return s;
}

ComplexMatrix outer(const Ket &a, const Ket &b) {
    require_same_dim("outer product", a.dim(), b.dim());
    ComplexMatrix m(a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            m(r, c) = a[r] * std::conj(b[c]);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    const double herm = max_abs_diff(matrix_, matrix_.adjoint());
    if (!(herm <= tol::kStructural)) {
        throw InvariantError("hermitian", "||rho - rho^H||_max = " + format_double(herm));
    }
    const Complex tr = matrix_.trace();
    if (!(std::abs(tr - 1.0) <= tol::kStructural)) {
        throw InvariantError("unit trace", "|Tr rho - 1| = " + format_double(std::abs(tr - 1.0)));
    }
    const double lowest = hermitian_eigenvalues(matrix_).front();
    if (!(lowest >= tol::kPsdFloor)) {
        throw InvariantError("positive semidefinite", "lowest eigenvalue " + format_double(lowest));
    }
}

DensityOperator DensityOperator::pure(const Ket &psi) {
    return DensityOperator(outer(psi, psi));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    return DensityOperator(Complex(1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(ComplexMatrix matrix) : matrix_(std::move(matrix)), rank_(0) {
    const double herm = max_abs_diff(matrix_, matrix_.adjoint());
    if (!(herm <= tol::kStructural)) {
        throw InvariantError("hermitian", "||P - P^H||_max = " + format_double(herm));
    }
    const double idem = max_abs_diff(matrix_ * matrix_, matrix_);
    if (!(idem <= tol::kStructural)) {
        throw InvariantError("idempotent", "||P^2 - P||_max = " + format_double(idem));
    }
    const double tr = matrix_.trace().real();
    const double rounded = std::round(tr);
    if (!(std::abs(tr - rounded) <= tol::kRankTrace) || rounded < 0.0) {
        throw InvariantError("rank", "trace " + format_double(tr) + " is not an integer");
    }
    rank_ = static_cast<std::size_t>(rounded);
}

Projector projector_from_ket(const Ket &v) {
    return Projector(outer(v, v));
}

// ---------------------------------------------------------------------------
// ProjectiveDecomposition

ProjectiveDecomposition::ProjectiveDecomposition(std::vector<Block> blocks) : dim_(0), blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
        throw InvariantError("completeness", "a decomposition needs at least one block");
    }
    dim_ = blocks_.front().projector.dim();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Block &b = blocks_[i];
        require_same_dim("decomposition block", dim_, b.projector.dim());
        if (!seen.insert(b.label).second) {
            throw InvariantError("unique labels", "label '" + b.label + "' appears twice");
        }
        if (b.ket) {
            require_same_dim("decomposition ket", dim_, b.ket->dim());
            const double d = max_abs_diff(outer(*b.ket, *b.ket), b.projector.matrix());
            if (!(d <= tol::kStructural)) {
                throw InvariantError("ket/projector consistency", "block '" + b.label + "' deviates by " +
                                                                      format_double(d));
            }
        }
    }
    ComplexMatrix sum(dim_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        sum = sum + blocks_[i].projector.matrix();
        for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
            const double overlap = (blocks_[i].projector.matrix() * blocks_[j].projector.matrix()).max_norm();
            if (!(overlap <= tol::kStructural)) {
                throw InvariantError("mutual orthogonality", "blocks '" + blocks_[i].label + "' (index " +
                                                                 std::to_string(i) + ") and '" + blocks_[j].label +
                                                                 "' (index " + std::to_string(j) +
                                                                 ") overlap by " + format_double(overlap));
            }
        }
    }
    const double gap = max_abs_diff(sum, ComplexMatrix::identity(dim_));
    if (!(gap <= tol::kStructural)) {
        throw InvariantError("completeness", "||sum P_i - I||_max = " + format_double(gap));
    }
}

const Block &ProjectiveDecomposition::block(const std::string &label) const {
    const auto idx = index_of(label);
    if (!idx) {
        throw std::out_of_range("unknown block label '" + label + "'");
    }
    return blocks_[*idx];
}

std::optional<std::size_t> ProjectiveDecomposition::index_of(const std::string &label) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::string> ProjectiveDecomposition::labels() const {
    std::vector<std::string> out;
    out.reserve(blocks_.size());
    for (const auto &b : blocks_) {
        out.push_back(b.label);
    }
    return out;
}

bool ProjectiveDecomposition::is_fine() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Block &b) { return b.projector.rank() == 1; });
}

Ket ProjectiveDecomposition::ket(std::size_t index) const {
    const Block &b = blocks_.at(index);
    if (b.ket) {
        return *b.ket;
    }
    if (b.projector.rank() != 1) {
        throw InvariantError("fine block", "block '" + b.label + "' has rank " + std::to_string(b.projector.rank()));
    }
    // P = v v^H; the column with the largest diagonal gives v up to phase.
    const ComplexMatrix &p = b.projector.matrix();
    std::size_t best = 0;
    for (std::size_t i = 1; i < dim_; ++i) {
        if (p(i, i).real() > p(best, best).real()) {
            best = i;
        }
    }
    std::vector<Complex> v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        v[i] = p(i, best);
    }
    return Ket::normalized(std::move(v));
}

ProjectiveDecomposition pvm_from_kets(const std::vector<Ket> &kets, std::vector<std::string> labels) {
    if (kets.empty()) {
        throw InvariantError("completeness", "no kets given");
    }
    if (labels.empty()) {
        for (std::size_t i = 0; i < kets.size(); ++i) {
            labels.push_back(std::to_string(i + 1));
        }
    }
    if (labels.size() != kets.size()) {
        throw InvariantError("labels", std::to_string(labels.size()) + " labels for " + std::to_string(kets.size()) +
                                           " kets");
    }
    const std::size_t dim = kets.front().dim();
    for (std::size_t i = 0; i < kets.size(); ++i) {
        require_same_dim("pvm_from_kets", dim, kets[i].dim());
        for (std::size_t j = i + 1; j < kets.size(); ++j) {
            const double ov = std::abs(inner(kets[i], kets[j]));
            if (!(ov <= tol::kStructural)) {
                throw InvariantError("mutual orthogonality", "kets " + std::to_string(i) + " and " +
                                                                 std::to_string(j) + " have |<a|b>| = " +
                                                                 format_double(ov));
            }
        }
    }
    if (kets.size() != dim) {
        throw InvariantError("completeness", std::to_string(kets.size()) + " orthonormal kets cannot span dimension " +
                                                 std::to_string(dim));
    }
    std::vector<Block> blocks;
    blocks.reserve(kets.size());
    for (std::size_t i = 0; i < kets.size(); ++i) {
        blocks.push_back(Block{labels[i], projector_from_ket(kets[i]), kets[i]});
    }
    return ProjectiveDecomposition(std::move(blocks));
}

ProjectiveDecomposition coarsen(const ProjectiveDecomposition &pvm, const std::vector<LabelGroup> &groups) {
    std::map<std::string, int> used;
    for (const auto &label : pvm.labels()) {
        used[label] = 0;
    }
    std::vector<Block> blocks;
    for (const auto &group : groups) {
        if (group.members.empty()) {
            throw InvariantError("partition", "group '" + group.label + "' is empty");
        }
        ComplexMatrix sum(pvm.dim());
        for (const auto &member : group.members) {
            auto it = used.find(member);
            if (it == used.end()) {
                throw InvariantError("partition", "unknown label '" + member + "'");
            }
            if (++it->second > 1) {
                throw InvariantError("partition", "label '" + member + "' appears in more than one group");
            }
            sum = sum + pvm.block(member).projector.matrix();
        }
        std::optional<Ket> ket;
        if (group.members.size() == 1) {
            ket = pvm.block(group.members.front()).ket;
        }
        blocks.push_back(Block{group.label, Projector(std::move(sum)), std::move(ket)});
    }
    for (const auto &[label, count] : used) {
        if (count == 0) {
            throw InvariantError("partition", "label '" + label + "' is not covered by any group");
        }
    }
    return ProjectiveDecomposition(std::move(blocks));
}

ProjectiveDecomposition coarsen(const ProjectiveDecomposition &pvm,
                                const std::vector<std::vector<std::string>> &groups) {
    std::vector<LabelGroup> named;
    named.reserve(groups.size());
    for (const auto &members : groups) {
        std::string label;
        for (std::size_t i = 0; i < members.size(); ++i) {
            label += (i ? "|" : "") + members[i];
        }
        named.push_back(LabelGroup{label, members});
    }
    return coarsen(pvm, named);
}

ProjectiveDecomposition binary_observation(const ProjectiveDecomposition &pvm, const std::string &label) {
    if (!pvm.index_of(label)) {
        throw InvariantError("partition", "unknown label '" + label + "'");
    }
    std::vector<std::string> rest;
    for (const auto &other : pvm.labels()) {
        if (other != label) {
            rest.push_back(other);
        }
    }
    std::vector<LabelGroup> groups{{label, {label}}};
    if (!rest.empty()) {
        groups.push_back({"not " + label, rest});
    }
    return coarsen(pvm, groups);
}

// ---------------------------------------------------------------------------
// Rotations about a fixed ket

std::size_t ComplementRotation::givens_count(std::size_t dim) {
    const std::size_t m = dim == 0 ? 0 : dim - 1;
    return m * (m == 0 ? 0 : m - 1) / 2;
}

ComplementRotation ComplementRotation::identity(std::size_t dim) {
    return ComplementRotation{std::vector<GivensAngle>(givens_count(dim)), {}};
}

ProjectiveDecomposition rotate_fixing_axis(const ProjectiveDecomposition &pvm, const std::string &fixed_label,
                                           const ComplementRotation &rotation) {
    if (!pvm.is_fine()) {
        throw InvariantError("fine decomposition", "rotate_fixing_axis needs all blocks of rank 1");
    }
    const auto fixed = pvm.index_of(fixed_label);
    if (!fixed) {
        throw std::out_of_range("unknown block label '" + fixed_label + "'");
    }
    const std::size_t dim = pvm.dim();
    const std::size_t m = dim - 1;
    if (rotation.givens.size() != ComplementRotation::givens_count(dim)) {
        throw InvariantError("rotation parameters", "expected " +
                                                        std::to_string(ComplementRotation::givens_count(dim)) +
                                                        " Givens angles for dim " + std::to_string(dim) + ", got " +
                                                        std::to_string(rotation.givens.size()));
    }
    if (!rotation.phases.empty() && rotation.phases.size() != m) {
        throw InvariantError("rotation parameters", "expected 0 or " + std::to_string(m) + " phases, got " +
                                                        std::to_string(rotation.phases.size()));
    }

    std::vector<std::size_t> complement;
    for (std::size_t i = 0; i < pvm.size(); ++i) {
        if (i != *fixed) {
            complement.push_back(i);
        }
    }
    std::vector<std::vector<Complex>> vs;
    for (std::size_t idx : complement) {
        const Ket k = pvm.ket(idx);
        vs.emplace_back(k.amplitudes().begin(), k.amplitudes().end());
    }

    std::size_t g = 0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b, ++g) {
            const auto &angle = rotation.givens[g];
            const double c = std::cos(angle.theta);
            const double s = std::sin(angle.theta);
            const Complex e = std::polar(1.0, angle.phase);
            for (std::size_t i = 0; i < dim; ++i) {
                const Complex va = vs[a][i];
                const Complex vb = vs[b][i];
                vs[a][i] = c * va + e * s * vb;
                vs[b][i] = -std::conj(e) * s * va + c * vb;
            }
        }
    }
    for (std::size_t a = 0; a < rotation.phases.size(); ++a) {
        const Complex e = std::polar(1.0, rotation.phases[a]);
        for (auto &z : vs[a]) {
            z *= e;
        }
    }

    std::vector<Block> blocks;
    blocks.reserve(pvm.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < pvm.size(); ++i) {
        if (i == *fixed) {
            blocks.push_back(pvm.block(i));
            continue;
        }
        // Renormalize away the O(eps) drift accumulated by the rotation chain.
        Ket k = Ket::normalized(std::move(vs[next++]));
        blocks.push_back(Block{pvm.block(i).label, projector_from_ket(k), k});
    }
    return ProjectiveDecomposition(std::move(blocks));
}

}  // namespace retro
