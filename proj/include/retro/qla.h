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

/**
 * @file
 * Small dense complex linear algebra and validated quantum objects:
 * kets, density operators, projectors and projective decompositions (PVMs).
 *
 * Every type validates its invariants on construction and is immutable
 * afterwards. Violations throw `retro::InvariantError` (numeric invariant) or
 * `retro::DimensionError` (non-conformable shapes).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace retro {

using Complex = std::complex<double>;

/// Non-conformable operands.
class DimensionError : public std::invalid_argument {
  public:
    DimensionError(const std::string &what, std::size_t lhs, std::size_t rhs);
    std::size_t lhs_dim() const { return lhs_; }
    std::size_t rhs_dim() const { return rhs_; }

  private:
    std::size_t lhs_;
    std::size_t rhs_;
};

/// A named numeric or structural invariant failed during construction.
class InvariantError : public std::invalid_argument {
  public:
    InvariantError(std::string invariant, const std::string &detail);
    const std::string &invariant() const { return invariant_; }

  private:
    std::string invariant_;
};

/// Square complex matrix, row-major.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

    std::size_t dim() const { return dim_; }
    const Complex &operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    Complex &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    std::span<const Complex> entries() const { return entries_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// max_ij |a_ij|
    double max_norm() const;

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix &a);
    friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) = default;

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

/// Free-function spellings of the matrix family.
ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix adjoint(const ComplexMatrix &a);
ComplexMatrix scale(Complex s, const ComplexMatrix &a);
Complex trace(const ComplexMatrix &a);
double max_norm(const ComplexMatrix &a);
/// ‖a - b‖_max
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic Jacobi).
/// Only the Hermitian part of `a` is used.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &a);

/// Unit-norm state vector.
class Ket {
  public:
    explicit Ket(std::vector<Complex> amplitudes);
    /// Normalizes `raw` first; throws if it is (numerically) the zero vector.
    static Ket normalized(std::vector<Complex> raw);
    static Ket basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    friend bool operator==(const Ket &a, const Ket &b) = default;

  private:
    std::vector<Complex> amplitudes_;
};

/// <a|b>
Complex inner(const Ket &a, const Ket &b);
/// <a|M|b>
Complex sandwich(const Ket &a, const ComplexMatrix &m, const Ket &b);
/// |a><b|
ComplexMatrix outer(const Ket &a, const Ket &b);

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOperator {
  public:
    explicit DensityOperator(ComplexMatrix matrix);
    static DensityOperator pure(const Ket &psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    std::size_t dim() const { return matrix_.dim(); }
    const ComplexMatrix &matrix() const { return matrix_; }

  private:
    ComplexMatrix matrix_;
};

/// Orthogonal projector with its rank.
class Projector {
  public:
    explicit Projector(ComplexMatrix matrix);

    std::size_t dim() const { return matrix_.dim(); }
    std::size_t rank() const { return rank_; }
    const ComplexMatrix &matrix() const { return matrix_; }

  private:
    ComplexMatrix matrix_;
    std::size_t rank_;
};

/// |v><v| for a unit v.
Projector projector_from_ket(const Ket &v);

/// One outcome of a projective measurement.
struct Block {
    std::string label;
    Projector projector;
    /// Present for rank-1 blocks built from a ket; rotations preserve it verbatim.
    std::optional<Ket> ket;
};

/// Complete set of mutually orthogonal projectors with string labels.
class ProjectiveDecomposition {
  public:
    /// Validates orthogonality, completeness, label uniqueness and that
    /// every stored ket reproduces its projector.
    explicit ProjectiveDecomposition(std::vector<Block> blocks);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<Block> &blocks() const { return blocks_; }
    const Block &block(std::size_t index) const { return blocks_.at(index); }
    /// Throws std::out_of_range naming the label.
    const Block &block(const std::string &label) const;
    std::optional<std::size_t> index_of(const std::string &label) const;
    std::vector<std::string> labels() const;

    /// Every block has rank 1.
    bool is_fine() const;
    /// Ket of a rank-1 block: the stored ket when present, otherwise one
    /// recovered from the projector (defined up to a global phase).
    Ket ket(std::size_t index) const;

  private:
    std::size_t dim_;
    std::vector<Block> blocks_;
};

/// Fine decomposition, one rank-1 block per ket. Labels default to "1".."d".
ProjectiveDecomposition pvm_from_kets(const std::vector<Ket> &kets, std::vector<std::string> labels = {});

/// A group of existing labels merged into one block named `label`.
struct LabelGroup {
    std::string label;
    std::vector<std::string> members;
};

/// Sums the projectors in each group. Groups must partition the label set.
ProjectiveDecomposition coarsen(const ProjectiveDecomposition &pvm, const std::vector<LabelGroup> &groups);

/// Convenience: groups given as label lists, output labels joined with "|".
ProjectiveDecomposition coarsen(const ProjectiveDecomposition &pvm,
                                const std::vector<std::vector<std::string>> &groups);

/// Two-block observation {P_label, 1 - P_label}: "label" and "not label".
ProjectiveDecomposition binary_observation(const ProjectiveDecomposition &pvm, const std::string &label);

/**
 * Givens rotation between complement kets `first` < `second` (positions in
 * the complement, i.e. block order with the fixed block removed):
 *   a' =  cos(theta) a + e^{i phase} sin(theta) b
 *   b' = -e^{-i phase} sin(theta) a + cos(theta) b
 */
struct GivensAngle {
    double theta = 0.0;
    double phase = 0.0;
};

/**
 * Unitary on the orthogonal complement of a fixed ket.
 *
 * `givens` has exactly m(m-1)/2 entries (m = dim - 1), applied in canonical
 * pair order (0,1), (0,2), ..., (0,m-1), (1,2), ...; `phases` is empty or has
 * m entries, applied last as e^{i phase_a} on complement ket a.
 */
struct ComplementRotation {
    std::vector<GivensAngle> givens;
    std::vector<double> phases;

    static std::size_t givens_count(std::size_t dim);
    /// All-zero rotation of the right shape.
    static ComplementRotation identity(std::size_t dim);
};

/// Rotates every ket except `fixed_label`'s, which is copied unchanged.
ProjectiveDecomposition rotate_fixing_axis(const ProjectiveDecomposition &pvm, const std::string &fixed_label,
                                           const ComplementRotation &rotation);

}  // namespace retro
