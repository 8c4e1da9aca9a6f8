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
 * Closed-form retrodiction formulas, correct and deliberately naive, and the
 * named scenarios that show where the naive derivation breaks.
 *
 * Every closed form here has an independent counterpart in the sequence
 * oracle (`oracle_retrodiction`, `oracle_marginal`), built from a two-slot
 * MeasurementPlan [slot1, {Q, 1 - Q}] with Q = |q><q|.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "retro/qla.h"
#include "retro/sequence.h"

namespace retro {

/// Retrodict `target_label` of the earlier observation `slot1` from the later outcome |slot2_ket>.
struct RetrodictionQuery {
    DensityOperator rho;
    ProjectiveDecomposition slot1;
    Ket slot2_ket;
    std::string target_label;

    /// Validates dimensions and the target label.
    RetrodictionQuery(DensityOperator rho, ProjectiveDecomposition slot1, Ket slot2_ket, std::string target_label);

    RetrodictionQuery with_target(std::string label) const;
};

// --- Correct formulas --------------------------------------------------------

/**
 * The ABL retrodiction formula for a fine slot1:
 *
 *   |<q|p_j>|^2 <p_j|rho|p_j> / sum_s |<q|p_s>|^2 <p_s|rho|p_s>
 *
 * Undefined when the denominator is <= 1e-14 (the post-selected outcome never occurs).
 */
Conditional abl_fine(const RetrodictionQuery &q);

/// General projective slot1: Tr(Q E_j rho E_j) / sum_E Tr(Q E rho E).
/// Reduces to `abl_fine` when every block has rank 1.
Conditional abl_coarse(const RetrodictionQuery &q);

/// Probability of q after the complete slot1 observation whose result is ignored:
/// sum over blocks of Tr(Q E rho E), read from the two-slot oracle table.
double corrected_marginal(const DensityOperator &rho, const ProjectiveDecomposition &slot1, const Ket &q);

/**
 * Bayes with the ignored observation made explicit:
 *
 *   P(p_j | M_P and q) = P(q | p_j) P(p_j) / P(M_P and q)
 *
 * The numerator comes from Lüders branch probabilities, the denominator from
 * `corrected_marginal`.
 */
Conditional corrected_bayes(const RetrodictionQuery &q);

// --- Naive formulas (intentionally flawed) -----------------------------------

/// Bayes with the unmeasured denominator <q|rho|q>. Fine slot1 only.
/// Values above 1 are returned unchanged.
Conditional naive_bayes(const RetrodictionQuery &q);

/// sum_s |<p_s|q>|^2 <p_s|rho|p_s>, fine P only. Presented in the naive
/// derivation as the probability of q; it is really the probability of q
/// after an ignored complete observation of P.
double naive_marginal(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q);

/// <q|rho|q>, the probability of q with no earlier observation.
double unmeasured_probability(const DensityOperator &rho, const Ket &q);

// --- Reports -----------------------------------------------------------------

struct DiscrepancyReport {
    /// The naive marginal, claimed to be P(q).
    std::optional<double> naive_value;
    /// <q|rho|q>: the Born probability of q when nothing is observed first.
    double correct_value;
    /// One-slot oracle plan [{Q, 1 - Q}]: must equal `correct_value`.
    double oracle_value;
    /// Two-slot oracle plan [P, {Q, 1 - Q}]: what the naive marginal actually computes.
    double observed_oracle_value;
    /// |naive_value - correct_value|.
    std::optional<double> gap;
};

/// Naive marginal vs the unmeasured Born probability. Zero gap iff the two agree,
/// e.g. when rho commutes with P or is one of its projectors.
DiscrepancyReport margenau_discrepancy(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q);

// --- Classical retrodiction --------------------------------------------------

class ClassicalModel {
  public:
    /// `likelihood[q][p]` = P(q | p). For each p, the q-row sums to 1.
    ClassicalModel(std::map<std::string, double> prior, std::map<std::string, std::map<std::string, double>> likelihood);

    const std::map<std::string, double> &prior() const { return prior_; }
    double likelihood(const std::string &q_label, const std::string &p_label) const;
    std::vector<std::string> q_labels() const;

  private:
    std::map<std::string, double> prior_;
    std::map<std::string, std::map<std::string, double>> likelihood_;
};

/// P(q|p_j) P(p_j) / sum_s P(q|p_s) P(p_s).
Conditional classical_retrodict(const ClassicalModel &m, const std::string &q_label, const std::string &p_label);

/// Prior <p_s|rho|p_s>, likelihood |<q|p_s>|^2 with q-outcomes "q" and "not q".
ClassicalModel extract_classical_model(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q);

inline constexpr const char *kPostSelectedLabel = "q";
inline constexpr const char *kPostSelectedComplementLabel = "not q";

// --- Oracle bridges ----------------------------------------------------------

/// {Q, 1 - Q} completion of a post-selection ket, labelled "q" / "not q".
ProjectiveDecomposition post_selection_completion(const Ket &q);

/// Plan [slot1, {Q, 1 - Q}].
MeasurementPlan retrodiction_plan(const ProjectiveDecomposition &slot1, const Ket &q);

/// Brute-force conditional P(target^[1] | q^[2]) over `retrodiction_plan`.
Conditional oracle_retrodiction(const RetrodictionQuery &q);

/// Brute-force P(q^[2]) over `retrodiction_plan`, slot 1 summed.
double oracle_marginal(const DensityOperator &rho, const ProjectiveDecomposition &slot1, const Ket &q);

// --- Named scenarios ---------------------------------------------------------

/// Spin-1/2 prepared in z+, earlier observation in the y basis ("y+", "y-"),
/// post-selected on z-, asking about y+.
RetrodictionQuery margenau_query();

struct RotatedComparison {
    Conditional value_p;
    Conditional value_p_prime;
    Conditional oracle_p;
    Conditional oracle_p_prime;
    ProjectiveDecomposition p_prime;
};

/// abl_fine for `fixed_label` under P and under P' = rotate_fixing_axis(P, fixed_label, rotation).
RotatedComparison rotated_basis_comparison(const DensityOperator &rho, const ProjectiveDecomposition &p,
                                           const Ket &q, const std::string &fixed_label,
                                           const ComplementRotation &rotation);

/// Three boxes: psi = (1,1,1)/sqrt3, phi = (1,1,-1)/sqrt3, box basis labelled "box1".."box3".
struct ThreeBoxInstance {
    DensityOperator rho;
    ProjectiveDecomposition boxes;
    Ket post;
};
ThreeBoxInstance three_box_instance();

/// Rotated-basis instance on the three-box vectors: P = box basis, pi/4 rotation of boxes 2 and 3.
struct RotatedInstance {
    DensityOperator rho;
    ProjectiveDecomposition p;
    Ket post;
    std::string fixed_label;
    ComplementRotation rotation;
};
RotatedInstance rotated_instance();

struct ThreeBoxReport {
    /// Closed form and oracle for box1 under {P1, not P1}.
    Conditional coarse_box1;
    Conditional coarse_box1_oracle;
    /// Closed form and oracle for box2 under {P2, not P2}.
    Conditional coarse_box2;
    Conditional coarse_box2_oracle;
    /// abl_fine per box under the full box basis, with oracles.
    std::vector<Conditional> fine;
    std::vector<Conditional> fine_oracle;
};
ThreeBoxReport three_box_scenario();

}  // namespace retro
