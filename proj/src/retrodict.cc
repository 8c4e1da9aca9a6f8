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

#include "retro/retrodict.h"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "retro/tolerances.h"

namespace retro {

namespace {

Conditional ratio(double numerator, double denominator) {
    if (denominator <= tol::kZeroProbability) {
        return Conditional::undefined(denominator);
    }
    return Conditional::defined(numerator / denominator, denominator);
}

void require_fine(const ProjectiveDecomposition &p, const char *who) {
    if (!p.is_fine()) {
        throw InvariantError("fine decomposition", std::string(who) + " needs every block of rank 1");
    }
}

/// Tr(Q E rho E) = <q|E rho E|q>.
double post_selected_weight(const DensityOperator &rho, const Projector &e, const Ket &q) {
    const ComplexMatrix collapsed = e.matrix() * rho.matrix() * e.matrix();
    return sandwich(q, collapsed, q).real();
}

/// |<q|p>|^2 <p|rho|p>
double fine_weight(const DensityOperator &rho, const Ket &p, const Ket &q) {
    return std::norm(inner(q, p)) * sandwich(p, rho.matrix(), p).real();
}

}  // namespace

RetrodictionQuery::RetrodictionQuery(DensityOperator rho_in, ProjectiveDecomposition slot1_in, Ket slot2_ket_in,
                                     std::string target_label_in)
    : rho(std::move(rho_in)),
      slot1(std::move(slot1_in)),
      slot2_ket(std::move(slot2_ket_in)),
      target_label(std::move(target_label_in)) {
    if (rho.dim() != slot1.dim()) {
        throw DimensionError("retrodiction query: rho vs slot1", rho.dim(), slot1.dim());
    }
    if (rho.dim() != slot2_ket.dim()) {
        throw DimensionError("retrodiction query: rho vs post-selection ket", rho.dim(), slot2_ket.dim());
    }
    if (!slot1.index_of(target_label)) {
        throw std::out_of_range("target label '" + target_label + "' is not a block of slot1");
    }
}

RetrodictionQuery RetrodictionQuery::with_target(std::string label) const {
    return RetrodictionQuery(rho, slot1, slot2_ket, std::move(label));
}

Conditional abl_fine(const RetrodictionQuery &q) {
    require_fine(q.slot1, "abl_fine");
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t s = 0; s < q.slot1.size(); ++s) {
        const double w = fine_weight(q.rho, q.slot1.ket(s), q.slot2_ket);
        denominator += w;
        if (q.slot1.block(s).label == q.target_label) {
            numerator = w;
        }
    }
    return ratio(numerator, denominator);
}

Conditional abl_coarse(const RetrodictionQuery &q) {
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto &block : q.slot1.blocks()) {
        const double w = post_selected_weight(q.rho, block.projector, q.slot2_ket);
        denominator += w;
        if (block.label == q.target_label) {
            numerator = w;
        }
    }
    return ratio(numerator, denominator);
}

double corrected_marginal(const DensityOperator &rho, const ProjectiveDecomposition &slot1, const Ket &q) {
    const JointDistribution dist = joint_distribution(rho, retrodiction_plan(slot1, q));
    double s = 0.0;
    for (const auto &label : slot1.labels()) {
        s += dist.probability({label, kPostSelectedLabel});
    }
    return s;
}

Conditional corrected_bayes(const RetrodictionQuery &q) {
    const Projector post = projector_from_ket(q.slot2_ket);
    const LudersResult first = luders_update(q.rho, q.slot1.block(q.target_label).projector);
    double numerator = 0.0;
    if (first.post) {
        numerator = luders_update(*first.post, post).probability * first.probability;
    }
    return ratio(numerator, corrected_marginal(q.rho, q.slot1, q.slot2_ket));
}

Conditional naive_bayes(const RetrodictionQuery &q) {
    require_fine(q.slot1, "naive_bayes");
    const Ket p = q.slot1.ket(*q.slot1.index_of(q.target_label));
    return ratio(fine_weight(q.rho, p, q.slot2_ket), unmeasured_probability(q.rho, q.slot2_ket));
}

double naive_marginal(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q) {
    require_fine(p, "naive_marginal");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += fine_weight(rho, p.ket(i), q);
    }
    return s;
}

double unmeasured_probability(const DensityOperator &rho, const Ket &q) {
    return sandwich(q, rho.matrix(), q).real();
}

DiscrepancyReport margenau_discrepancy(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q) {
    DiscrepancyReport r{};
    r.naive_value = naive_marginal(rho, p, q);
    r.correct_value = unmeasured_probability(rho, q);
    const std::array<EventAtom, 1> q_only{EventAtom{1, kPostSelectedLabel}};
    r.oracle_value = event_probability(joint_distribution(rho, MeasurementPlan({post_selection_completion(q)})), q_only);
    r.observed_oracle_value = oracle_marginal(rho, p, q);
    r.gap = std::abs(*r.naive_value - r.correct_value);
    return r;
}

// ---------------------------------------------------------------------------
// Classical

ClassicalModel::ClassicalModel(std::map<std::string, double> prior,
                               std::map<std::string, std::map<std::string, double>> likelihood)
    : prior_(std::move(prior)), likelihood_(std::move(likelihood)) {
    if (prior_.empty()) {
        throw InvariantError("classical prior", "empty prior");
    }
    double total = 0.0;
    for (const auto &[label, p] : prior_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvariantError("classical prior", "Pr(" + label + ") outside [0,1]");
        }
        total += p;
    }
    if (!(std::abs(total - 1.0) <= tol::kClassicalModel)) {
        throw InvariantError("classical prior", "prior sums to " + std::to_string(total));
    }
    for (const auto &[p_label, unused] : prior_) {
        double row = 0.0;
        for (const auto &[q_label, given] : likelihood_) {
            const auto it = given.find(p_label);
            const double v = it == given.end() ? 0.0 : it->second;
            if (!(v >= 0.0 && v <= 1.0)) {
                throw InvariantError("classical likelihood", "Pr(" + q_label + "|" + p_label + ") outside [0,1]");
            }
            row += v;
        }
        if (!(std::abs(row - 1.0) <= tol::kClassicalModel)) {
            throw InvariantError("classical likelihood", "likelihoods given " + p_label + " sum to " +
                                                             std::to_string(row));
        }
    }
    for (const auto &[q_label, given] : likelihood_) {
        for (const auto &[p_label, unused] : given) {
            if (!prior_.count(p_label)) {
                throw InvariantError("classical likelihood", "unknown condition '" + p_label + "'");
            }
        }
    }
}

double ClassicalModel::likelihood(const std::string &q_label, const std::string &p_label) const {
    const auto row = likelihood_.find(q_label);
    if (row == likelihood_.end()) {
        throw std::out_of_range("unknown outcome '" + q_label + "'");
    }
    if (!prior_.count(p_label)) {
        throw std::out_of_range("unknown condition '" + p_label + "'");
    }
    const auto it = row->second.find(p_label);
    return it == row->second.end() ? 0.0 : it->second;
}

std::vector<std::string> ClassicalModel::q_labels() const {
    std::vector<std::string> out;
    for (const auto &[label, unused] : likelihood_) {
        out.push_back(label);
    }
    return out;
}

Conditional classical_retrodict(const ClassicalModel &m, const std::string &q_label, const std::string &p_label) {
    if (!m.prior().count(p_label)) {
        throw std::out_of_range("unknown condition '" + p_label + "'");
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto &[label, prior] : m.prior()) {
        const double w = m.likelihood(q_label, label) * prior;
        denominator += w;
        if (label == p_label) {
            numerator = w;
        }
    }
    return ratio(numerator, denominator);
}

ClassicalModel extract_classical_model(const DensityOperator &rho, const ProjectiveDecomposition &p, const Ket &q) {
    require_fine(p, "extract_classical_model");
    std::map<std::string, double> prior;
    std::map<std::string, std::map<std::string, double>> likelihood;
    double total = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        const Ket ps = p.ket(s);
        const double pr = std::clamp(sandwich(ps, rho.matrix(), ps).real(), 0.0, 1.0);
        const double lk = std::clamp(std::norm(inner(q, ps)), 0.0, 1.0);
        prior[p.block(s).label] = pr;
        total += pr;
        likelihood[kPostSelectedLabel][p.block(s).label] = lk;
        likelihood[kPostSelectedComplementLabel][p.block(s).label] = 1.0 - lk;
    }
    // Absorb the last-ulp drift of the diagonal so the model invariants hold at 1e-12.
    for (auto &[label, pr] : prior) {
        pr /= total;
    }
    return ClassicalModel(std::move(prior), std::move(likelihood));
}

// ---------------------------------------------------------------------------
// Oracle bridges

ProjectiveDecomposition post_selection_completion(const Ket &q) {
    const Projector qq = projector_from_ket(q);
    std::vector<Block> blocks;
    blocks.push_back(Block{kPostSelectedLabel, qq, q});
    if (q.dim() > 1) {
        blocks.push_back(
            Block{kPostSelectedComplementLabel, Projector(ComplexMatrix::identity(q.dim()) - qq.matrix()), std::nullopt});
    }
    return ProjectiveDecomposition(std::move(blocks));
}

MeasurementPlan retrodiction_plan(const ProjectiveDecomposition &slot1, const Ket &q) {
    return MeasurementPlan({slot1, post_selection_completion(q)});
}

Conditional oracle_retrodiction(const RetrodictionQuery &q) {
    const JointDistribution dist = joint_distribution(q.rho, retrodiction_plan(q.slot1, q.slot2_ket));
    const std::array<EventAtom, 1> target{EventAtom{1, q.target_label}};
    const std::array<EventAtom, 1> given{EventAtom{2, kPostSelectedLabel}};
    return conditional(dist, target, given);
}

double oracle_marginal(const DensityOperator &rho, const ProjectiveDecomposition &slot1, const Ket &q) {
    const JointDistribution dist = joint_distribution(rho, retrodiction_plan(slot1, q));
    const std::array<EventAtom, 1> given{EventAtom{2, kPostSelectedLabel}};
    return event_probability(dist, given);
}

// ---------------------------------------------------------------------------
// Scenarios

RetrodictionQuery margenau_query() {
    const double h = std::numbers::sqrt2 / 2.0;
    const Ket z_plus = Ket::basis(2, 0);
    const Ket z_minus = Ket::basis(2, 1);
    const Ket y_plus({Complex(h, 0.0), Complex(0.0, h)});
    const Ket y_minus({Complex(h, 0.0), Complex(0.0, -h)});
    return RetrodictionQuery(DensityOperator::pure(z_plus), pvm_from_kets({y_plus, y_minus}, {"y+", "y-"}), z_minus,
                             "y+");
}

RotatedComparison rotated_basis_comparison(const DensityOperator &rho, const ProjectiveDecomposition &p,
                                           const Ket &q, const std::string &fixed_label,
                                           const ComplementRotation &rotation) {
    ProjectiveDecomposition p_prime = rotate_fixing_axis(p, fixed_label, rotation);
    const RetrodictionQuery under_p(rho, p, q, fixed_label);
    const RetrodictionQuery under_p_prime(rho, p_prime, q, fixed_label);
    return RotatedComparison{abl_fine(under_p), abl_fine(under_p_prime), oracle_retrodiction(under_p),
                             oracle_retrodiction(under_p_prime), std::move(p_prime)};
}

ThreeBoxInstance three_box_instance() {
    const double a = 1.0 / std::numbers::sqrt3;
    const Ket psi({a, a, a});
    const Ket phi({a, a, -a});
    ProjectiveDecomposition boxes =
        pvm_from_kets({Ket::basis(3, 0), Ket::basis(3, 1), Ket::basis(3, 2)}, {"box1", "box2", "box3"});
    return ThreeBoxInstance{DensityOperator::pure(psi), std::move(boxes), phi};
}

RotatedInstance rotated_instance() {
    ThreeBoxInstance tb = three_box_instance();
    ComplementRotation rotation = ComplementRotation::identity(3);
    rotation.givens[0].theta = std::numbers::pi / 4.0;
    return RotatedInstance{std::move(tb.rho), std::move(tb.boxes), std::move(tb.post), "box1", std::move(rotation)};
}

ThreeBoxReport three_box_scenario() {
    const ThreeBoxInstance tb = three_box_instance();
    const RetrodictionQuery box1(tb.rho, binary_observation(tb.boxes, "box1"), tb.post, "box1");
    const RetrodictionQuery box2(tb.rho, binary_observation(tb.boxes, "box2"), tb.post, "box2");
    ThreeBoxReport report{abl_coarse(box1), oracle_retrodiction(box1), abl_coarse(box2), oracle_retrodiction(box2),
                          {}, {}};
    for (const auto &label : tb.boxes.labels()) {
        const RetrodictionQuery fine(tb.rho, tb.boxes, tb.post, label);
        report.fine.push_back(abl_fine(fine));
        report.fine_oracle.push_back(oracle_retrodiction(fine));
    }
    return report;
}

}  // namespace retro
