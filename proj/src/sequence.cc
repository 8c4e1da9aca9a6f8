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

#include "retro/sequence.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "retro/tolerances.h"

namespace retro {

MeasurementPlan::MeasurementPlan(std::vector<ProjectiveDecomposition> slots) : dim_(0), slots_(std::move(slots)) {
    if (slots_.empty()) {
        throw InvariantError("measurement plan", "a plan needs at least one slot");
    }
    dim_ = slots_.front().dim();
    for (const auto &s : slots_) {
        if (s.dim() != dim_) {
            throw DimensionError("measurement plan slot", dim_, s.dim());
        }
    }
}

const ProjectiveDecomposition &MeasurementPlan::slot(std::size_t ordinal) const {
    if (ordinal == 0 || ordinal > slots_.size()) {
        throw std::out_of_range("ordinal " + std::to_string(ordinal) + " outside plan of " +
                                std::to_string(slots_.size()) + " slots");
    }
    return slots_[ordinal - 1];
}

LudersResult luders_update(const DensityOperator &rho, const Projector &p) {
    if (rho.dim() != p.dim()) {
        throw DimensionError("luders_update", rho.dim(), p.dim());
    }
    ComplexMatrix collapsed = p.matrix() * rho.matrix() * p.matrix();
    const double prob = std::clamp(collapsed.trace().real(), 0.0, 1.0);
    if (prob <= tol::kZeroProbability) {
        return {prob, std::nullopt};
    }
    if (p.rank() == 1) {
        // P rho P = <v|rho|v> P, so the normalized state is P itself.
        return {prob, DensityOperator(p.matrix())};
    }
    collapsed = Complex(1.0 / prob) * collapsed;
    collapsed = 0.5 * (collapsed + collapsed.adjoint());
    // Re-pin the trace: prob may have been clamped against round-off.
    collapsed = Complex(1.0 / collapsed.trace().real()) * collapsed;
    return {prob, DensityOperator(std::move(collapsed))};
}

JointDistribution::JointDistribution(MeasurementPlan plan, std::vector<double> table)
    : plan_(std::move(plan)), table_(std::move(table)) {
    std::size_t total = 1;
    strides_.assign(plan_.size(), 1);
    for (std::size_t t = plan_.size(); t-- > 0;) {
        strides_[t] = total;
        total *= plan_.slots()[t].size();
    }
    if (table_.size() != total) {
        throw InvariantError("completeness", "table has " + std::to_string(table_.size()) + " entries, expected " +
                                                 std::to_string(total));
    }
    double sum = 0.0;
    for (double p : table_) {
        if (!(p >= tol::kNegativeEntry)) {
            throw InvariantError("non-negativity", "entry " + std::to_string(p));
        }
        sum += p;
    }
    if (!(std::abs(sum - 1.0) <= tol::kNormalization)) {
        throw InvariantError("normalization", "table sums to " + std::to_string(sum));
    }
}

std::vector<std::size_t> JointDistribution::block_indices(std::size_t flat_index) const {
    std::vector<std::size_t> idx(plan_.size());
    for (std::size_t t = 0; t < plan_.size(); ++t) {
        idx[t] = (flat_index / strides_[t]) % plan_.slots()[t].size();
    }
    return idx;
}

std::vector<JointDistribution::Entry> JointDistribution::entries() const {
    std::vector<Entry> out;
    out.reserve(table_.size());
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const auto idx = block_indices(i);
        OutcomeSequence seq;
        seq.reserve(idx.size());
        for (std::size_t t = 0; t < idx.size(); ++t) {
            seq.push_back(plan_.slots()[t].block(idx[t]).label);
        }
        out.push_back(Entry{std::move(seq), probability_at(i)});
    }
    return out;
}

double JointDistribution::probability_at(std::size_t flat_index) const {
    return std::max(0.0, table_.at(flat_index));
}

double JointDistribution::probability(const OutcomeSequence &outcomes) const {
    if (outcomes.size() != plan_.size()) {
        throw InvariantError("outcome sequence", "expected " + std::to_string(plan_.size()) + " labels, got " +
                                                     std::to_string(outcomes.size()));
    }
    std::size_t flat = 0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto idx = plan_.slots()[t].index_of(outcomes[t]);
        if (!idx) {
            throw std::out_of_range("unknown label '" + outcomes[t] + "' at ordinal " + std::to_string(t + 1));
        }
        flat += *idx * strides_[t];
    }
    return probability_at(flat);
}

namespace {

void enumerate(const MeasurementPlan &plan, std::size_t slot, const DensityOperator &rho, double weight,
               std::size_t flat, std::size_t stride_base, std::vector<double> &table) {
    const auto &decomposition = plan.slots()[slot];
    const std::size_t stride = stride_base / decomposition.size();
    for (std::size_t b = 0; b < decomposition.size(); ++b) {
        const std::size_t here = flat + b * stride;
        const Projector &projector = decomposition.block(b).projector;
        if (slot + 1 == plan.size()) {
            const ComplexMatrix collapsed = projector.matrix() * rho.matrix() * projector.matrix();
            table[here] = weight * std::clamp(collapsed.trace().real(), 0.0, 1.0);
            continue;
        }
        const LudersResult branch = luders_update(rho, projector);
        const double w = weight * branch.probability;
        if (branch.post) {
            enumerate(plan, slot + 1, *branch.post, w, here, stride, table);
        }
        // Descendants of a zero branch keep their exact 0.
    }
}

std::map<std::size_t, std::size_t> resolve_atoms(const JointDistribution &dist, std::span<const EventAtom> atoms) {
    std::map<std::size_t, std::size_t> fixed;
    for (const auto &atom : atoms) {
        const auto &slot = dist.plan().slot(atom.ordinal);
        const auto idx = slot.index_of(atom.label);
        if (!idx) {
            throw std::out_of_range("unknown label '" + atom.label + "' at ordinal " + std::to_string(atom.ordinal));
        }
        if (!fixed.emplace(atom.ordinal, *idx).second) {
            throw std::invalid_argument("duplicate ordinal " + std::to_string(atom.ordinal) + " among event atoms");
        }
    }
    return fixed;
}

double sum_matching(const JointDistribution &dist, const std::map<std::size_t, std::size_t> &fixed) {
    double s = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto idx = dist.block_indices(i);
        const bool match = std::all_of(fixed.begin(), fixed.end(),
                                       [&](const auto &kv) { return idx[kv.first - 1] == kv.second; });
        if (match) {
            s += dist.probability_at(i);
        }
    }
    return s;
}

}  // namespace

JointDistribution joint_distribution(const DensityOperator &rho, const MeasurementPlan &plan) {
    if (rho.dim() != plan.dim()) {
        throw DimensionError("joint_distribution", rho.dim(), plan.dim());
    }
    std::size_t total = 1;
    for (const auto &s : plan.slots()) {
        total *= s.size();
    }
    std::vector<double> table(total, 0.0);
    enumerate(plan, 0, rho, 1.0, 0, total, table);
    return JointDistribution(plan, std::move(table));
}

double event_probability(const JointDistribution &dist, std::span<const EventAtom> atoms) {
    return sum_matching(dist, resolve_atoms(dist, atoms));
}

Conditional conditional(const JointDistribution &dist, std::span<const EventAtom> target,
                        std::span<const EventAtom> given) {
    const auto given_fixed = resolve_atoms(dist, given);
    const auto target_fixed = resolve_atoms(dist, target);
    const double denominator = sum_matching(dist, given_fixed);
    if (denominator <= tol::kZeroProbability) {
        return Conditional::undefined(denominator);
    }
    auto joint = given_fixed;
    for (const auto &[ordinal, idx] : target_fixed) {
        auto [it, inserted] = joint.emplace(ordinal, idx);
        if (!inserted && it->second != idx) {
            return Conditional::defined(0.0, denominator);
        }
    }
    return Conditional::defined(sum_matching(dist, joint) / denominator, denominator);
}

}  // namespace retro
