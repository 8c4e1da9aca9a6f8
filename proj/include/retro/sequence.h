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
 * Exact joint distributions over outcome sequences of projective
 * measurements, built by chaining Lüders updates.
 *
 * A distribution only exists relative to a full MeasurementPlan. Marginal
 * queries sum over the outcomes of slots that *were* observed; there is no way
 * to ask for the probability of a later outcome while pretending an earlier
 * slot was never measured. Comparing "measured and ignored" against "never
 * measured" requires two different plans.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retro/qla.h"

namespace retro {

/// Outcome `label` at 1-based time slot `ordinal`.
struct EventAtom {
    std::size_t ordinal;
    std::string label;

    friend bool operator==(const EventAtom &, const EventAtom &) = default;
};

/// Ordered observations; slot t is the t-th measurement. Evolution between slots is the identity.
class MeasurementPlan {
  public:
    explicit MeasurementPlan(std::vector<ProjectiveDecomposition> slots);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return slots_.size(); }
    const std::vector<ProjectiveDecomposition> &slots() const { return slots_; }
    /// 1-based.
    const ProjectiveDecomposition &slot(std::size_t ordinal) const;

  private:
    std::size_t dim_;
    std::vector<ProjectiveDecomposition> slots_;
};

/// One label per slot.
using OutcomeSequence = std::vector<std::string>;

/// Result of a single Lüders update. `post` is absent on a zero-probability branch.
struct LudersResult {
    double probability;
    std::optional<DensityOperator> post;

    bool zero_branch() const { return !post.has_value(); }
};

/// prob = Tr(P rho P) clamped to [0,1]; post = P rho P / prob unless prob <= 1e-14.
LudersResult luders_update(const DensityOperator &rho, const Projector &p);

/// Exact table over the full outcome product space of a plan.
class JointDistribution {
  public:
    struct Entry {
        OutcomeSequence outcomes;
        double probability;
    };

    JointDistribution(MeasurementPlan plan, std::vector<double> table);

    const MeasurementPlan &plan() const { return plan_; }
    std::size_t size() const { return table_.size(); }

    /// Entries in enumeration order: block order within each slot, last slot fastest.
    std::vector<Entry> entries() const;
    /// Negative round-off is clamped to 0.
    double probability(const OutcomeSequence &outcomes) const;
    double probability_at(std::size_t flat_index) const;
    std::vector<std::size_t> block_indices(std::size_t flat_index) const;

  private:
    MeasurementPlan plan_;
    std::vector<double> table_;
    std::vector<std::size_t> strides_;
};

JointDistribution joint_distribution(const DensityOperator &rho, const MeasurementPlan &plan);

/// Sum of entries matching every atom; slots without an atom are summed over.
/// Throws on duplicate ordinals, ordinals outside the plan, or unknown labels.
double event_probability(const JointDistribution &dist, std::span<const EventAtom> atoms);

/// Either a value or the (vanishing) conditioning probability that made it undefined.
class Conditional {
  public:
    static Conditional defined(double value, double conditioning_probability) {
        return Conditional(value, conditioning_probability);
    }
    static Conditional undefined(double conditioning_probability) {
        return Conditional(std::nullopt, conditioning_probability);
    }

    bool is_defined() const { return value_.has_value(); }
    explicit operator bool() const { return is_defined(); }
    /// Throws std::bad_optional_access when undefined.
    double value() const { return value_.value(); }
    const std::optional<double> &maybe() const { return value_; }
    double conditioning_probability() const { return conditioning_probability_; }

  private:
    Conditional(std::optional<double> v, double c) : value_(v), conditioning_probability_(c) {}

    std::optional<double> value_;
    double conditioning_probability_;
};

/// P(target and given) / P(given). Atoms sharing an ordinal across target and
/// given must agree, otherwise the joint event is empty and the value is 0.
/// Undefined when P(given) <= 1e-14.
Conditional conditional(const JointDistribution &dist, std::span<const EventAtom> target,
                        std::span<const EventAtom> given);

}  // namespace retro
