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
 * Randomized equivalence suite: closed-form retrodiction vs the Lüders oracle.
 *
 * Each trial draws one instance (rho, fine P, a random coarsening of P,
 * post-selection q, target) and checks every property below. Instances
 * serialize to JSON with round-trip-exact doubles so a failure can be replayed.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "retro/qla.h"
#include "retro/random_instances.h"

namespace retro {

struct OracleInstance {
    DensityOperator rho;
    ProjectiveDecomposition fine;
    std::vector<std::vector<std::string>> groups;
    Ket post;
    std::string target;
};

OracleInstance random_oracle_instance(random::Rng &rng, std::size_t dim);

nlohmann::json instance_to_json(const OracleInstance &instance);
OracleInstance instance_from_json(const nlohmann::json &doc);

struct PropertyOutcome {
    std::string property;
    /// Absolute deviation measured (0 for purely logical properties).
    double deviation;
    double tolerance;
    bool passed;
};

/// Properties:
///   abl_fine~oracle, abl_coarse~oracle, corrected_fine~abl_fine,
///   corrected_coarse~abl_coarse, normalization_fine, normalization_coarse,
///   classical_bridge, marginal_identity, error_cancellation.
std::vector<PropertyOutcome> check_instance(const OracleInstance &instance);

struct OracleCheckOptions {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::size_t max_dim = 4;
};

struct OracleCheckSummary {
    std::size_t trials = 0;
    std::size_t checks = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    /// Largest deviation among the closed-form/oracle equivalence properties.
    double worst_deviation = 0.0;
    std::string worst_property;
    /// Serialized instances with at least one failing property.
    std::vector<nlohmann::json> failures;

    bool ok() const { return failed == 0; }
};

/// Throws std::invalid_argument unless trials >= 1 and 2 <= max_dim <= 8.
OracleCheckSummary oracle_check(const OracleCheckOptions &options);

std::string render_summary(const OracleCheckSummary &summary);

}  // namespace retro
