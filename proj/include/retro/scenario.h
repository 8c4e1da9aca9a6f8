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
 * Declarative scenario files (JSON, `"version": 1`).
 *
 * ```json
 * {
 *   "version": 1,
 *   "dim": 2,
 *   "rho": {"pure": [[1, 0], [0, 0]]},            // or {"matrix": [[[re, im], ...], ...]}
 *   "slots": [
 *     {"name": "y", "labels": ["y+", "y-"], "kets": [[[0.7071, 0], [0, 0.7071]], ...]},
 *     {"name": "c", "coarsen": "y", "groups": [["y+"], ["y-"]], "labels": ["a", "b"]},
 *     {"name": "r", "rotate_fixing": "y", "fixed": "y+", "angles": [{"theta": 0.5, "phase": 0}], "phases": []}
 *   ],
 *   "queries": [
 *     {"kind": "abl", "slot": "y", "post": {"slot": "z", "label": "z-"}, "target": "y+"},
 *     {"kind": "oracle", "plan": ["y", "z"], "target": [{"ordinal": 1, "label": "y+"}],
 *      "given": [{"ordinal": 2, "label": "z-"}]}
 *   ]
 * }
 * ```
 *
 * Complex numbers are [re, im] pairs (a bare number is read as real).
 * `post` is either a slot/label reference to a rank-1 block or an amplitude list.
 * Query kinds: abl, naive, corrected, oracle, discrepancy, classical.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "retro/qla.h"
#include "retro/records.h"
#include "retro/retrodict.h"
#include "retro/sequence.h"

namespace retro {

/// Scenario validation failure addressed by a field path such as `slots[1].kets[0]`.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(std::string field, const std::string &message);
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

struct NamedDecomposition {
    std::string name;
    ProjectiveDecomposition decomposition;
};

/// abl / naive / corrected, and classical with a model extracted from the quantum instance.
struct RetrodictionSpec {
    RetrodictionQuery query;
};

struct OracleSpec {
    MeasurementPlan plan;
    std::vector<EventAtom> target;
    std::vector<EventAtom> given;
};

struct DiscrepancySpec {
    ProjectiveDecomposition slot;
    Ket post;
};

struct ClassicalSpec {
    ClassicalModel model;
    std::string q_label;
    std::string p_label;
    /// Set when the model was extracted from a quantum instance; its oracle is then the Lüders one.
    std::optional<RetrodictionQuery> quantum;
};

struct ScenarioQuery {
    std::string kind;
    nlohmann::json echo;
    std::variant<RetrodictionSpec, OracleSpec, DiscrepancySpec, ClassicalSpec> spec;
};

struct Scenario {
    std::size_t dim;
    DensityOperator rho;
    std::vector<NamedDecomposition> slots;
    std::vector<ScenarioQuery> queries;
};

/// Fully validates or throws ScenarioError; never returns a partial scenario.
Scenario parse_scenario(const nlohmann::json &doc);
Scenario load_scenario(const std::filesystem::path &path);

std::vector<ResultRecord> evaluate(const Scenario &scenario);

/// load_scenario + evaluate.
std::vector<ResultRecord> run_scenario(const std::filesystem::path &path);

}  // namespace retro
