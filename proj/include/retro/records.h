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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace retro {

/// Rendered in place of a value whose conditioning event has vanishing probability.
inline constexpr const char *kUndefinedToken = "undefined (conditioning probability < 1e-14)";

/// Closed-form/oracle gaps above this make `--strict` fail.
inline constexpr double kStrictGap = 1e-9;

/// One evaluated scenario query.
struct ResultRecord {
    std::size_t index = 0;
    std::string kind;
    nlohmann::json query;
    std::string method;
    std::optional<double> value;
    std::optional<double> oracle;
    /// |value - oracle| when both exist and a closed form was evaluated.
    std::optional<double> gap;
    /// Present when value or oracle is undefined.
    std::optional<double> conditioning_probability;
    std::map<std::string, double> details;

    friend bool operator==(const ResultRecord &, const ResultRecord &) = default;
};

nlohmann::json records_to_json(const std::vector<ResultRecord> &records);
/// Throws nlohmann::json::exception on schema mismatch.
std::vector<ResultRecord> records_from_json(const nlohmann::json &doc);

/// Machine-readable document, byte-stable for equal inputs.
std::string serialize_records(const std::vector<ResultRecord> &records);

/// True iff any record is undefined or carries a gap above kStrictGap.
bool strict_violation(const std::vector<ResultRecord> &records);

/// 12 significant digits, or kUndefinedToken.
std::string format_probability(const std::optional<double> &p);

/// Human-readable table, one row per record plus detail lines.
std::string render_table(const std::vector<ResultRecord> &records);

}  // namespace retro
