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

#include "retro/records.h"

#include <iomanip>
#include <sstream>

namespace retro {

namespace {

nlohmann::json optional_to_json(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json &j, const char *key) {
    const auto &v = j.at(key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<double>();
}

std::string pad(const std::string &s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

nlohmann::json records_to_json(const std::vector<ResultRecord> &records) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &r : records) {
        nlohmann::json j;
        j["index"] = r.index;
        j["kind"] = r.kind;
        j["query"] = r.query;
        j["method"] = r.method;
        j["value"] = optional_to_json(r.value);
        j["oracle"] = optional_to_json(r.oracle);
        j["gap"] = optional_to_json(r.gap);
        j["conditioning_probability"] = optional_to_json(r.conditioning_probability);
        j["details"] = r.details;
        out.push_back(std::move(j));
    }
    return nlohmann::json{{"version", 1}, {"records", std::move(out)}};
}

std::vector<ResultRecord> records_from_json(const nlohmann::json &doc) {
    if (doc.at("version").get<int>() != 1) {
        throw std::invalid_argument("unsupported records version");
    }
    std::vector<ResultRecord> out;
    for (const auto &j : doc.at("records")) {
        ResultRecord r;
        r.index = j.at("index").get<std::size_t>();
        r.kind = j.at("kind").get<std::string>();
        r.query = j.at("query");
        r.method = j.at("method").get<std::string>();
        r.value = optional_from_json(j, "value");
        r.oracle = optional_from_json(j, "oracle");
        r.gap = optional_from_json(j, "gap");
        r.conditioning_probability = optional_from_json(j, "conditioning_probability");
        r.details = j.at("details").get<std::map<std::string, double>>();
        out.push_back(std::move(r));
    }
    return out;
}

std::string serialize_records(const std::vector<ResultRecord> &records) {
    return records_to_json(records).dump(2) + "\n";
}

bool strict_violation(const std::vector<ResultRecord> &records) {
    for (const auto &r : records) {
        if (!r.value || (r.gap && *r.gap > kStrictGap)) {
            return true;
        }
    }
    return false;
}

std::string format_probability(const std::optional<double> &p) {
    if (!p) {
        return kUndefinedToken;
    }
    std::ostringstream out;
    out << std::setprecision(12) << *p;
    return out.str();
}

std::string render_table(const std::vector<ResultRecord> &records) {
    std::ostringstream out;
    out << pad("#", 4) << pad("kind", 12) << pad("method", 20) << pad("value", 24) << pad("oracle", 24) << "gap\n";
    for (const auto &r : records) {
        out << pad(std::to_string(r.index), 4) << pad(r.kind, 12) << pad(r.method, 20);
        if (r.value) {
            out << pad(format_probability(r.value), 24);
        } else {
            out << format_probability(r.value) << "  ";
        }
        out << pad(r.oracle ? format_probability(r.oracle) : "-", 24);
        out << (r.gap ? format_probability(r.gap) : "-") << "\n";
        for (const auto &[key, v] : r.details) {
            out << "      " << key << " = " << format_probability(v) << "\n";
        }
    }
    return out.str();
}

}  // namespace retro
