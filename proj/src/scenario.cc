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

#include "retro/scenario.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "retro/tolerances.h"

namespace retro {

using nlohmann::json;

ScenarioError::ScenarioError(std::string field, const std::string &message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {
}

namespace {

/// Runs `fn`, re-addressing any domain error to `field`.
template <typename Fn>
auto at_field(const std::string &field, Fn &&fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ScenarioError &) {
        throw;
    } catch (const InvariantError &e) {
        throw ScenarioError(field, std::string("invariant '") + e.invariant() + "' violated: " + e.what());
    } catch (const json::exception &e) {
        throw ScenarioError(field, e.what());
    } catch (const std::exception &e) {
        throw ScenarioError(field, e.what());
    }
}

const json &require(const json &obj, const std::string &path, const char *key) {
    if (!obj.is_object()) {
        throw ScenarioError(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ScenarioError(path + "." + key, "missing required field");
    }
    return *it;
}

std::string require_string(const json &obj, const std::string &path, const char *key) {
    const json &v = require(obj, path, key);
    if (!v.is_string()) {
        throw ScenarioError(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

const json &require_array(const json &v, const std::string &path) {
    if (!v.is_array()) {
        throw ScenarioError(path, "expected an array");
    }
    return v;
}

double require_number(const json &v, const std::string &path) {
    if (!v.is_number()) {
        throw ScenarioError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ScenarioError(path, "expected a finite number");
    }
    return x;
}

Complex parse_complex(const json &v, const std::string &path) {
    if (v.is_number()) {
        return {require_number(v, path), 0.0};
    }
    if (!v.is_array() || v.size() != 2) {
        throw ScenarioError(path, "expected a complex number [re, im]");
    }
    return {require_number(v[0], path + "[0]"), require_number(v[1], path + "[1]")};
}

std::vector<Complex> parse_amplitudes(const json &v, const std::string &path, std::size_t dim) {
    require_array(v, path);
    if (v.size() != dim) {
        throw ScenarioError(path, "expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(v.size()));
    }
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(parse_complex(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Ket parse_ket(const json &v, const std::string &path, std::size_t dim) {
    auto amps = parse_amplitudes(v, path, dim);
    return at_field(path, [&] { return Ket(std::move(amps)); });
}

std::vector<std::string> parse_string_list(const json &v, const std::string &path) {
    require_array(v, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) {
            throw ScenarioError(path + "[" + std::to_string(i) + "]", "expected a string");
        }
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

DensityOperator parse_rho(const json &v, std::size_t dim) {
    const std::string path = "rho";
    if (!v.is_object()) {
        throw ScenarioError(path, "expected an object with 'pure' or 'matrix'");
    }
    if (v.contains("pure") == v.contains("matrix")) {
        throw ScenarioError(path, "exactly one of 'pure' or 'matrix' is required");
    }
    if (v.contains("pure")) {
        const Ket psi = parse_ket(v["pure"], path + ".pure", dim);
        return at_field(path, [&] { return DensityOperator::pure(psi); });
    }
    const json &rows = require_array(v["matrix"], path + ".matrix");
    if (rows.size() != dim) {
        throw ScenarioError(path + ".matrix", "expected " + std::to_string(dim) + " rows");
    }
    std::vector<Complex> entries;
    for (std::size_t r = 0; r < dim; ++r) {
        const auto row = parse_amplitudes(rows[r], path + ".matrix[" + std::to_string(r) + "]", dim);
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return at_field(path, [&] { return DensityOperator(ComplexMatrix(dim, std::move(entries))); });
}

class SlotTable {
  public:
    const ProjectiveDecomposition &get(const std::string &name, const std::string &path) const {
        for (const auto &s : slots) {
            if (s.name == name) {
                return s.decomposition;
            }
        }
        throw ScenarioError(path, "unknown slot '" + name + "'");
    }

    std::vector<NamedDecomposition> slots;
};

ProjectiveDecomposition parse_slot(const json &v, const std::string &path, std::size_t dim, const SlotTable &table) {
    const int forms = int(v.contains("kets")) + int(v.contains("coarsen")) + int(v.contains("rotate_fixing"));
    if (forms != 1) {
        throw ScenarioError(path, "exactly one of 'kets', 'coarsen' or 'rotate_fixing' is required");
    }
    std::vector<std::string> labels;
    if (v.contains("labels")) {
        labels = parse_string_list(v["labels"], path + ".labels");
    }

    if (v.contains("kets")) {
        const json &kets = require_array(v["kets"], path + ".kets");
        std::vector<Ket> parsed;
        for (std::size_t i = 0; i < kets.size(); ++i) {
            parsed.push_back(parse_ket(kets[i], path + ".kets[" + std::to_string(i) + "]", dim));
        }
        return at_field(path + ".kets", [&] { return pvm_from_kets(parsed, labels); });
    }

    if (v.contains("coarsen")) {
        const auto &base = table.get(require_string(v, path, "coarsen"), path + ".coarsen");
        const json &groups_json = require(v, path, "groups");
        require_array(groups_json, path + ".groups");
        std::vector<std::vector<std::string>> groups;
        for (std::size_t i = 0; i < groups_json.size(); ++i) {
            groups.push_back(parse_string_list(groups_json[i], path + ".groups[" + std::to_string(i) + "]"));
        }
        if (labels.empty()) {
            return at_field(path + ".groups", [&] { return coarsen(base, groups); });
        }
        if (labels.size() != groups.size()) {
            throw ScenarioError(path + ".labels", "one label per group required");
        }
        std::vector<LabelGroup> named;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            named.push_back({labels[i], groups[i]});
        }
        return at_field(path + ".groups", [&] { return coarsen(base, named); });
    }

    const auto &base = table.get(require_string(v, path, "rotate_fixing"), path + ".rotate_fixing");
    const std::string fixed = require_string(v, path, "fixed");
    ComplementRotation rotation;
    if (v.contains("angles")) {
        const json &angles = require_array(v["angles"], path + ".angles");
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const std::string ap = path + ".angles[" + std::to_string(i) + "]";
            GivensAngle g;
            if (angles[i].is_number()) {
                g.theta = require_number(angles[i], ap);
            } else {
                g.theta = require_number(require(angles[i], ap, "theta"), ap + ".theta");
                if (angles[i].contains("phase")) {
                    g.phase = require_number(angles[i]["phase"], ap + ".phase");
                }
            }
            rotation.givens.push_back(g);
        }
    }
    if (v.contains("phases")) {
        const json &phases = require_array(v["phases"], path + ".phases");
        for (std::size_t i = 0; i < phases.size(); ++i) {
            rotation.phases.push_back(require_number(phases[i], path + ".phases[" + std::to_string(i) + "]"));
        }
    }
    if (!labels.empty()) {
        throw ScenarioError(path + ".labels", "rotated slots keep the labels of their base");
    }
    return at_field(path, [&] { return rotate_fixing_axis(base, fixed, rotation); });
}

Ket parse_post(const json &v, const std::string &path, std::size_t dim, const SlotTable &table) {
    if (v.is_array()) {
        return parse_ket(v, path, dim);
    }
    const auto &slot = table.get(require_string(v, path, "slot"), path + ".slot");
    const std::string label = require_string(v, path, "label");
    return at_field(path, [&] {
        const auto idx = slot.index_of(label);
        if (!idx) {
            throw std::out_of_range("unknown label '" + label + "'");
        }
        return slot.ket(*idx);
    });
}

std::vector<EventAtom> parse_atoms(const json &v, const std::string &path) {
    require_array(v, path);
    std::vector<EventAtom> atoms;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string ap = path + "[" + std::to_string(i) + "]";
        const json &ord = require(v[i], ap, "ordinal");
        if (!ord.is_number_integer() || ord.get<long long>() < 1) {
            throw ScenarioError(ap + ".ordinal", "expected a positive integer");
        }
        atoms.push_back(EventAtom{ord.get<std::size_t>(), require_string(v[i], ap, "label")});
    }
    return atoms;
}

void validate_atoms(const MeasurementPlan &plan, const std::vector<EventAtom> &atoms, const std::string &path) {
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string ap = path + "[" + std::to_string(i) + "]";
        if (atoms[i].ordinal > plan.size()) {
            throw ScenarioError(ap + ".ordinal", "ordinal beyond the " + std::to_string(plan.size()) + "-slot plan");
        }
        if (!plan.slot(atoms[i].ordinal).index_of(atoms[i].label)) {
            throw ScenarioError(ap + ".label", "unknown label '" + atoms[i].label + "'");
        }
        if (!seen.insert(atoms[i].ordinal).second) {
            throw ScenarioError(ap + ".ordinal", "duplicate ordinal");
        }
    }
}

RetrodictionQuery parse_retrodiction(const json &q, const std::string &path, const Scenario &partial,
                                     const SlotTable &table) {
    const auto &slot = table.get(require_string(q, path, "slot"), path + ".slot");
    const Ket post = parse_post(require(q, path, "post"), path + ".post", partial.dim, table);
    const std::string target = require_string(q, path, "target");
    return at_field(path + ".target", [&] { return RetrodictionQuery(partial.rho, slot, post, target); });
}

ClassicalModel parse_model(const json &v, const std::string &path) {
    std::map<std::string, double> prior;
    std::map<std::string, std::map<std::string, double>> likelihood;
    const json &prior_json = require(v, path, "prior");
    if (!prior_json.is_object()) {
        throw ScenarioError(path + ".prior", "expected an object");
    }
    for (const auto &[k, x] : prior_json.items()) {
        prior[k] = require_number(x, path + ".prior." + k);
    }
    const json &lik_json = require(v, path, "likelihood");
    if (!lik_json.is_object()) {
        throw ScenarioError(path + ".likelihood", "expected an object");
    }
    for (const auto &[qk, row] : lik_json.items()) {
        if (!row.is_object()) {
            throw ScenarioError(path + ".likelihood." + qk, "expected an object");
        }
        for (const auto &[pk, x] : row.items()) {
            likelihood[qk][pk] = require_number(x, path + ".likelihood." + qk + "." + pk);
        }
    }
    return at_field(path, [&] { return ClassicalModel(std::move(prior), std::move(likelihood)); });
}

ScenarioQuery parse_query(const json &q, const std::string &path, const Scenario &partial, const SlotTable &table) {
    const std::string kind = require_string(q, path, "kind");
    if (kind == "abl" || kind == "naive" || kind == "corrected") {
        RetrodictionQuery rq = parse_retrodiction(q, path, partial, table);
        if (kind == "naive" && !rq.slot1.is_fine()) {
            throw ScenarioError(path + ".slot", "naive retrodiction needs a fine (all rank-1) slot");
        }
        return ScenarioQuery{kind, q, RetrodictionSpec{std::move(rq)}};
    }
    if (kind == "oracle") {
        std::vector<ProjectiveDecomposition> plan_slots;
        if (q.contains("plan")) {
            const auto names = parse_string_list(q["plan"], path + ".plan");
            for (std::size_t i = 0; i < names.size(); ++i) {
                plan_slots.push_back(table.get(names[i], path + ".plan[" + std::to_string(i) + "]"));
            }
        } else {
            for (const auto &s : table.slots) {
                plan_slots.push_back(s.decomposition);
            }
        }
        MeasurementPlan plan = at_field(path + ".plan", [&] { return MeasurementPlan(std::move(plan_slots)); });
        auto target = parse_atoms(require(q, path, "target"), path + ".target");
        auto given = q.contains("given") ? parse_atoms(q["given"], path + ".given") : std::vector<EventAtom>{};
        validate_atoms(plan, target, path + ".target");
        validate_atoms(plan, given, path + ".given");
        return ScenarioQuery{kind, q, OracleSpec{std::move(plan), std::move(target), std::move(given)}};
    }
    if (kind == "discrepancy") {
        const auto &slot = table.get(require_string(q, path, "slot"), path + ".slot");
        if (!slot.is_fine()) {
            throw ScenarioError(path + ".slot", "the naive marginal needs a fine (all rank-1) slot");
        }
        Ket post = parse_post(require(q, path, "post"), path + ".post", partial.dim, table);
        return ScenarioQuery{kind, q, DiscrepancySpec{slot, std::move(post)}};
    }
    if (kind == "classical") {
        if (q.contains("model")) {
            ClassicalModel model = parse_model(q["model"], path + ".model");
            const std::string q_label = require_string(q, path, "q");
            const std::string p_label = require_string(q, path, "p");
            at_field(path, [&] { return model.likelihood(q_label, p_label); });
            return ScenarioQuery{kind, q, ClassicalSpec{std::move(model), q_label, p_label, std::nullopt}};
        }
        RetrodictionQuery rq = parse_retrodiction(q, path, partial, table);
        ClassicalModel model =
            at_field(path + ".slot", [&] { return extract_classical_model(rq.rho, rq.slot1, rq.slot2_ket); });
        std::string target = rq.target_label;
        return ScenarioQuery{kind, q, ClassicalSpec{std::move(model), kPostSelectedLabel, target, std::move(rq)}};
    }
    throw ScenarioError(path + ".kind", "unknown query kind '" + kind +
                                            "' (expected abl, naive, corrected, oracle, discrepancy or classical)");
}

void fill(ResultRecord &r, const Conditional &value, const Conditional &oracle) {
    r.value = value.maybe();
    r.oracle = oracle.maybe();
    if (r.value && r.oracle) {
        r.gap = std::abs(*r.value - *r.oracle);
    }
    if (!value) {
        r.conditioning_probability = value.conditioning_probability();
    } else if (!oracle) {
        r.conditioning_probability = oracle.conditioning_probability();
    }
}

/// Direct enumeration of the classical joint table P(p, q) = P(q|p) P(p).
Conditional classical_table_oracle(const ClassicalModel &m, const std::string &q_label, const std::string &p_label) {
    double joint = 0.0;
    double marginal = 0.0;
    for (const auto &q : m.q_labels()) {
        for (const auto &[p, prior] : m.prior()) {
            const double cell = prior * m.likelihood(q, p);
            if (q == q_label) {
                marginal += cell;
                if (p == p_label) {
                    joint += cell;
                }
            }
        }
    }
    if (marginal <= tol::kZeroProbability) {
        return Conditional::undefined(marginal);
    }
    return Conditional::defined(joint / marginal, marginal);
}

ResultRecord evaluate_query(const Scenario &scenario, const ScenarioQuery &sq, std::size_t index) {
    ResultRecord r;
    r.index = index;
    r.kind = sq.kind;
    r.query = sq.echo;

    if (const auto *spec = std::get_if<RetrodictionSpec>(&sq.spec)) {
        const RetrodictionQuery &q = spec->query;
        const Conditional oracle = oracle_retrodiction(q);
        if (sq.kind == "abl") {
            const bool fine = q.slot1.is_fine();
            r.method = fine ? "abl_fine" : "abl_coarse";
            fill(r, fine ? abl_fine(q) : abl_coarse(q), oracle);
        } else if (sq.kind == "naive") {
            r.method = "naive_bayes";
            fill(r, naive_bayes(q), oracle);
            r.details["unmeasured_denominator"] = unmeasured_probability(q.rho, q.slot2_ket);
        } else {
            r.method = "corrected_bayes";
            fill(r, corrected_bayes(q), oracle);
            r.details["marginal_with_ignored_observation"] = corrected_marginal(q.rho, q.slot1, q.slot2_ket);
        }
    } else if (const auto *spec = std::get_if<OracleSpec>(&sq.spec)) {
        r.method = "oracle";
        const Conditional c = conditional(joint_distribution(scenario.rho, spec->plan), spec->target, spec->given);
        fill(r, c, c);
        r.gap.reset();
    } else if (const auto *spec = std::get_if<DiscrepancySpec>(&sq.spec)) {
        r.method = "naive_marginal";
        const DiscrepancyReport d = margenau_discrepancy(scenario.rho, spec->slot, spec->post);
        r.value = d.naive_value;
        r.oracle = d.observed_oracle_value;
        if (r.value) {
            r.gap = std::abs(*r.value - *r.oracle);
        }
        r.details["unmeasured"] = d.correct_value;
        r.details["unmeasured_oracle"] = d.oracle_value;
        if (d.gap) {
            r.details["unmeasured_gap"] = *d.gap;
        }
    } else if (const auto *spec = std::get_if<ClassicalSpec>(&sq.spec)) {
        r.method = "classical_retrodict";
        const Conditional value = classical_retrodict(spec->model, spec->q_label, spec->p_label);
        const Conditional oracle = spec->quantum ? oracle_retrodiction(*spec->quantum)
                                                 : classical_table_oracle(spec->model, spec->q_label, spec->p_label);
        fill(r, value, oracle);
    }
    return r;
}

}  // namespace

Scenario parse_scenario(const json &doc) {
    if (!doc.is_object()) {
        throw ScenarioError("$", "expected a JSON object");
    }
    const json &version = require(doc, "$", "version");
    if (!version.is_number_integer() || version.get<long long>() != 1) {
        throw ScenarioError("version", "unsupported scenario version (expected 1)");
    }
    const json &dim_json = require(doc, "$", "dim");
    if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1 || dim_json.get<long long>() > 64) {
        throw ScenarioError("dim", "expected an integer in [1, 64]");
    }
    const std::size_t dim = dim_json.get<std::size_t>();

    Scenario scenario{dim, parse_rho(require(doc, "$", "rho"), dim), {}, {}};

    SlotTable table;
    const json &slots = require_array(require(doc, "$", "slots"), "slots");
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const std::string path = "slots[" + std::to_string(i) + "]";
        const std::string name = require_string(slots[i], path, "name");
        for (const auto &existing : table.slots) {
            if (existing.name == name) {
                throw ScenarioError(path + ".name", "duplicate slot name '" + name + "'");
            }
        }
        ProjectiveDecomposition d = parse_slot(slots[i], path, dim, table);
        table.slots.push_back(NamedDecomposition{name, std::move(d)});
    }

    const json &queries = require_array(require(doc, "$", "queries"), "queries");
    for (std::size_t i = 0; i < queries.size(); ++i) {
        scenario.queries.push_back(parse_query(queries[i], "queries[" + std::to_string(i) + "]", scenario, table));
    }
    scenario.slots = std::move(table.slots);
    return scenario;
}

Scenario load_scenario(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("$", "cannot open '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ScenarioError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

std::vector<ResultRecord> evaluate(const Scenario &scenario) {
    std::vector<ResultRecord> out;
    out.reserve(scenario.queries.size());
    for (std::size_t i = 0; i < scenario.queries.size(); ++i) {
        out.push_back(evaluate_query(scenario, scenario.queries[i], i));
    }
    return out;
}

std::vector<ResultRecord> run_scenario(const std::filesystem::path &path) {
    return evaluate(load_scenario(path));
}

}  // namespace retro
