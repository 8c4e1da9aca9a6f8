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

#include "retro/oracle_check.h"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "retro/retrodict.h"
#include "retro/tolerances.h"

namespace retro {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json &j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json ket_to_json(const Ket &k) {
    json out = json::array();
    for (const auto &z : k.amplitudes()) {
        out.push_back(complex_to_json(z));
    }
    return out;
}

Ket ket_from_json(const json &j) {
    std::vector<Complex> amps;
    for (const auto &z : j) {
        amps.push_back(complex_from_json(z));
    }
    return Ket(std::move(amps));
}

std::string group_label_of(const std::vector<std::vector<std::string>> &groups, const std::string &member) {
    for (const auto &g : groups) {
        for (const auto &m : g) {
            if (m == member) {
                std::string label;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    label += (i ? "|" : "") + g[i];
                }
                return label;
            }
        }
    }
    throw std::out_of_range("target '" + member + "' not in any group");
}

/// Both undefined, or both defined and within `tolerance`.
PropertyOutcome agree(const std::string &name, const Conditional &a, const Conditional &b, double tolerance) {
    if (a.is_defined() != b.is_defined()) {
        return {name, INFINITY, tolerance, false};
    }
    if (!a) {
        return {name, 0.0, tolerance, true};
    }
    const double d = std::abs(a.value() - b.value());
    return {name, d, tolerance, d <= tolerance};
}

PropertyOutcome normalization(const std::string &name, const RetrodictionQuery &q,
                              Conditional (*formula)(const RetrodictionQuery &)) {
    double sum = 0.0;
    for (const auto &label : q.slot1.labels()) {
        const Conditional c = formula(q.with_target(label));
        if (!c) {
            return {name, 0.0, tol::kOracleAgreement, true};
        }
        sum += c.value();
    }
    const double d = std::abs(sum - 1.0);
    return {name, d, tol::kOracleAgreement, d <= tol::kOracleAgreement};
}

}  // namespace

OracleInstance random_oracle_instance(random::Rng &rng, std::size_t dim) {
    DensityOperator rho = random::density(rng, dim);
    ProjectiveDecomposition fine = random::fine_pvm(rng, dim);
    auto groups = random::partition(rng, fine);
    Ket post = random::ket(rng, dim);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    std::string target = fine.block(pick(rng)).label;
    return OracleInstance{std::move(rho), std::move(fine), std::move(groups), std::move(post), std::move(target)};
}

json instance_to_json(const OracleInstance &instance) {
    const ComplexMatrix &m = instance.rho.matrix();
    json rho = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rho.push_back(std::move(row));
    }
    json kets = json::array();
    for (std::size_t i = 0; i < instance.fine.size(); ++i) {
        kets.push_back(ket_to_json(instance.fine.ket(i)));
    }
    return json{{"rho", std::move(rho)},
                {"labels", instance.fine.labels()},
                {"kets", std::move(kets)},
                {"groups", instance.groups},
                {"post", ket_to_json(instance.post)},
                {"target", instance.target}};
}

OracleInstance instance_from_json(const json &doc) {
    const json &rows = doc.at("rho");
    const std::size_t dim = rows.size();
    std::vector<Complex> entries;
    for (const auto &row : rows) {
        for (const auto &z : row) {
            entries.push_back(complex_from_json(z));
        }
    }
    std::vector<Ket> kets;
    for (const auto &k : doc.at("kets")) {
        kets.push_back(ket_from_json(k));
    }
    return OracleInstance{DensityOperator(ComplexMatrix(dim, std::move(entries))),
                          pvm_from_kets(kets, doc.at("labels").get<std::vector<std::string>>()),
                          doc.at("groups").get<std::vector<std::vector<std::string>>>(), ket_from_json(doc.at("post")),
                          doc.at("target").get<std::string>()};
}

std::vector<PropertyOutcome> check_instance(const OracleInstance &in) {
    const RetrodictionQuery fine(in.rho, in.fine, in.post, in.target);
    const RetrodictionQuery coarse(in.rho, coarsen(in.fine, in.groups), in.post, group_label_of(in.groups, in.target));

    std::vector<PropertyOutcome> out;
    const Conditional fine_value = abl_fine(fine);
    const Conditional coarse_value = abl_coarse(coarse);
    out.push_back(agree("abl_fine~oracle", fine_value, oracle_retrodiction(fine), tol::kOracleAgreement));
    out.push_back(agree("abl_coarse~oracle", coarse_value, oracle_retrodiction(coarse), tol::kOracleAgreement));
    out.push_back(agree("corrected_fine~abl_fine", corrected_bayes(fine), fine_value, tol::kStructural));
    out.push_back(agree("corrected_coarse~abl_coarse", corrected_bayes(coarse), coarse_value, tol::kStructural));
    out.push_back(normalization("normalization_fine", fine, abl_fine));
    out.push_back(normalization("normalization_coarse", coarse, abl_coarse));

    const ClassicalModel model = extract_classical_model(in.rho, in.fine, in.post);
    out.push_back(
        agree("classical_bridge", classical_retrodict(model, kPostSelectedLabel, in.target), fine_value, tol::kClassicalModel));

    const double naive_m = naive_marginal(in.rho, in.fine, in.post);
    const double corrected_m = corrected_marginal(in.rho, in.fine, in.post);
    const double md = std::abs(naive_m - corrected_m);
    out.push_back({"marginal_identity", md, tol::kStructural, md <= tol::kStructural});

    // A wrong marginal must leave naive Bayes wrong (or undefined).
    const double marginal_gap = std::abs(naive_m - unmeasured_probability(in.rho, in.post));
    const Conditional naive = naive_bayes(fine);
    bool cancels = true;
    if (marginal_gap > 1e-6 && fine_value) {
        cancels = !naive || std::abs(naive.value() - fine_value.value()) > tol::kOracleAgreement;
    }
    out.push_back({"error_cancellation", 0.0, 0.0, cancels});
    return out;
}

OracleCheckSummary oracle_check(const OracleCheckOptions &options) {
    if (options.trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (options.max_dim < 2 || options.max_dim > 8) {
        throw std::invalid_argument("max-dim must be between 2 and 8");
    }
    random::Rng rng(options.seed);
    std::uniform_int_distribution<std::size_t> dims(2, options.max_dim);
    OracleCheckSummary summary;
    summary.trials = options.trials;
    for (std::size_t t = 0; t < options.trials; ++t) {
        const OracleInstance instance = random_oracle_instance(rng, dims(rng));
        bool instance_ok = true;
        for (const auto &p : check_instance(instance)) {
            ++summary.checks;
            if (p.passed) {
                ++summary.passed;
            } else {
                ++summary.failed;
                instance_ok = false;
            }
            if (p.deviation >= summary.worst_deviation && p.tolerance > 0.0) {
                summary.worst_deviation = p.deviation;
                summary.worst_property = p.property;
            }
        }
        if (!instance_ok) {
            json failure = instance_to_json(instance);
            failure["trial"] = t;
            summary.failures.push_back(std::move(failure));
        }
    }
    return summary;
}

std::string render_summary(const OracleCheckSummary &s) {
    std::ostringstream out;
    out << "trials:          " << s.trials << "\n"
        << "checks:          " << s.checks << "\n"
        << "passed:          " << s.passed << "\n"
        << "failed:          " << s.failed << "\n"
        << "worst deviation: " << std::setprecision(3) << std::scientific << s.worst_deviation;
    if (!s.worst_property.empty()) {
        out << " (" << s.worst_property << ")";
    }
    out << "\n" << (s.ok() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace retro
