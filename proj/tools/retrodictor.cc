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

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "retro/demo.h"
#include "retro/oracle_check.h"
#include "retro/records.h"
#include "retro/scenario.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitStrict = 3;
constexpr int kExitProperty = 4;

int run_command(const std::string &file, const std::string &json_out, bool strict) {
    std::vector<retro::ResultRecord> records;
    try {
        records = retro::run_scenario(file);
    } catch (const retro::ScenarioError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    }
    std::cout << retro::render_table(records);
    if (!json_out.empty()) {
        std::ofstream out(json_out, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << json_out << "'\n";
            return kExitValidation;
        }
        out << retro::serialize_records(records);
    }
    if (strict && retro::strict_violation(records)) {
        std::cerr << "strict: at least one record is undefined or disagrees with its oracle by more than "
                  << retro::kStrictGap << "\n";
        return kExitStrict;
    }
    return kExitOk;
}

int demo_command(const std::string &name) {
    try {
        std::cout << retro::render_demo(name);
    } catch (const retro::UnknownDemo &e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

int replay_command(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open '" << path << "'\n";
        return kExitValidation;
    }
    retro::OracleInstance instance = [&] {
        const auto doc = nlohmann::json::parse(in);
        return retro::instance_from_json(doc);
    }();
    bool ok = true;
    for (const auto &p : retro::check_instance(instance)) {
        std::cout << std::left << std::setw(30) << p.property << std::setprecision(17) << p.deviation << "  "
                  << (p.passed ? "pass" : "FAIL") << "\n";
        ok = ok && p.passed;
    }
    return ok ? kExitOk : kExitProperty;
}

int oracle_check_command(std::uint64_t seed, long long trials, long long max_dim, const std::string &replay) {
    if (!replay.empty()) {
        try {
            return replay_command(replay);
        } catch (const std::exception &e) {
            std::cerr << "replay: " << e.what() << "\n";
            return kExitValidation;
        }
    }
    if (trials < 1 || max_dim < 2 || max_dim > 8) {
        std::cerr << "oracle-check: need --trials >= 1 and 2 <= --max-dim <= 8\n";
        return kExitValidation;
    }
    const retro::OracleCheckSummary summary = retro::oracle_check(
        {seed, static_cast<std::size_t>(trials), static_cast<std::size_t>(max_dim)});
    std::cout << retro::render_summary(summary);
    if (!summary.ok()) {
        for (const auto &failure : summary.failures) {
            std::cerr << failure.dump() << "\n";
        }
        return kExitProperty;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Retrodictive probabilities for sequences of projective measurements"};
    app.require_subcommand(1);

    std::string file;
    std::string json_out;
    bool strict = false;
    auto *run = app.add_subcommand("run", "Evaluate the queries of a scenario file");
    run->add_option("file", file, "Scenario JSON")->required();
    run->add_option("--json", json_out, "Write machine-readable records here");
    run->add_flag("--strict", strict, "Exit 3 on undefined results or closed-form/oracle gaps above 1e-9");

    std::string demo_name;
    auto *demo = app.add_subcommand("demo", "Print a worked scenario: margenau, three-box, rotated");
    demo->add_option("name", demo_name, "Demo name")->required();

    std::uint64_t seed = 1;
    long long trials = 100;
    long long max_dim = 4;
    std::string replay;
    auto *check = app.add_subcommand("oracle-check", "Randomized closed-form vs oracle equivalence suite");
    check->add_option("--seed", seed, "RNG seed");
    check->add_option("--trials", trials, "Number of random instances");
    check->add_option("--max-dim", max_dim, "Largest Hilbert-space dimension (2..8)");
    check->add_option("--replay", replay, "Re-check one serialized instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    if (run->parsed()) {
        return run_command(file, json_out, strict);
    }
    if (demo->parsed()) {
        return demo_command(demo_name);
    }
    return oracle_check_command(seed, trials, max_dim, replay);
}
