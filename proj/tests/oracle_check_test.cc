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

#include <gtest/gtest.h>

using namespace retro;

TEST(oracle_check, default_run_passes) {
    const auto s = oracle_check({1, 100, 4});
    EXPECT_TRUE(s.ok()) << render_summary(s);
    EXPECT_EQ(s.trials, 100u);
    EXPECT_EQ(s.checks, 900u);
    EXPECT_EQ(s.passed, 900u);
    EXPECT_LT(s.worst_deviation, 1e-9);
    EXPECT_TRUE(s.failures.empty());
    EXPECT_NE(render_summary(s).find("PASS"), std::string::npos);
}

TEST(oracle_check, larger_dimensions_pass) {
    const auto s = oracle_check({7, 60, 8});
    EXPECT_TRUE(s.ok()) << render_summary(s);
    EXPECT_LT(s.worst_deviation, 1e-9);
}

TEST(oracle_check, bad_arguments) {
    EXPECT_THROW((void)oracle_check({1, 0, 4}), std::invalid_argument);
    EXPECT_THROW((void)oracle_check({1, 10, 1}), std::invalid_argument);
    EXPECT_THROW((void)oracle_check({1, 10, 9}), std::invalid_argument);
}

TEST(oracle_check, same_seed_same_summary) {
    const auto a = oracle_check({42, 30, 5});
    const auto b = oracle_check({42, 30, 5});
    EXPECT_EQ(a.checks, b.checks);
    EXPECT_EQ(a.worst_deviation, b.worst_deviation);
    EXPECT_EQ(a.worst_property, b.worst_property);
    EXPECT_EQ(render_summary(a), render_summary(b));
}

TEST(oracle_check, replay_is_bit_exact) {
    random::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto instance = random_oracle_instance(rng, 2 + trial % 5);
        const auto text = instance_to_json(instance).dump();
        const auto replayed = instance_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(replayed.rho.matrix(), instance.rho.matrix());
        EXPECT_EQ(replayed.post, instance.post);
        const auto a = check_instance(instance);
        const auto b = check_instance(replayed);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].property, b[i].property);
            EXPECT_EQ(a[i].deviation, b[i].deviation);
            EXPECT_EQ(a[i].passed, b[i].passed);
        }
    }
}

TEST(oracle_check, every_property_is_reported) {
    random::Rng rng(6);
    const auto outcomes = check_instance(random_oracle_instance(rng, 3));
    const std::vector<std::string> expected{"abl_fine~oracle",      "abl_coarse~oracle",   "corrected_fine~abl_fine",
                                            "corrected_coarse~abl_coarse", "normalization_fine", "normalization_coarse",
                                            "classical_bridge",     "marginal_identity",   "error_cancellation"};
    ASSERT_EQ(outcomes.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(outcomes[i].property, expected[i]);
        EXPECT_TRUE(outcomes[i].passed) << outcomes[i].property << " " << outcomes[i].deviation;
    }
}
