// Copyright 2026 The pingpong-qsdc Authors
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

#include "pingpong/pingpong.h"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace {

std::string take(pp_buffer *buf) {
    std::string s(pp_buffer_data(buf), pp_buffer_size(buf));
    pp_buffer_destroy(buf);
    return s;
}

} // namespace

TEST(CApi, ConfigValidationReportsErrors) {
    pp_config *cfg = nullptr;
    ASSERT_EQ(pp_config_create(&cfg), PP_OK);
    EXPECT_EQ(pp_config_set_strategy(cfg, "bogus"), PP_ERR_INVALID_ARGUMENT);
    EXPECT_NE(std::string(pp_last_error()).find("bogus"), std::string::npos);
    EXPECT_EQ(pp_config_set_rounds(cfg, 0), PP_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(pp_config_set_trials(cfg, 0), PP_ERR_INVALID_ARGUMENT);
    const uint8_t bad[] = {0, 3};
    EXPECT_EQ(pp_config_set_bits(cfg, bad, 2), PP_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(pp_config_set_strategy(nullptr, "none"), PP_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(pp_config_set_strategy(cfg, "none"), PP_OK);
    EXPECT_STREQ(pp_last_error(), "");
    pp_config_destroy(cfg);
    pp_config_destroy(nullptr);
}

TEST(CApi, RunDecodesFixedMessage) {
    pp_config *cfg = nullptr;
    ASSERT_EQ(pp_config_create(&cfg), PP_OK);
    const uint8_t bits[] = {0, 1, 1, 0, 1, 0, 0, 0};
    ASSERT_EQ(pp_config_set_bits(cfg, bits, 8), PP_OK);
    ASSERT_EQ(pp_config_set_rounds(cfg, 8), PP_OK);
    ASSERT_EQ(pp_config_set_record_transcript(cfg, 1), PP_OK);
    pp_result *res = nullptr;
    ASSERT_EQ(pp_run(cfg, &res), PP_OK);
    EXPECT_EQ(pp_result_rounds(res), 8u);
    EXPECT_EQ(pp_result_intrusions(res), 0u);
    pp_buffer *decoded = nullptr;
    int complete = 0;
    ASSERT_EQ(pp_result_decoded_bits(res, &decoded, &complete), PP_OK);
    EXPECT_EQ(complete, 1);
    EXPECT_EQ(take(decoded), std::string("\x00\x01\x01\x00\x01\x00\x00\x00", 8));
    pp_buffer *lines = nullptr;
    ASSERT_EQ(pp_result_transcript_jsonl(res, &lines), PP_OK);
    const auto text = take(lines);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
    uint64_t hist[4];
    pp_result_bell_histogram(res, hist);
    EXPECT_EQ(hist[0] + hist[1] + hist[2] + hist[3], 8u);
    pp_result_destroy(res);
    pp_config_destroy(cfg);
}

TEST(CApi, PartialMessageOnIntrusion) {
    pp_config *cfg = nullptr;
    ASSERT_EQ(pp_config_create(&cfg), PP_OK);
    ASSERT_EQ(pp_config_set_strategy(cfg, "ancilla:d=0.5"), PP_OK);
    ASSERT_EQ(pp_config_set_rounds(cfg, 64), PP_OK);
    ASSERT_EQ(pp_config_set_stop_on_intrusion(cfg, 1), PP_OK);
    ASSERT_EQ(pp_config_set_record_transcript(cfg, 1), PP_OK);
    pp_result *res = nullptr;
    ASSERT_EQ(pp_run(cfg, &res), PP_OK);
    EXPECT_EQ(pp_result_intrusions(res), 1u);
    pp_buffer *decoded = nullptr;
    int complete = 1;
    ASSERT_EQ(pp_result_decoded_bits(res, &decoded, &complete), PP_OK);
    EXPECT_EQ(complete, 0);
    EXPECT_EQ(take(decoded).size() + 1, pp_result_rounds(res));
    pp_result_destroy(res);
    pp_config_destroy(cfg);
}

TEST(CApi, BudgetMapsToItsOwnCode) {
    pp_config *cfg = nullptr;
    ASSERT_EQ(pp_config_create(&cfg), PP_OK);
    ASSERT_EQ(pp_config_set_rounds(cfg, 1000), PP_OK);
    ASSERT_EQ(pp_config_set_budget(cfg, 10), PP_OK);
    pp_result *res = nullptr;
    EXPECT_EQ(pp_run(cfg, &res), PP_ERR_BUDGET);
    EXPECT_EQ(res, nullptr);
    pp_config_destroy(cfg);
}

TEST(CApi, AnalyticEntryPoints) {
    double log10v = 0.0;
    ASSERT_EQ(pp_survival_log10(1000, 0.5, &log10v), PP_OK);
    EXPECT_NEAR(log10v, -301.0300, 1e-4);
    pp_buffer *text = nullptr;
    ASSERT_EQ(pp_format_log10(log10v, 3, &text), PP_OK);
    EXPECT_EQ(take(text), "9.33e-302");
    EXPECT_EQ(pp_survival_log10(1, 2.0, &log10v), PP_ERR_INVALID_ARGUMENT);

    double p = -1.0;
    ASSERT_EQ(pp_detection_probability("ancilla:d=0.5", &p), PP_OK);
    EXPECT_NEAR(p, 0.5, 1e-12);
    double bell[4];
    ASSERT_EQ(pp_exact_bell_distribution("PhiPlus", 1, "none", bell), PP_OK);
    EXPECT_NEAR(bell[3], 1.0, 1e-12);
    EXPECT_EQ(pp_exact_bell_distribution("PsiMinus", 0, "none", bell), PP_ERR_INVALID_ARGUMENT);

    const double d[] = {0.0, 0.25, 0.5};
    const uint64_t n[] = {1, 10, 1000};
    pp_buffer *csv = nullptr;
    ASSERT_EQ(pp_sweep(d, 3, n, 3, 0, &csv), PP_OK);
    const auto table = take(csv);
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 10);
    const double bad_d[] = {1.5};
    EXPECT_EQ(pp_sweep(bad_d, 1, n, 1, 0, &csv), PP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, VerifySuitePasses) {
    pp_buffer *report = nullptr;
    int ok = 0;
    ASSERT_EQ(pp_verify(&report, &ok), PP_OK);
    EXPECT_EQ(ok, 1);
    EXPECT_NE(take(report).find("[PASS]"), std::string::npos);
    EXPECT_EQ(pp_default_seed(), 20021101u);
}
