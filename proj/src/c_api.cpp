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

#include "pingpong/analysis.hpp"

#include <new>
#include <string>

struct pp_config {
    pingpong::analysis::ExperimentConfig cfg;
};

struct pp_result {
    pingpong::analysis::ExperimentResult result;
};

struct pp_buffer {
    std::string data;
};

namespace {

thread_local std::string g_last_error;

pp_status fail(pp_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Maps the C++ exception hierarchy onto status codes.
template <class F> pp_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return PP_OK;
    } catch (const pingpong::InvalidArgument &e) {
        return fail(PP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const pingpong::BudgetExceeded &e) {
        return fail(PP_ERR_BUDGET, e.what());
    } catch (const pingpong::ContractViolation &e) {
        return fail(PP_ERR_CONTRACT, e.what());
    } catch (const std::bad_alloc &) {
        return fail(PP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(PP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PP_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char *what) {
    if (!ok) throw pingpong::InvalidArgument(what);
}

void emit(pp_buffer **out, std::string text) {
    require(out != nullptr, "output pointer is null");
    *out = new pp_buffer{std::move(text)};
}

} // namespace

extern "C" {

const char *pp_last_error(void) { return g_last_error.c_str(); }
const char *pp_version(void) { return "1.0.0"; }

const char *pp_buffer_data(const pp_buffer *buf) { return buf ? buf->data.c_str() : ""; }
size_t pp_buffer_size(const pp_buffer *buf) { return buf ? buf->data.size() : 0; }
void pp_buffer_destroy(pp_buffer *buf) { delete buf; }

uint64_t pp_default_seed(void) { return pingpong::analysis::kDefaultSeed; }

pp_status pp_config_create(pp_config **out) {
    return guarded([&] {
        require(out != nullptr, "output pointer is null");
        *out = new pp_config{};
    });
}

void pp_config_destroy(pp_config *cfg) { delete cfg; }

pp_status pp_config_set_strategy(pp_config *cfg, const char *spec) {
    return guarded([&] {
        require(cfg && spec, "null argument");
        cfg->cfg.strategy = pingpong::adversary::parse_strategy(spec);
    });
}

pp_status pp_config_set_rounds(pp_config *cfg, uint64_t n_rounds) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        require(n_rounds > 0, "rounds must be positive");
        cfg->cfg.n_rounds = n_rounds;
    });
}

pp_status pp_config_set_trials(pp_config *cfg, uint64_t trials) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        require(trials > 0, "trials must be positive");
        cfg->cfg.trials = trials;
    });
}

pp_status pp_config_set_seed(pp_config *cfg, uint64_t seed) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        cfg->cfg.master_seed = seed;
    });
}

pp_status pp_config_set_budget(pp_config *cfg, uint64_t budget) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        require(budget > 0, "budget must be positive");
        cfg->cfg.budget = budget;
    });
}

pp_status pp_config_set_threads(pp_config *cfg, unsigned threads) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        cfg->cfg.threads = threads == 0 ? 1 : threads;
    });
}

pp_status pp_config_set_stop_on_intrusion(pp_config *cfg, int enabled) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        cfg->cfg.stop_on_intrusion = enabled != 0;
    });
}

pp_status pp_config_set_record_transcript(pp_config *cfg, int enabled) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        cfg->cfg.record_transcript = enabled != 0;
    });
}

pp_status pp_config_set_bits(pp_config *cfg, const uint8_t *bits, size_t n) {
    return guarded([&] {
        require(cfg != nullptr, "null config");
        require(n == 0 || bits != nullptr, "null bit array");
        std::vector<std::uint8_t> pattern(bits, bits + n);
        for (auto b : pattern) require(b <= 1, "bits must be 0 or 1");
        cfg->cfg.bit_pattern = std::move(pattern);
    });
}

pp_status pp_run(const pp_config *cfg, pp_result **out) {
    return guarded([&] {
        require(cfg && out, "null argument");
        *out = new pp_result{pingpong::analysis::run_experiment(cfg->cfg)};
    });
}

void pp_result_destroy(pp_result *res) { delete res; }
uint64_t pp_result_rounds(const pp_result *res) { return res ? res->result.stats.rounds : 0; }
uint64_t pp_result_intrusions(const pp_result *res) { return res ? res->result.stats.intrusions : 0; }
uint64_t pp_result_bit_errors(const pp_result *res) { return res ? res->result.stats.bit_errors : 0; }

double pp_result_detection_estimate(const pp_result *res) {
    return res ? res->result.stats.detection_estimate() : 0.0;
}

double pp_result_detection_stderr(const pp_result *res) {
    return res ? res->result.stats.detection_stderr() : 0.0;
}

void pp_result_bell_histogram(const pp_result *res, uint64_t counts[4]) {
    if (!counts) return;
    for (int i = 0; i < 4; ++i) counts[i] = res ? res->result.stats.bell_histogram[i] : 0;
}

pp_status pp_result_stats_json(const pp_result *res, pp_buffer **out) {
    return guarded([&] {
        require(res != nullptr, "null result");
        emit(out, pingpong::analysis::stats_to_json(res->result));
    });
}

pp_status pp_result_transcript_jsonl(const pp_result *res, pp_buffer **out) {
    return guarded([&] {
        require(res != nullptr, "null result");
        emit(out, pingpong::analysis::transcript_to_jsonl(res->result));
    });
}

pp_status pp_result_decoded_bits(const pp_result *res, pp_buffer **out, int *complete) {
    return guarded([&] {
        require(res != nullptr, "null result");
        require(!res->result.transcripts.empty(), "no transcript was recorded");
        const auto &rounds = res->result.transcripts.front();
        std::string bits;
        bool whole = rounds.size() == res->result.config.n_rounds;
        for (const auto &r : rounds) {
            if (r.decoded.is_intrusion()) {
                whole = false;
                break;
            }
            bits.push_back(static_cast<char>(*r.decoded.bit));
        }
        if (complete) *complete = whole ? 1 : 0;
        emit(out, std::move(bits));
    });
}

pp_status pp_detection_probability(const char *strategy, double *out) {
    return guarded([&] {
        require(strategy && out, "null argument");
        *out = pingpong::analysis::detection_probability(pingpong::adversary::parse_strategy(strategy));
    });
}

pp_status pp_exact_bell_distribution(const char *prepared, int alice_bit, const char *strategy, double out[4]) {
    return guarded([&] {
        require(prepared && strategy && out, "null argument");
        require(alice_bit == 0 || alice_bit == 1, "bit must be 0 or 1");
        const auto label = pingpong::quantum::parse_bell_label(prepared);
        require(label == pingpong::quantum::BellLabel::PsiPlus || label == pingpong::quantum::BellLabel::PhiPlus,
                "prepared state must be PsiPlus or PhiPlus");
        const auto dist = pingpong::analysis::exact_round_distribution(
            *label, static_cast<std::uint8_t>(alice_bit), pingpong::adversary::parse_strategy(strategy));
        const auto m = dist.bell_marginal();
        for (int i = 0; i < 4; ++i) out[i] = m[i];
    });
}

pp_status pp_survival_log10(uint64_t n, double p, double *out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = pingpong::analysis::survival_probability({n, p});
    });
}

pp_status pp_format_log10(double log10_value, int significant, pp_buffer **out) {
    return guarded([&] { emit(out, pingpong::analysis::format_log10_scientific(log10_value, significant)); });
}

pp_status pp_sweep(const double *d_grid, size_t n_d, const uint64_t *n_grid, size_t n_n, int as_json,
                   pp_buffer **out) {
    return guarded([&] {
        require(d_grid && n_grid, "null grid");
        for (size_t i = 0; i < n_d; ++i) require(d_grid[i] >= 0.0 && d_grid[i] <= 1.0, "d must lie in [0, 1]");
        const auto rows = pingpong::analysis::success_curve({d_grid, n_d}, {n_grid, n_n});
        emit(out, as_json ? pingpong::analysis::curve_to_json(rows) : pingpong::analysis::curve_to_csv(rows));
    });
}

pp_status pp_verify(pp_buffer **report, int *all_passed) {
    return guarded([&] {
        const auto results = pingpong::analysis::run_self_checks();
        bool ok = true;
        for (const auto &r : results) ok = ok && r.passed;
        if (all_passed) *all_passed = ok ? 1 : 0;
        emit(report, pingpong::analysis::format_check_report(results));
    });
}

} // extern "C"
