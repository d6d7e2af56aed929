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

/*
 * C interface to the ping-pong protocol simulator.
 *
 * Every function returns a pp_status. On failure the message for the calling
 * thread is available from pp_last_error() until the next call on that
 * thread. Handles are opaque and owned by the caller; release them with the
 * matching *_destroy function (passing NULL is allowed).
 */

#ifndef PINGPONG_PINGPONG_H
#define PINGPONG_PINGPONG_H

#include <stddef.h>
#include <stdint.h>

#if defined(PINGPONG_BUILDING_LIBRARY)
#define PP_API __attribute__((visibility("default")))
#else
#define PP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
    PP_OK = 0,
    PP_ERR_INVALID_ARGUMENT = 1, /* bad parameter, unknown strategy, malformed input */
    PP_ERR_BUDGET = 2,           /* rounds x trials over the configured budget */
    PP_ERR_CONTRACT = 3,         /* a channel tap broke the channel contract */
    PP_ERR_INTERNAL = 4
} pp_status;

typedef struct pp_config pp_config;
typedef struct pp_result pp_result;
typedef struct pp_buffer pp_buffer;

PP_API const char *pp_last_error(void);
PP_API const char *pp_version(void);

/* Owned byte buffer (UTF-8 text unless stated otherwise). */
PP_API const char *pp_buffer_data(const pp_buffer *buf);
PP_API size_t pp_buffer_size(const pp_buffer *buf);
PP_API void pp_buffer_destroy(pp_buffer *buf);

/* Experiment configuration. Defaults: 1000 rounds, 1 trial, strategy "none",
 * random bits, no stop-on-intrusion, seed pp_default_seed(), budget 1e8. */
PP_API uint64_t pp_default_seed(void);
PP_API pp_status pp_config_create(pp_config **out);
PP_API void pp_config_destroy(pp_config *cfg);
PP_API pp_status pp_config_set_strategy(pp_config *cfg, const char *spec);
PP_API pp_status pp_config_set_rounds(pp_config *cfg, uint64_t n_rounds);
PP_API pp_status pp_config_set_trials(pp_config *cfg, uint64_t trials);
PP_API pp_status pp_config_set_seed(pp_config *cfg, uint64_t seed);
PP_API pp_status pp_config_set_budget(pp_config *cfg, uint64_t budget);
PP_API pp_status pp_config_set_threads(pp_config *cfg, unsigned threads);
PP_API pp_status pp_config_set_stop_on_intrusion(pp_config *cfg, int enabled);
PP_API pp_status pp_config_set_record_transcript(pp_config *cfg, int enabled);
/* Fixed bit pattern (each byte 0 or 1), cycled over the rounds. n == 0
 * restores random bits. */
PP_API pp_status pp_config_set_bits(pp_config *cfg, const uint8_t *bits, size_t n);

/* Runs the experiment. */
PP_API pp_status pp_run(const pp_config *cfg, pp_result **out);
PP_API void pp_result_destroy(pp_result *res);
PP_API uint64_t pp_result_rounds(const pp_result *res);
PP_API uint64_t pp_result_intrusions(const pp_result *res);
PP_API uint64_t pp_result_bit_errors(const pp_result *res);
PP_API double pp_result_detection_estimate(const pp_result *res);
PP_API double pp_result_detection_stderr(const pp_result *res);
/* Writes the four Bell counts in the order PsiPlus, PsiMinus, PhiPlus, PhiMinus. */
PP_API void pp_result_bell_histogram(const pp_result *res, uint64_t counts[4]);
PP_API pp_status pp_result_stats_json(const pp_result *res, pp_buffer **out);
PP_API pp_status pp_result_transcript_jsonl(const pp_result *res, pp_buffer **out);
/* Decoded bits of trial 0 in round order, up to (and excluding) the first
 * intrusion; one byte (0 or 1) per bit. *complete is set to 1 when every
 * round of the trial decoded. Requires a recorded transcript. */
PP_API pp_status pp_result_decoded_bits(const pp_result *res, pp_buffer **out, int *complete);

/* Exact per-round detection probability of a strategy. */
PP_API pp_status pp_detection_probability(const char *strategy, double *out);
/* Exact Bell-outcome marginals for one (prepared, bit) cell; prepared is
 * "PsiPlus" or "PhiPlus". */
PP_API pp_status pp_exact_bell_distribution(const char *prepared, int alice_bit, const char *strategy,
                                            double out[4]);
/* log10 of (1-p)^n; -inf when p == 1 and n > 0. */
PP_API pp_status pp_survival_log10(uint64_t n, double p, double *out);
/* Scientific rendering of 10^log10_value, e.g. "9.33e-302". */
PP_API pp_status pp_format_log10(double log10_value, int significant, pp_buffer **out);
/* Sweep table as CSV (d,n,p_detect,log10_survival) or JSON (as_json != 0). */
PP_API pp_status pp_sweep(const double *d_grid, size_t n_d, const uint64_t *n_grid, size_t n_n, int as_json,
                          pp_buffer **out);
/* Embedded invariant suite; *all_passed is 1 iff every check passed. */
PP_API pp_status pp_verify(pp_buffer **report, int *all_passed);

#ifdef __cplusplus
}
#endif

#endif /* PINGPONG_PINGPONG_H */
