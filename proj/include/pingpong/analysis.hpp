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

#pragma once

/**
 * @file
 * Experiments over many protocol rounds, the exact branch-enumeration oracle
 * they are checked against, and closed-form detection statistics.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pingpong/adversary.hpp"
#include "pingpong/protocol.hpp"

namespace pingpong::analysis {

using protocol::RoundRecord;
using quantum::BellLabel;

/// Seed used when the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20021101;
/// Default cap on n_rounds * trials.
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct ExperimentConfig {
    std::uint64_t n_rounds = 1000;
    adversary::StrategySpec strategy = adversary::NoEavesdropper{};
    /// Alice's bits, cycled over the rounds of each trial. Empty means a fresh
    /// random bit per round.
    std::vector<std::uint8_t> bit_pattern;
    bool stop_on_intrusion = false;
    std::uint64_t master_seed = kDefaultSeed;
    std::uint64_t trials = 1;
    std::uint64_t budget = kDefaultBudget;
    bool record_transcript = false;
    /// Worker threads for independent trials. Results do not depend on it.
    unsigned threads = 1;
};

/// One joint outcome cell: (prepared, bit) conditions, Eve's outcome key and
/// Bob's Bell result.
struct CellKey {
    BellLabel prepared;
    std::uint8_t alice_bit;
    std::string eve;
    BellLabel measured;

    auto operator<=>(const CellKey &) const = default;
};

struct HaltSummary {
    std::uint64_t halted_trials = 0;
    std::uint64_t unhalted_trials = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;

    void add_halt(std::uint64_t round_number);
    void merge(const HaltSummary &other);
    double mean() const;
    /// Sample standard deviation of the halt round.
    double stddev() const;
};

/// Aggregated counts. merge() is commutative and associative.
struct ExperimentStats {
    std::array<std::uint64_t, 4> bell_histogram{};
    std::uint64_t rounds = 0;
    std::uint64_t intrusions = 0;
    std::uint64_t bit_errors = 0;
    /// Non-intrusion rounds; intrusion rounds carry no bit.
    std::uint64_t bit_denominator = 0;
    std::uint64_t eve_inferences = 0;
    std::uint64_t eve_correct = 0;
    HaltSummary halt;
    std::map<CellKey, std::uint64_t> cells;

    void add(const RoundRecord &record);
    void merge(const ExperimentStats &other);

    double detection_estimate() const;
    double detection_stderr() const;
    double bit_error_rate() const;
    std::optional<double> eve_accuracy() const;
    /// Rounds with the given (prepared, bit) conditions.
    std::uint64_t condition_total(BellLabel prepared, std::uint8_t bit) const;
};

struct ExperimentResult {
    ExperimentConfig config;
    ExperimentStats stats;
    /// Per-trial transcripts when config.record_transcript is set.
    std::vector<std::vector<RoundRecord>> transcripts;

    bool intrusion_detected() const { return stats.intrusions > 0; }
};

/// Runs trials × n_rounds protocol rounds. Trial i draws from
/// RandomSource::derive(master_seed, i), so results are reproducible and
/// independent of `threads`. Throws BudgetExceeded or InvalidArgument.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Stats as a JSON object (fixed key order).
std::string stats_to_json(const ExperimentResult &result);
/// Transcript as JSON lines (fixed key order). Empty unless recorded.
std::string transcript_to_jsonl(const ExperimentResult &result);

// ---------------------------------------------------------------------------
// Exact oracle

struct EveBranch {
    std::string eve_outcome; // same keys as EveRecord::outcome_key()
    std::optional<protocol::EncodingOp> inferred;
    double probability = 0.0;
    /// Bob's Bell probabilities conditioned on this branch, in kBellOrder.
    std::array<double, 4> bell{};
};

struct RoundDistribution {
    BellLabel prepared;
    std::uint8_t alice_bit;
    std::vector<EveBranch> branches;

    std::array<double, 4> bell_marginal() const;
    /// Probability of a Bell result from the other family than `prepared`.
    double intrusion_probability() const;
    /// Probability that Eve's inference equals Alice's operation, over all
    /// branches in which Eve infers something.
    std::optional<double> eve_accuracy() const;
    /// Joint probability of (Eve outcome, Bell result).
    double probability(const std::string &eve_outcome, BellLabel measured) const;
};

/// Exact Born-rule enumeration of every Eve measurement branch for one round,
/// carried out on density matrices with projectors and partial traces.
RoundDistribution exact_round_distribution(BellLabel prepared, std::uint8_t alice_bit,
                                           const adversary::StrategySpec &strategy);

/// Per-round intrusion probability averaged uniformly over Bob's two
/// preparations and Alice's two bits.
double detection_probability(const adversary::StrategySpec &strategy);

// ---------------------------------------------------------------------------
// Analytic survival statistics

struct SurvivalQuery {
    std::uint64_t n = 0;
    double p = 0.0;
};

/// log10 of (1 - p)^n, the probability that n attacked rounds all go
/// undetected. Returns -infinity for p = 1 and n > 0. Throws for p outside [0,1].
double survival_probability(const SurvivalQuery &q);

/// Renders 10^log10_value with `significant` digits: "9.33e-302", "9.77e-4",
/// "1". A zero exponent is omitted ("2.00"); -infinity renders as "0".
std::string format_log10_scientific(double log10_value, int significant = 3);

struct CurveRow {
    double d;
    std::uint64_t n;
    double p_detect;
    double log10_survival;
};

/// (d, n) table of detection probability and undetected-survival for the
/// ancilla attack with orthonormal χ's. d varies slowest.
std::vector<CurveRow> success_curve(std::span<const double> d_grid, std::span<const std::uint64_t> n_grid);

/// Header `d,n,p_detect,log10_survival`; d shortest round-trip, p_detect with
/// 12 and log10_survival with 10 fixed decimals.
std::string curve_to_csv(std::span<const CurveRow> rows);
std::string curve_to_json(std::span<const CurveRow> rows);

// ---------------------------------------------------------------------------
// Embedded self-verification

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_self_checks();
std::string format_check_report(std::span<const CheckResult> results);

} // namespace pingpong::analysis
