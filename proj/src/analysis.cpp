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

#include "pingpong/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace pingpong::analysis {

using adversary::AncillaAttack;
using adversary::AncillaStrategy;
using adversary::InterceptResendStrategy;
using adversary::NoEavesdropper;
using protocol::EncodingOp;
using quantum::DensityMatrix;
using quantum::UnitaryOp;

namespace {

const std::string kTravelId{protocol::kTravel};
const std::string kHomeId{protocol::kHome};
const std::string kAncillaId{protocol::kAncilla};

std::string fixed(double v, int decimals) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, ptr);
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::uint8_t bit_for_round(const ExperimentConfig &cfg, std::uint64_t round, RandomSource &rand) {
    if (cfg.bit_pattern.empty()) return rand.coin() ? 1 : 0;
    return cfg.bit_pattern[round % cfg.bit_pattern.size()];
}

struct TrialOutput {
    ExperimentStats stats;
    std::vector<RoundRecord> transcript;
};

TrialOutput run_trial(const ExperimentConfig &cfg, const protocol::ChannelTap &tap, std::uint64_t trial) {
    TrialOutput out;
    RandomSource rand = RandomSource::derive(cfg.master_seed, trial);
    bool halted = false;
    for (std::uint64_t r = 0; r < cfg.n_rounds; ++r) {
        const std::uint8_t bit = bit_for_round(cfg, r, rand);
        RoundRecord rec = protocol::run_round(bit, &tap, rand, r);
        out.stats.add(rec);
        const bool intrusion = rec.decoded.is_intrusion();
        if (cfg.record_transcript) out.transcript.push_back(std::move(rec));
        if (cfg.stop_on_intrusion && intrusion) {
            out.stats.halt.add_halt(r + 1);
            halted = true;
            break;
        }
    }
    if (cfg.stop_on_intrusion && !halted) ++out.stats.halt.unhalted_trials;
    return out;
}

// Bob's Bell probabilities on the (travel, home) marginal of `rho`.
std::array<double, 4> bob_probabilities(const DensityMatrix &rho) {
    static const std::vector<quantum::StateVector> basis = quantum::bell_basis();
    const auto p = quantum::born_probabilities(quantum::partial_trace(rho, {kTravelId, kHomeId}), basis);
    return {p[0], p[1], p[2], p[3]};
}

DensityMatrix encode(const DensityMatrix &rho, std::uint8_t bit) {
    if (protocol::encoding_for_bit(bit) == EncodingOp::Identity) return rho;
    return quantum::apply_unitary(UnitaryOp::pauli_z(), rho, {kTravelId});
}

} // namespace

// ---------------------------------------------------------------------------
// Stats

void HaltSummary::add_halt(std::uint64_t round_number) {
    min = halted_trials == 0 ? round_number : std::min(min, round_number);
    max = halted_trials == 0 ? round_number : std::max(max, round_number);
    ++halted_trials;
    sum += round_number;
    sum_sq += round_number * round_number;
}

void HaltSummary::merge(const HaltSummary &other) {
    if (other.halted_trials > 0) {
        min = halted_trials == 0 ? other.min : std::min(min, other.min);
        max = halted_trials == 0 ? other.max : std::max(max, other.max);
    }
    halted_trials += other.halted_trials;
    unhalted_trials += other.unhalted_trials;
    sum += other.sum;
    sum_sq += other.sum_sq;
}

double HaltSummary::mean() const {
    return halted_trials == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(halted_trials);
}

double HaltSummary::stddev() const {
    if (halted_trials < 2) return 0.0;
    const double n = static_cast<double>(halted_trials);
    const double m = mean();
    const double var = (static_cast<double>(sum_sq) - n * m * m) / (n - 1.0);
    return std::sqrt(std::max(var, 0.0));
}

void ExperimentStats::add(const RoundRecord &record) {
    ++rounds;
    ++bell_histogram[quantum::index_of(record.measured)];
    if (record.decoded.is_intrusion()) {
        ++intrusions;
    } else {
        ++bit_denominator;
        if (*record.decoded.bit != record.alice_bit) ++bit_errors;
    }
    if (record.eve.inferred_operation) {
        ++eve_inferences;
        if (*record.eve.inferred_operation == protocol::encoding_for_bit(record.alice_bit)) ++eve_correct;
    }
    ++cells[CellKey{record.prepared, record.alice_bit, record.eve.outcome_key(), record.measured}];
}

void ExperimentStats::merge(const ExperimentStats &other) {
    for (std::size_t i = 0; i < bell_histogram.size(); ++i) bell_histogram[i] += other.bell_histogram[i];
    rounds += other.rounds;
    intrusions += other.intrusions;
    bit_errors += other.bit_errors;
    bit_denominator += other.bit_denominator;
    eve_inferences += other.eve_inferences;
    eve_correct += other.eve_correct;
    halt.merge(other.halt);
    for (const auto &[key, count] : other.cells) cells[key] += count;
}

double ExperimentStats::detection_estimate() const {
    return rounds == 0 ? 0.0 : static_cast<double>(intrusions) / static_cast<double>(rounds);
}

double ExperimentStats::detection_stderr() const {
    if (rounds == 0) return 0.0;
    const double p = detection_estimate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(rounds));
}

double ExperimentStats::bit_error_rate() const {
    return bit_denominator == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bit_denominator);
}

std::optional<double> ExperimentStats::eve_accuracy() const {
    if (eve_inferences == 0) return std::nullopt;
    return static_cast<double>(eve_correct) / static_cast<double>(eve_inferences);
}

std::uint64_t ExperimentStats::condition_total(BellLabel prepared, std::uint8_t bit) const {
    std::uint64_t total = 0;
    for (const auto &[key, count] : cells) {
        if (key.prepared == prepared && key.alice_bit == bit) total += count;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Experiment runner

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    if (cfg.n_rounds == 0) throw InvalidArgument("n_rounds must be positive");
    if (cfg.trials == 0) throw InvalidArgument("trials must be positive");
    for (auto b : cfg.bit_pattern) {
        if (b > 1) throw InvalidArgument("bit pattern may contain only 0 and 1");
    }
    if (cfg.n_rounds > cfg.budget / cfg.trials) {
        throw BudgetExceeded("experiment needs " + std::to_string(cfg.n_rounds) + " x " +
                             std::to_string(cfg.trials) + " rounds, budget is " + std::to_string(cfg.budget));
    }

    const auto tap = adversary::make_tap(cfg.strategy);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(cfg.threads == 0 ? 1 : cfg.threads, 1, cfg.trials));

    ExperimentResult result;
    result.config = cfg;
    if (cfg.record_transcript) result.transcripts.resize(cfg.trials);

    std::vector<ExperimentStats> partial(workers);
    auto work = [&](unsigned w) {
        for (std::uint64_t t = w; t < cfg.trials; t += workers) {
            TrialOutput out = run_trial(cfg, *tap, t);
            partial[w].merge(out.stats);
            if (cfg.record_transcript) result.transcripts[t] = std::move(out.transcript);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto &th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    for (const auto &p : partial) result.stats.merge(p);
    return result;
}

std::string stats_to_json(const ExperimentResult &result) {
    const auto &cfg = result.config;
    const auto &s = result.stats;
    nlohmann::ordered_json j;
    j["strategy"] = adversary::format_strategy(cfg.strategy);
    j["seed"] = cfg.master_seed;
    j["trials"] = cfg.trials;
    j["rounds_per_trial"] = cfg.n_rounds;
    j["bit_source"] = cfg.bit_pattern.empty() ? "random" : "pattern";
    j["stop_on_intrusion"] = cfg.stop_on_intrusion;
    j["rounds_evaluated"] = s.rounds;

    nlohmann::ordered_json hist;
    for (auto label : quantum::kBellOrder) {
        hist[std::string(quantum::to_string(label))] = s.bell_histogram[quantum::index_of(label)];
    }
    j["bell_histogram"] = std::move(hist);
    j["intrusion_count"] = s.intrusions;
    j["detection_estimate"] = s.detection_estimate();
    j["detection_stderr"] = s.detection_stderr();
    j["bit_errors"] = s.bit_errors;
    j["bit_denominator"] = s.bit_denominator;
    j["bit_error_rate"] = s.bit_error_rate();
    j["eve_inferences"] = s.eve_inferences;
    j["eve_accuracy"] = s.eve_accuracy() ? nlohmann::ordered_json(*s.eve_accuracy()) : nlohmann::ordered_json(nullptr);

    if (cfg.stop_on_intrusion) {
        nlohmann::ordered_json halt;
        halt["halted_trials"] = s.halt.halted_trials;
        halt["unhalted_trials"] = s.halt.unhalted_trials;
        halt["mean_halt_round"] = s.halt.mean();
        halt["stddev_halt_round"] = s.halt.stddev();
        halt["min_halt_round"] = s.halt.min;
        halt["max_halt_round"] = s.halt.max;
        j["halt"] = std::move(halt);
    }

    auto cells = nlohmann::ordered_json::array();
    for (const auto &[key, count] : s.cells) {
        nlohmann::ordered_json c;
        c["prepared"] = std::string(quantum::to_string(key.prepared));
        c["alice_bit"] = key.alice_bit;
        c["eve"] = key.eve;
        c["measured"] = std::string(quantum::to_string(key.measured));
        c["count"] = count;
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

std::string transcript_to_jsonl(const ExperimentResult &result) {
    std::string out;
    const bool multi = result.transcripts.size() > 1;
    for (std::size_t t = 0; t < result.transcripts.size(); ++t) {
        for (const auto &rec : result.transcripts[t]) {
            out += protocol::to_json_line(rec, multi ? std::optional<std::uint64_t>(t) : std::nullopt);
            out += '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact oracle

std::array<double, 4> RoundDistribution::bell_marginal() const {
    std::array<double, 4> out{};
    for (const auto &b : branches)
        for (std::size_t i = 0; i < 4; ++i) out[i] += b.probability * b.bell[i];
    return out;
}

double RoundDistribution::intrusion_probability() const {
    const auto m = bell_marginal();
    return quantum::is_psi_family(prepared) ? m[quantum::index_of(BellLabel::PhiPlus)] +
                                                  m[quantum::index_of(BellLabel::PhiMinus)]
                                            : m[quantum::index_of(BellLabel::PsiPlus)] +
                                                  m[quantum::index_of(BellLabel::PsiMinus)];
}

std::optional<double> RoundDistribution::eve_accuracy() const {
    double informed = 0.0, correct = 0.0;
    for (const auto &b : branches) {
        if (!b.inferred) continue;
        informed += b.probability;
        if (*b.inferred == protocol::encoding_for_bit(alice_bit)) correct += b.probability;
    }
    if (informed == 0.0) return std::nullopt;
    return correct / informed;
}

double RoundDistribution::probability(const std::string &eve_outcome, BellLabel measured) const {
    double p = 0.0;
    for (const auto &b : branches) {
        if (b.eve_outcome == eve_outcome) p += b.probability * b.bell[quantum::index_of(measured)];
    }
    return p;
}

RoundDistribution exact_round_distribution(BellLabel prepared, std::uint8_t alice_bit,
                                           const adversary::StrategySpec &strategy) {
    RoundDistribution dist{prepared, alice_bit, {}};
    const DensityMatrix rho0 = quantum::density_of(quantum::make_bell(prepared, kTravelId, kHomeId));

    if (std::holds_alternative<NoEavesdropper>(strategy)) {
        dist.branches.push_back({"-", std::nullopt, 1.0, bob_probabilities(encode(rho0, alice_bit))});
        return dist;
    }

    if (const auto *spec = std::get_if<AncillaStrategy>(&strategy)) {
        const AncillaAttack attack(adversary::make_config(*spec));
        DensityMatrix rho = quantum::tensor(rho0, quantum::density_of(attack.config().initial_ancilla()));
        rho = quantum::apply_unitary(attack.unitary(), rho, {kTravelId, kAncillaId});
        rho = encode(rho, alice_bit);
        if (!attack.measures()) {
            dist.branches.push_back({"-", std::nullopt, 1.0, bob_probabilities(rho)});
            return dist;
        }
        const auto &basis = attack.basis();
        for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
            const auto proj = quantum::project(rho, {kTravelId, kAncillaId}, basis.vectors[k]);
            if (!proj.state) continue;
            dist.branches.push_back({"r" + std::to_string(k), basis.meaning[k].value_or(EncodingOp::Identity),
                                     proj.probability, bob_probabilities(*proj.state)});
        }
        return dist;
    }

    const auto &ir = std::get<InterceptResendStrategy>(strategy);
    const auto basis = adversary::intercept_basis_vectors(ir.basis);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto fwd = quantum::project(rho0, {kTravelId}, basis[i]);
        if (!fwd.state) continue;
        const DensityMatrix encoded = encode(*fwd.state, alice_bit);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto ret = quantum::project(encoded, {kTravelId}, basis[j]);
            if (!ret.state) continue;
            dist.branches.push_back({"f" + std::to_string(i) + "r" + std::to_string(j),
                                     i == j ? EncodingOp::Identity : EncodingOp::PhaseFlip,
                                     fwd.probability * ret.probability, bob_probabilities(*ret.state)});
        }
    }
    return dist;
}

double detection_probability(const adversary::StrategySpec &strategy) {
    double total = 0.0;
    for (auto prepared : {BellLabel::PsiPlus, BellLabel::PhiPlus}) {
        for (std::uint8_t bit : {0, 1}) {
            total += 0.25 * exact_round_distribution(prepared, bit, strategy).intrusion_probability();
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Survival

double survival_probability(const SurvivalQuery &q) {
    if (!(q.p >= 0.0 && q.p <= 1.0)) throw InvalidArgument("detection probability must lie in [0, 1]");
    if (q.n == 0 || q.p == 0.0) return 0.0;
    if (q.p == 1.0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(q.n) * std::log1p(-q.p) / std::numbers::ln10;
}

std::string format_log10_scientific(double log10_value, int significant) {
    if (significant < 1) throw InvalidArgument("need at least one significant digit");
    if (std::isinf(log10_value) && log10_value < 0) return "0";
    if (!std::isfinite(log10_value)) throw InvalidArgument("cannot render a non-finite magnitude");
    if (log10_value == 0.0) return "1";

    long long exponent = static_cast<long long>(std::floor(log10_value));
    double mantissa = std::pow(10.0, log10_value - static_cast<double>(exponent));
    std::string digits = fixed(mantissa, significant - 1);
    if (digits.starts_with("10")) {
        ++exponent;
        digits = fixed(mantissa / 10.0, significant - 1);
    }
    if (exponent == 0) return digits;
    return digits + "e" + std::to_string(exponent);
}

std::vector<CurveRow> success_curve(std::span<const double> d_grid, std::span<const std::uint64_t> n_grid) {
    if (d_grid.empty() || n_grid.empty()) throw InvalidArgument("sweep grids must be nonempty");
    std::vector<CurveRow> rows;
    rows.reserve(d_grid.size() * n_grid.size());
    for (double d : d_grid) {
        const double p = detection_probability(AncillaStrategy{d, std::nullopt});
        for (auto n : n_grid) rows.push_back({d, n, p, survival_probability({n, p})});
    }
    return rows;
}

std::string curve_to_csv(std::span<const CurveRow> rows) {
    std::string out = "d,n,p_detect,log10_survival\n";
    for (const auto &r : rows) {
        out += shortest(r.d) + "," + std::to_string(r.n) + "," + fixed(r.p_detect, 12) + "," +
               fixed(r.log10_survival, 10) + "\n";
    }
    return out;
}

std::string curve_to_json(std::span<const CurveRow> rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json j;
        j["d"] = r.d;
        j["n"] = r.n;
        j["p_detect"] = r.p_detect;
        j["log10_survival"] = std::isinf(r.log10_survival) ? nlohmann::ordered_json("-inf")
                                                            : nlohmann::ordered_json(r.log10_survival);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

} // namespace pingpong::analysis
