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
 * Bob and Alice for the two-way (ping-pong) direct communication protocol.
 *
 * Bob prepares |Ψ+> or |Φ+> at random on (travel, home), sends the travel
 * qubit to Alice, Alice encodes one bit with I or σ_z, the qubit comes back and
 * Bob measures both qubits in the Bell basis. A same-family result decodes the
 * bit, a result from the other family (Ψ vs Φ) reveals an eavesdropper.
 *
 * Eavesdroppers plug into the channel as ChannelTap objects. Taps see the
 * joint state only through a TapView that refuses any operation addressing
 * Bob's home qubit.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pingpong/quantum.hpp"
#include "pingpong/random.hpp"

namespace pingpong::protocol {

using quantum::BellLabel;
using quantum::StateVector;

inline constexpr std::string_view kTravel = "travel";
inline constexpr std::string_view kHome = "home";
inline constexpr std::string_view kAncilla = "ancilla";

/// Alice's local operation: Identity encodes 0, PhaseFlip (σ_z) encodes 1.
enum class EncodingOp { Identity = 0, PhaseFlip = 1 };

std::string_view to_string(EncodingOp op);
std::optional<EncodingOp> parse_encoding_op(std::string_view text);
EncodingOp encoding_for_bit(std::uint8_t bit);

/// Bob's verdict for one round: a decoded bit or a detected intrusion.
struct DecodeOutcome {
    std::optional<std::uint8_t> bit;

    static DecodeOutcome of_bit(std::uint8_t b) { return {b}; }
    static DecodeOutcome intrusion() { return {std::nullopt}; }
    bool is_intrusion() const { return !bit.has_value(); }
    bool operator==(const DecodeOutcome &) const = default;
};

/// What an eavesdropper did during one round.
///
/// `inferred_operation` is present exactly when a post-encoding measurement
/// took place. `forward_outcome` and `measurement_outcome` are basis indices
/// of the forward-leg and return-leg measurements.
struct EveRecord {
    std::string action = "none";
    std::optional<std::size_t> forward_outcome;
    std::optional<std::size_t> measurement_outcome;
    std::optional<EncodingOp> inferred_operation;

    /// Compact outcome key: "-" when nothing was measured, otherwise
    /// "f<i>" / "r<j>" / "f<i>r<j>".
    std::string outcome_key() const;

    bool operator==(const EveRecord &) const = default;
};

/// Restricted handle on the joint state handed to channel taps.
class TapView {
  public:
    TapView(StateVector &joint, std::string protected_id)
        : joint_(joint), protected_(std::move(protected_id)) {}

    const quantum::SubsystemLayout &layout() const { return joint_.layout(); }
    bool has(std::string_view id) const { return joint_.layout().contains(id); }

    /// Appends a fresh subsystem in the given state. Its ids must be new.
    void attach(const StateVector &ancilla);
    void apply(const quantum::UnitaryOp &u, const std::vector<std::string> &targets);
    std::size_t measure(const std::vector<std::string> &targets, std::span<const StateVector> basis,
                        RandomSource &rand);

  private:
    void check_targets(const std::vector<std::string> &targets) const;

    StateVector &joint_;
    std::string protected_;
};

/// Eavesdropper hooks on the two legs of the quantum channel. Implementations
/// hold only immutable configuration; per-round data goes into the record.
class ChannelTap {
  public:
    virtual ~ChannelTap() = default;

    /// Bob -> Alice leg, before encoding.
    virtual void on_forward(TapView &view, RandomSource &rand, EveRecord &record) const = 0;
    /// Alice -> Bob leg, after encoding.
    virtual void on_return(TapView &view, RandomSource &rand, EveRecord &record) const = 0;
};

struct RoundRecord {
    std::uint64_t round = 0;
    BellLabel prepared = BellLabel::PsiPlus;
    std::uint8_t alice_bit = 0;
    EveRecord eve;
    BellLabel measured = BellLabel::PsiPlus;
    DecodeOutcome decoded;

    bool operator==(const RoundRecord &) const = default;
};

struct Preparation {
    BellLabel label;
    StateVector state; // layout (travel, home)
};

/// Ψ+ or Φ+ with probability 1/2 each, on (travel, home).
Preparation bob_prepare(RandomSource &rand);

/// Applies σ_z to the travel qubit for bit 1, nothing for bit 0. Any other
/// subsystems (an attached ancilla) are left alone.
StateVector alice_encode(std::uint8_t bit, const StateVector &joint);

/// Bell-basis measurement of (travel, home). Extra subsystems are traced out
/// implicitly by the measurement.
BellLabel bob_measure(const StateVector &joint, RandomSource &rand);

/// Decode table. Throws InvalidArgument if `prepared` is Ψ- or Φ-.
DecodeOutcome bob_decode(BellLabel prepared, BellLabel measured);

/// One full round: prepare, forward tap, encode, return tap, measure, decode.
/// `tap` may be null for an untapped channel.
RoundRecord run_round(std::uint8_t alice_bit, const ChannelTap *tap, RandomSource &rand,
                      std::uint64_t round_index = 0);

/// Sequential rounds for `bits`. With `stop_on_intrusion` the run halts after
/// the first round that decodes as an intrusion.
std::vector<RoundRecord> run_message(std::span<const std::uint8_t> bits, const ChannelTap *tap,
                                     bool stop_on_intrusion, RandomSource &rand);

/// One JSON object: round, prepared, alice_bit, eve, measured, decoded.
/// Multi-trial transcripts prefix a "trial" field.
std::string to_json_line(const RoundRecord &record, std::optional<std::uint64_t> trial = std::nullopt);
RoundRecord round_record_from_json(std::string_view line);

} // namespace pingpong::protocol
