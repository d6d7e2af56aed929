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

#include "pingpong/protocol.hpp"

#include <json.hpp>

#include <algorithm>

namespace pingpong::protocol {

using quantum::UnitaryOp;

std::string_view to_string(EncodingOp op) {
    return op == EncodingOp::Identity ? "Identity" : "PhaseFlip";
}

std::optional<EncodingOp> parse_encoding_op(std::string_view text) {
    if (text == "Identity") return EncodingOp::Identity;
    if (text == "PhaseFlip") return EncodingOp::PhaseFlip;
    return std::nullopt;
}

EncodingOp encoding_for_bit(std::uint8_t bit) {
    if (bit > 1) throw InvalidArgument("bit must be 0 or 1");
    return bit == 0 ? EncodingOp::Identity : EncodingOp::PhaseFlip;
}

std::string EveRecord::outcome_key() const {
    std::string key;
    if (forward_outcome) key += "f" + std::to_string(*forward_outcome);
    if (measurement_outcome) key += "r" + std::to_string(*measurement_outcome);
    return key.empty() ? "-" : key;
}

// ---------------------------------------------------------------------------
// TapView

void TapView::check_targets(const std::vector<std::string> &targets) const {
    if (std::find(targets.begin(), targets.end(), protected_) != targets.end()) {
        throw ContractViolation("channel tap addressed the inaccessible subsystem '" + protected_ + "'");
    }
}

void TapView::attach(const StateVector &ancilla) {
    for (const auto &part : ancilla.layout().subsystems()) {
        if (joint_.layout().contains(part.id)) {
            throw ContractViolation("channel tap re-attached existing subsystem '" + part.id + "'");
        }
    }
    check_targets(ancilla.layout().ids());
    joint_ = quantum::tensor(joint_, ancilla);
}

void TapView::apply(const UnitaryOp &u, const std::vector<std::string> &targets) {
    check_targets(targets);
    joint_ = quantum::apply_unitary(u, joint_, targets);
}

std::size_t TapView::measure(const std::vector<std::string> &targets, std::span<const StateVector> basis,
                             RandomSource &rand) {
    check_targets(targets);
    auto m = quantum::measure_in_basis(joint_, targets, basis, rand);
    joint_ = std::move(m.state);
    return m.outcome;
}

// ---------------------------------------------------------------------------
// Bob and Alice

Preparation bob_prepare(RandomSource &rand) {
    const BellLabel label = rand.coin() ? BellLabel::PhiPlus : BellLabel::PsiPlus;
    return {label, quantum::make_bell(label, std::string(kTravel), std::string(kHome))};
}

StateVector alice_encode(std::uint8_t bit, const StateVector &joint) {
    const EncodingOp op = encoding_for_bit(bit);
    if (!joint.layout().contains(kTravel)) {
        throw InvalidArgument("joint state has no travel subsystem");
    }
    if (op == EncodingOp::Identity) return joint;
    return quantum::apply_unitary(UnitaryOp::pauli_z(), joint, {std::string(kTravel)});
}

BellLabel bob_measure(const StateVector &joint, RandomSource &rand) {
    static const std::vector<StateVector> basis = quantum::bell_basis();
    const auto m = quantum::measure_in_basis(joint, {std::string(kTravel), std::string(kHome)}, basis, rand);
    return quantum::kBellOrder[m.outcome];
}

DecodeOutcome bob_decode(BellLabel prepared, BellLabel measured) {
    switch (prepared) {
    case BellLabel::PsiPlus:
        if (measured == BellLabel::PsiPlus) return DecodeOutcome::of_bit(0);
        if (measured == BellLabel::PsiMinus) return DecodeOutcome::of_bit(1);
        return DecodeOutcome::intrusion();
    case BellLabel::PhiPlus:
        if (measured == BellLabel::PhiPlus) return DecodeOutcome::of_bit(0);
        if (measured == BellLabel::PhiMinus) return DecodeOutcome::of_bit(1);
        return DecodeOutcome::intrusion();
    default:
        throw InvalidArgument("Bob never prepares " + std::string(quantum::to_string(prepared)));
    }
}

RoundRecord run_round(std::uint8_t alice_bit, const ChannelTap *tap, RandomSource &rand,
                      std::uint64_t round_index) {
    RoundRecord rec;
    rec.round = round_index;
    rec.alice_bit = alice_bit;

    Preparation prep = bob_prepare(rand);
    rec.prepared = prep.label;
    StateVector joint = std::move(prep.state);

    TapView view(joint, std::string(kHome));
    if (tap) tap->on_forward(view, rand, rec.eve);
    joint = alice_encode(alice_bit, joint);
    if (tap) tap->on_return(view, rand, rec.eve);

    rec.measured = bob_measure(joint, rand);
    rec.decoded = bob_decode(rec.prepared, rec.measured);
    return rec;
}

std::vector<RoundRecord> run_message(std::span<const std::uint8_t> bits, const ChannelTap *tap,
                                     bool stop_on_intrusion, RandomSource &rand) {
    std::vector<RoundRecord> out;
    out.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out.push_back(run_round(bits[i], tap, rand, i));
        if (stop_on_intrusion && out.back().decoded.is_intrusion()) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

template <class T> nlohmann::ordered_json optional_json(const std::optional<T> &v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

BellLabel label_from(const nlohmann::json &j) {
    auto label = quantum::parse_bell_label(j.get<std::string>());
    if (!label) throw InvalidArgument("unknown Bell label " + j.dump());
    return *label;
}

template <class T> std::optional<T> optional_from(const nlohmann::json &j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

} // namespace

std::string to_json_line(const RoundRecord &record, std::optional<std::uint64_t> trial) {
    nlohmann::ordered_json eve;
    eve["action"] = record.eve.action;
    eve["forward_outcome"] = optional_json(record.eve.forward_outcome);
    eve["outcome"] = optional_json(record.eve.measurement_outcome);
    eve["inferred"] = record.eve.inferred_operation
                          ? nlohmann::ordered_json(std::string(to_string(*record.eve.inferred_operation)))
                          : nlohmann::ordered_json(nullptr);

    nlohmann::ordered_json j;
    if (trial) j["trial"] = *trial;
    j["round"] = record.round;
    j["prepared"] = std::string(quantum::to_string(record.prepared));
    j["alice_bit"] = record.alice_bit;
    j["eve"] = std::move(eve);
    j["measured"] = std::string(quantum::to_string(record.measured));
    if (record.decoded.is_intrusion()) {
        j["decoded"] = "Intrusion";
    } else {
        j["decoded"] = *record.decoded.bit;
    }
    return j.dump();
}

RoundRecord round_record_from_json(std::string_view line) {
    try {
        const auto j = nlohmann::json::parse(line);
        RoundRecord rec;
        rec.round = j.at("round").get<std::uint64_t>();
        rec.prepared = label_from(j.at("prepared"));
        rec.alice_bit = j.at("alice_bit").get<std::uint8_t>();
        const auto &eve = j.at("eve");
        rec.eve.action = eve.at("action").get<std::string>();
        rec.eve.forward_outcome = optional_from<std::size_t>(eve.at("forward_outcome"));
        rec.eve.measurement_outcome = optional_from<std::size_t>(eve.at("outcome"));
        if (!eve.at("inferred").is_null()) {
            rec.eve.inferred_operation = parse_encoding_op(eve.at("inferred").get<std::string>());
            if (!rec.eve.inferred_operation) throw InvalidArgument("unknown encoding operation");
        }
        rec.measured = label_from(j.at("measured"));
        const auto &decoded = j.at("decoded");
        rec.decoded = decoded.is_string() ? DecodeOutcome::intrusion()
                                          : DecodeOutcome::of_bit(decoded.get<std::uint8_t>());
        return rec;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("malformed round record: ") + e.what());
    }
}

} // namespace pingpong::protocol
