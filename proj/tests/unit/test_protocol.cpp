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

#include "pingpong/adversary.hpp"
#include "pingpong/analysis.hpp"
#include "pingpong/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace q = pingpong::quantum;
namespace pr = pingpong::protocol;
using pingpong::ContractViolation;
using pingpong::InvalidArgument;
using pingpong::RandomSource;
using q::BellLabel;
using q::StateVector;

namespace {

// Taps that break the channel rules in different ways.
class HomeToucher final : public pr::ChannelTap {
  public:
    enum class Mode { Apply, Measure, Attach };
    explicit HomeToucher(Mode m) : mode_(m) {}
    void on_forward(pr::TapView &view, RandomSource &rand, pr::EveRecord &) const override {
        switch (mode_) {
        case Mode::Apply:
            view.apply(q::UnitaryOp::pauli_z(), {std::string(pr::kHome)});
            break;
        case Mode::Measure:
            view.measure({std::string(pr::kTravel), std::string(pr::kHome)}, q::bell_basis(), rand);
            break;
        case Mode::Attach:
            view.attach(StateVector::basis(q::SubsystemLayout{{std::string(pr::kHome), 2}}, 0));
            break;
        }
    }
    void on_return(pr::TapView &, RandomSource &, pr::EveRecord &) const override {}

  private:
    Mode mode_;
};

} // namespace

TEST(Encoding, BitsMapToOperations) {
    EXPECT_EQ(pr::encoding_for_bit(0), pr::EncodingOp::Identity);
    EXPECT_EQ(pr::encoding_for_bit(1), pr::EncodingOp::PhaseFlip);
    EXPECT_THROW(pr::encoding_for_bit(2), InvalidArgument);
    EXPECT_EQ(pr::parse_encoding_op("PhaseFlip"), pr::EncodingOp::PhaseFlip);
}

TEST(Bob, PreparesBothFamiliesEvenly) {
    RandomSource rand(17);
    const int n = 100000;
    int psi = 0;
    for (int i = 0; i < n; ++i) {
        const auto prep = pr::bob_prepare(rand);
        ASSERT_TRUE(prep.label == BellLabel::PsiPlus || prep.label == BellLabel::PhiPlus);
        psi += prep.label == BellLabel::PsiPlus;
        if (i < 10)
            EXPECT_TRUE(q::phase_equivalent(
                prep.state, q::make_bell(prep.label, std::string(pr::kTravel), std::string(pr::kHome))));
    }
    EXPECT_LE(std::abs(psi - n / 2.0), 3.0 * std::sqrt(n * 0.25));
}

TEST(Bob, DecodeTable) {
    using pr::DecodeOutcome;
    EXPECT_EQ(pr::bob_decode(BellLabel::PsiPlus, BellLabel::PsiPlus), DecodeOutcome::of_bit(0));
    EXPECT_EQ(pr::bob_decode(BellLabel::PsiPlus, BellLabel::PsiMinus), DecodeOutcome::of_bit(1));
    EXPECT_EQ(pr::bob_decode(BellLabel::PhiPlus, BellLabel::PhiPlus), DecodeOutcome::of_bit(0));
    EXPECT_EQ(pr::bob_decode(BellLabel::PhiPlus, BellLabel::PhiMinus), DecodeOutcome::of_bit(1));
    for (auto m : {BellLabel::PhiPlus, BellLabel::PhiMinus})
        EXPECT_TRUE(pr::bob_decode(BellLabel::PsiPlus, m).is_intrusion());
    for (auto m : {BellLabel::PsiPlus, BellLabel::PsiMinus})
        EXPECT_TRUE(pr::bob_decode(BellLabel::PhiPlus, m).is_intrusion());
    EXPECT_THROW(pr::bob_decode(BellLabel::PsiMinus, BellLabel::PsiMinus), InvalidArgument);
}

TEST(Alice, EncodingFlipsSignPartner) {
    const auto psi = q::make_bell(BellLabel::PsiPlus, "travel", "home");
    EXPECT_TRUE(q::phase_equivalent(pr::alice_encode(0, psi), psi));
    EXPECT_TRUE(q::phase_equivalent(pr::alice_encode(1, psi), q::make_bell(BellLabel::PsiMinus, "travel", "home")));
    EXPECT_THROW(pr::alice_encode(2, psi), InvalidArgument);
}

TEST(Round, CleanChannelAlwaysDecodes) {
    RandomSource rand(1);
    for (int i = 0; i < 2000; ++i) {
        const std::uint8_t bit = static_cast<std::uint8_t>(i % 2);
        const auto rec = pr::run_round(bit, nullptr, rand, static_cast<std::uint64_t>(i));
        ASSERT_FALSE(rec.decoded.is_intrusion());
        EXPECT_EQ(*rec.decoded.bit, bit);
        EXPECT_EQ(rec.round, static_cast<std::uint64_t>(i));
        EXPECT_EQ(rec.eve.action, "none");
    }
}

TEST(Round, TapsCannotTouchHomeQubit) {
    RandomSource rand(2);
    for (auto mode : {HomeToucher::Mode::Apply, HomeToucher::Mode::Measure, HomeToucher::Mode::Attach}) {
        HomeToucher tap(mode);
        EXPECT_THROW(pr::run_round(0, &tap, rand), ContractViolation);
    }
}

TEST(Round, MessageStopsAtFirstIntrusion) {
    pingpong::adversary::AncillaAttack tap(pingpong::adversary::AncillaAttackConfig::orthonormal(0.5));
    RandomSource rand(4);
    const std::vector<std::uint8_t> bits(200, 1);
    const auto recs = pr::run_message(bits, &tap, true, rand);
    ASSERT_FALSE(recs.empty());
    ASSERT_LT(recs.size(), bits.size());
    EXPECT_TRUE(recs.back().decoded.is_intrusion());
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) EXPECT_FALSE(recs[i].decoded.is_intrusion());
    RandomSource rand2(4);
    EXPECT_EQ(pr::run_message(bits, &tap, false, rand2).size(), bits.size());
}

TEST(Round, HomeQubitMarginalUnchangedByEveOnAverage) {
    // Non-selective average over Eve's return measurement leaves Bob's home
    // qubit maximally mixed for every attack strength.
    namespace adv = pingpong::adversary;
    for (double d : {0.0, 0.25, 0.5, 1.0}) {
        const auto cfg = adv::AncillaAttackConfig::orthonormal(d);
        for (auto label : {BellLabel::PsiPlus, BellLabel::PhiPlus}) {
            for (std::uint8_t bit : {0, 1}) {
                const auto joint = pr::alice_encode(
                    bit, adv::eve_forward_tap(cfg, q::make_bell(label, "travel", "home")));
                const auto rho = q::density_of(joint);
                q::Matrix avg(2, 2);
                for (const auto &v : adv::discrimination_basis(cfg).vectors) {
                    const auto p = q::project(rho, {"travel", "ancilla"}, v);
                    if (!p.state) continue;
                    const auto home = q::partial_trace(*p.state, {"home"});
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) avg(i, j) += p.probability * home(i, j);
                }
                q::Matrix half = q::Matrix::identity(2);
                half *= 0.5;
                EXPECT_LT(avg.max_abs_diff(half), 1e-12) << "d=" << d;
            }
        }
    }
}

TEST(Json, LineHasFixedKeyOrder) {
    pr::RoundRecord r;
    r.round = 3;
    r.prepared = BellLabel::PhiPlus;
    r.alice_bit = 1;
    r.measured = BellLabel::PsiMinus;
    r.decoded = pr::DecodeOutcome::intrusion();
    r.eve.action = "ancilla";
    r.eve.measurement_outcome = 2;
    r.eve.inferred_operation = pr::EncodingOp::Identity;
    EXPECT_EQ(pr::to_json_line(r),
              "{\"round\":3,\"prepared\":\"PhiPlus\",\"alice_bit\":1,\"eve\":{\"action\":\"ancilla\","
              "\"forward_outcome\":null,\"outcome\":2,\"inferred\":\"Identity\"},\"measured\":\"PsiMinus\","
              "\"decoded\":\"Intrusion\"}");
    EXPECT_EQ(pr::to_json_line(r, 5).rfind("{\"trial\":5,\"round\":3", 0), 0u);
}

TEST(Json, RoundTripsRecordsFromEveryStrategy) {
    namespace adv = pingpong::adversary;
    RandomSource rand(77);
    for (const char *spec : {"none", "ancilla:d=0.3", "intercept_resend:basis=diagonal", "intercept_resend"}) {
        const auto tap = adv::make_tap(adv::parse_strategy(spec));
        for (int i = 0; i < 50; ++i) {
            const auto rec = pr::run_round(static_cast<std::uint8_t>(i & 1), tap.get(), rand, i);
            EXPECT_EQ(pr::round_record_from_json(pr::to_json_line(rec)), rec) << spec;
        }
    }
    EXPECT_THROW(pr::round_record_from_json("{\"round\":1}"), InvalidArgument);
    EXPECT_THROW(pr::round_record_from_json("not json"), InvalidArgument);
}
