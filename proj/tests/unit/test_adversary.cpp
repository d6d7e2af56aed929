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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>

namespace q = pingpong::quantum;
namespace pr = pingpong::protocol;
namespace adv = pingpong::adversary;
namespace an = pingpong::analysis;
using pingpong::ContractViolation;
using pingpong::InvalidArgument;
using pingpong::RandomSource;
using q::BellLabel;
using q::StateVector;
using C = std::complex<double>;

namespace {

constexpr double kR = 0.70710678118654752440;

// Brute-force model of one attacked round with orthonormal χ's
// (χ00 = χ11 = e0, χ01 = e1, χ10 = e2), written with raw arrays.
// Amplitudes are indexed [travel][home][ancilla].
using Joint = std::array<std::array<std::array<C, 4>, 2>, 2>;
using Pair = std::array<std::array<C, 2>, 2>; // [travel][home]
using TravelAncilla = std::array<std::array<C, 4>, 2>;

Pair bell_pair(BellLabel l) {
    Pair p{};
    switch (l) {
    case BellLabel::PsiPlus: p[0][1] = kR; p[1][0] = kR; break;
    case BellLabel::PsiMinus: p[0][1] = kR; p[1][0] = -kR; break;
    case BellLabel::PhiPlus: p[0][0] = kR; p[1][1] = kR; break;
    case BellLabel::PhiMinus: p[0][0] = kR; p[1][1] = -kR; break;
    }
    return p;
}

struct OracleCell {
    double eve_prob[4];      // per discrimination outcome
    double joint[4][4];      // P(outcome k, Bell label L)
    double unmeasured[4];    // Bell marginal when Eve never measures
};

OracleCell brute_force(double d, BellLabel prepared, int bit) {
    const double alpha = std::sqrt(1.0 - d), beta = std::sqrt(d);
    const Pair start = bell_pair(prepared);
    Joint psi{};
    for (int t = 0; t < 2; ++t)
        for (int h = 0; h < 2; ++h) {
            const C a = start[t][h];
            if (t == 0) {
                psi[0][h][0] += alpha * a;
                psi[1][h][1] += beta * a;
            } else {
                psi[1][h][0] += alpha * a;
                psi[0][h][2] += beta * a;
            }
        }
    if (bit == 1)
        for (int h = 0; h < 2; ++h)
            for (int e = 0; e < 4; ++e) psi[1][h][e] = -psi[1][h][e];

    std::array<TravelAncilla, 4> v{};
    v[0][0][0] = kR; v[0][1][1] = kR;
    v[1][0][0] = kR; v[1][1][1] = -kR;
    v[2][1][0] = kR; v[2][0][2] = kR;
    v[3][1][0] = kR; v[3][0][2] = -kR;

    OracleCell out{};
    for (int k = 0; k < 4; ++k) {
        C phi[2] = {};
        for (int h = 0; h < 2; ++h)
            for (int t = 0; t < 2; ++t)
                for (int e = 0; e < 4; ++e) phi[h] += std::conj(v[k][t][e]) * psi[t][h][e];
        out.eve_prob[k] = std::norm(phi[0]) + std::norm(phi[1]);
        for (int l = 0; l < 4; ++l) {
            const Pair b = bell_pair(q::kBellOrder[l]);
            double p = 0.0;
            for (int e = 0; e < 4; ++e) {
                C amp = 0.0;
                for (int t = 0; t < 2; ++t)
                    for (int h = 0; h < 2; ++h) amp += std::conj(b[t][h]) * v[k][t][e] * phi[h];
                p += std::norm(amp);
            }
            out.joint[k][l] = p;
        }
    }
    for (int l = 0; l < 4; ++l) {
        const Pair b = bell_pair(q::kBellOrder[l]);
        double p = 0.0;
        for (int e = 0; e < 4; ++e) {
            C amp = 0.0;
            for (int t = 0; t < 2; ++t)
                for (int h = 0; h < 2; ++h) amp += std::conj(b[t][h]) * psi[t][h][e];
            p += std::norm(amp);
        }
        out.unmeasured[l] = p;
    }
    return out;
}

double closed_form_accuracy(double d) { return 0.5 + std::sqrt(d * (1.0 - d)); }

} // namespace

TEST(AttackConfig, Validation) {
    EXPECT_THROW(adv::AncillaAttackConfig::orthonormal(-0.1), InvalidArgument);
    EXPECT_THROW(adv::AncillaAttackConfig::orthonormal(1.1), InvalidArgument);
    EXPECT_THROW(adv::AncillaAttackConfig::with_overlap(0.5, 1.5), InvalidArgument);
    const q::SubsystemLayout a2{{"ancilla", 2}};
    const auto e0 = StateVector::basis(a2, 0);
    const auto e1 = StateVector::basis(a2, 1);
    // The two images of |0,χ> and |1,χ> must stay orthogonal.
    EXPECT_NO_THROW(adv::AncillaAttackConfig(0.3, 2, {e0, e1, e1, e0}));
    EXPECT_THROW(adv::AncillaAttackConfig(0.3, 2, {e0, e0, e1, e0}), InvalidArgument);
    EXPECT_THROW(adv::AncillaAttackConfig(0.3, 5, {e0, e0, e0, e0}), InvalidArgument);
    EXPECT_THROW(adv::AncillaAttackConfig(0.3, 2, {e0, e1, e0}), InvalidArgument);
}

TEST(AttackUnitary, ActsAsDilationFormula) {
    for (double d : {0.0, 0.2, 0.5, 1.0}) {
        const auto cfg = adv::AncillaAttackConfig::orthonormal(d);
        const auto u = adv::build_attack_unitary(cfg);
        ASSERT_EQ(u.dim(), 8u);
        const double alpha = std::sqrt(1 - d), beta = std::sqrt(d);
        // Column |t=0, e0> is index 0, column |t=1, e0> is index 4.
        EXPECT_NEAR(std::abs(u.entries()(0, 0) - alpha), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(u.entries()(4 + 1, 0) - beta), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(u.entries()(4, 4) - alpha), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(u.entries()(2, 4) - beta), 0.0, 1e-12);
        EXPECT_NEAR(cfg.alpha() * cfg.alpha() + cfg.beta() * cfg.beta(), 1.0, 1e-15);
    }
}

TEST(AttackUnitary, OverlapFamilyStillUnitary) {
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
        const auto cfg = adv::AncillaAttackConfig::with_overlap(0.4, s);
        EXPECT_NO_THROW(adv::build_attack_unitary(cfg));
        EXPECT_NEAR(std::abs(q::inner(cfg.chi(0, 0), cfg.chi(0, 1))), s, 1e-12);
    }
}

TEST(Discrimination, BasisIsOrthonormalWithMeanings) {
    for (double s : {0.0, 0.5}) {
        const auto b = adv::discrimination_basis(adv::AncillaAttackConfig::with_overlap(0.5, s));
        EXPECT_EQ(b.vectors.size(), 8u);
        EXPECT_NO_THROW(q::require_orthonormal_basis(b.vectors, 8));
        EXPECT_EQ(b.meaning[0], pr::EncodingOp::Identity);
        EXPECT_EQ(b.meaning[1], pr::EncodingOp::PhaseFlip);
    }
}

TEST(Oracle, AncillaMatchesBruteForceModel) {
    for (double d : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
        const adv::StrategySpec spec = adv::AncillaStrategy{d, std::nullopt};
        for (auto prep : {BellLabel::PsiPlus, BellLabel::PhiPlus})
            for (int bit : {0, 1}) {
                const auto ref = brute_force(d, prep, bit);
                const auto dist = an::exact_round_distribution(prep, static_cast<std::uint8_t>(bit), spec);
                const auto marginal = dist.bell_marginal();
                for (int l = 0; l < 4; ++l) {
                    if (d == 0.0) {
                        EXPECT_NEAR(marginal[l], ref.unmeasured[l], 1e-12);
                        continue;
                    }
                    double m = 0.0;
                    for (int k = 0; k < 4; ++k) {
                        m += ref.joint[k][l];
                        EXPECT_NEAR(dist.probability("r" + std::to_string(k), q::kBellOrder[l]), ref.joint[k][l],
                                    1e-12)
                            << "d=" << d << " k=" << k << " l=" << l;
                    }
                    EXPECT_NEAR(marginal[l], m, 1e-12);
                }
                if (d > 0.0) {
                    // Outcomes 0 and 2 mean Identity, 1 and 3 mean PhaseFlip.
                    const double right = bit == 0 ? ref.eve_prob[0] + ref.eve_prob[2]
                                                  : ref.eve_prob[1] + ref.eve_prob[3];
                    EXPECT_NEAR(*dist.eve_accuracy(), right, 1e-12);
                    EXPECT_NEAR(*dist.eve_accuracy(), closed_form_accuracy(d), 1e-12);
                }
            }
    }
}

TEST(Oracle, FrozenValuesAtQuarterStrength) {
    // 1/2 + sqrt(3/16)
    constexpr double kAccuracyQuarter = 0.93301270189221932;
    const adv::StrategySpec spec = adv::AncillaStrategy{0.25, std::nullopt};
    const auto dist = an::exact_round_distribution(BellLabel::PhiPlus, 1, spec);
    EXPECT_NEAR(*dist.eve_accuracy(), kAccuracyQuarter, 1e-12);
    EXPECT_NEAR(dist.intrusion_probability(), 0.5, 1e-12);
    EXPECT_NEAR(an::detection_probability(spec), 0.5, 1e-12);
}

TEST(Oracle, FullInformationPoint) {
    const adv::StrategySpec spec = adv::AncillaStrategy{0.5, std::nullopt};
    for (auto prep : {BellLabel::PsiPlus, BellLabel::PhiPlus})
        for (std::uint8_t bit : {0, 1}) {
            const auto dist = an::exact_round_distribution(prep, bit, spec);
            for (double p : dist.bell_marginal()) EXPECT_NEAR(p, 0.25, 1e-12);
            EXPECT_NEAR(*dist.eve_accuracy(), 1.0, 1e-12);
            EXPECT_NEAR(dist.intrusion_probability(), 0.5, 1e-12);
        }
}

TEST(Oracle, ZeroStrengthIsIndistinguishableFromNoEve) {
    for (auto prep : {BellLabel::PsiPlus, BellLabel::PhiPlus})
        for (std::uint8_t bit : {0, 1}) {
            const auto a = an::exact_round_distribution(prep, bit, adv::AncillaStrategy{0.0, std::nullopt});
            const auto b = an::exact_round_distribution(prep, bit, adv::NoEavesdropper{});
            for (int l = 0; l < 4; ++l) EXPECT_NEAR(a.bell_marginal()[l], b.bell_marginal()[l], 1e-12);
            EXPECT_EQ(a.intrusion_probability(), 0.0);
        }
}

TEST(Oracle, InterceptResendHandComputed) {
    // Computational: Bob gets |f, 1-f> (Ψ prep) or |f, f> (Φ prep); half of
    // each lands on the wrong sign, none on the wrong family. Eve always
    // infers Identity.
    const adv::StrategySpec comp = adv::InterceptResendStrategy{adv::InterceptBasis::Computational};
    const auto c0 = an::exact_round_distribution(BellLabel::PsiPlus, 0, comp);
    const auto c1 = an::exact_round_distribution(BellLabel::PhiPlus, 1, comp);
    const double psi_half[4] = {0.5, 0.5, 0, 0}, phi_half[4] = {0, 0, 0.5, 0.5};
    for (int l = 0; l < 4; ++l) {
        EXPECT_NEAR(c0.bell_marginal()[l], psi_half[l], 1e-12);
        EXPECT_NEAR(c1.bell_marginal()[l], phi_half[l], 1e-12);
    }
    EXPECT_NEAR(*c0.eve_accuracy(), 1.0, 1e-12);
    EXPECT_NEAR(*c1.eve_accuracy(), 0.0, 1e-12);

    // Diagonal: Ψ+ = (|++> - |-->)/√2, so Eve's two outcomes agree unless
    // Alice flipped; Bob sees |±±> or |∓±>, each half in the wrong family.
    const adv::StrategySpec diag = adv::InterceptResendStrategy{adv::InterceptBasis::Diagonal};
    const auto d0 = an::exact_round_distribution(BellLabel::PsiPlus, 0, diag);
    const auto d1 = an::exact_round_distribution(BellLabel::PsiPlus, 1, diag);
    const double e0[4] = {0.5, 0, 0.5, 0}, e1[4] = {0, 0.5, 0, 0.5};
    for (int l = 0; l < 4; ++l) {
        EXPECT_NEAR(d0.bell_marginal()[l], e0[l], 1e-12);
        EXPECT_NEAR(d1.bell_marginal()[l], e1[l], 1e-12);
    }
    EXPECT_NEAR(d0.probability("f1r1", BellLabel::PsiPlus), 0.25, 1e-12);
    EXPECT_NEAR(d0.probability("f1r1", BellLabel::PhiPlus), 0.25, 1e-12);
    EXPECT_NEAR(d1.probability("f0r1", BellLabel::PsiMinus), 0.25, 1e-12);
    EXPECT_NEAR(*d0.eve_accuracy(), 1.0, 1e-12);
    EXPECT_NEAR(*d1.eve_accuracy(), 1.0, 1e-12);
    EXPECT_NEAR(an::detection_probability(diag), 0.5, 1e-12);
    EXPECT_NEAR(an::detection_probability(comp), 0.0, 1e-12);
}

TEST(Oracle, OverlapReducesEveInformation) {
    const auto ortho = an::exact_round_distribution(BellLabel::PsiPlus, 1, adv::AncillaStrategy{0.5, 0.0});
    EXPECT_NEAR(*ortho.eve_accuracy(), 1.0, 1e-12);
    double previous = 1.0 + 1e-12;
    for (double s : {0.2, 0.5, 0.8}) {
        const auto dist = an::exact_round_distribution(BellLabel::PsiPlus, 1, adv::AncillaStrategy{0.5, s});
        const double acc = *dist.eve_accuracy();
        EXPECT_LT(acc, previous);
        EXPECT_GE(acc, 0.5);
        double total = 0.0;
        for (double p : dist.bell_marginal()) total += p;
        EXPECT_NEAR(total, 1.0, 1e-12);
        previous = acc;
    }
}

TEST(Taps, SampledFullInformationAttackIsAlwaysRight) {
    adv::AncillaAttack tap(adv::AncillaAttackConfig::orthonormal(0.5));
    RandomSource rand(31);
    for (int i = 0; i < 20000; ++i) {
        const std::uint8_t bit = static_cast<std::uint8_t>(rand.coin());
        const auto rec = pr::run_round(bit, &tap, rand);
        ASSERT_TRUE(rec.eve.inferred_operation.has_value());
        ASSERT_EQ(*rec.eve.inferred_operation, pr::encoding_for_bit(bit));
    }
}

TEST(Taps, ZeroStrengthAttackDoesNotMeasure) {
    adv::AncillaAttack tap(adv::AncillaAttackConfig::orthonormal(0.0));
    EXPECT_FALSE(tap.measures());
    RandomSource rand(3);
    const auto rec = pr::run_round(1, &tap, rand);
    EXPECT_FALSE(rec.eve.measurement_outcome.has_value());
    EXPECT_EQ(rec.eve.outcome_key(), "-");
}

TEST(Taps, AncillaContractChecks) {
    adv::AncillaAttack tap(adv::AncillaAttackConfig::orthonormal(0.5));
    RandomSource rand(5);
    auto joint = q::make_bell(BellLabel::PsiPlus, "travel", "home");
    pr::EveRecord rec;
    pr::TapView view(joint, "home");
    EXPECT_THROW(tap.on_return(view, rand, rec), ContractViolation);
    tap.on_forward(view, rand, rec);
    EXPECT_TRUE(view.has("ancilla"));
    EXPECT_THROW(tap.on_forward(view, rand, rec), ContractViolation);
}

TEST(Strategy, ParseAndFormat) {
    EXPECT_TRUE(std::holds_alternative<adv::NoEavesdropper>(adv::parse_strategy("none")));
    const auto a = std::get<adv::AncillaStrategy>(adv::parse_strategy("ancilla:d=0.25"));
    EXPECT_EQ(a.d, 0.25);
    EXPECT_FALSE(a.overlap.has_value());
    const auto b = std::get<adv::AncillaStrategy>(adv::parse_strategy("ancilla:d=0.5,chi=overlap:0.3"));
    EXPECT_EQ(b.overlap, 0.3);
    EXPECT_EQ(std::get<adv::InterceptResendStrategy>(adv::parse_strategy("intercept_resend:basis=diagonal")).basis,
              adv::InterceptBasis::Diagonal);
    EXPECT_EQ(std::get<adv::InterceptResendStrategy>(adv::parse_strategy("intercept_resend")).basis,
              adv::InterceptBasis::Computational);
    for (const char *bad : {"", "eve", "ancilla", "ancilla:d=2", "ancilla:d=x", "ancilla:d=0.5,chi=weird",
                            "none:d=1", "intercept_resend:basis=polar"})
        EXPECT_THROW(adv::parse_strategy(bad), InvalidArgument) << bad;
    for (const char *spec : {"none", "ancilla:d=0.5,chi=orthonormal", "ancilla:d=0.125,chi=overlap:0.5",
                             "intercept_resend:basis=computational", "intercept_resend:basis=diagonal"})
        EXPECT_EQ(adv::format_strategy(adv::parse_strategy(spec)), spec);
}
