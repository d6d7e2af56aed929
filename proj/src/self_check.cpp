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

#include <cmath>
#include <functional>
#include <sstream>

namespace pingpong::analysis {

namespace {

using quantum::BellLabel;
using quantum::kAlgebraTol;
using quantum::Matrix;
using quantum::StateVector;

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Check {
    const char *name;
    std::function<std::string()> body; // returns "" on success, else a reason
};

std::string expect_close(double got, double want, double tol, const std::string &what) {
    if (std::abs(got - want) <= tol) return {};
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", want " << want;
    return os.str();
}

std::string check_bell_orthonormal() {
    const auto basis = quantum::bell_basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (auto err = expect_close(std::abs(quantum::inner(basis[i], basis[j])), want, kAlgebraTol,
                                        "<b" + std::to_string(i) + "|b" + std::to_string(j) + ">");
                !err.empty())
                return err;
        }
    }
    return {};
}

std::string check_bell_reduced_states() {
    const Matrix half = [] {
        Matrix m = Matrix::identity(2);
        m *= 0.5;
        return m;
    }();
    for (auto label : quantum::kBellOrder) {
        const auto rho = quantum::density_of(quantum::make_bell(label, "a", "b"));
        for (const char *keep : {"a", "b"}) {
            const double dev = quantum::partial_trace(rho, {keep}).entries().max_abs_diff(half);
            if (dev > kAlgebraTol) {
                return std::string(quantum::to_string(label)) + " reduced state on " + keep + " deviates by " +
                       std::to_string(dev);
            }
        }
    }
    return {};
}

std::string check_encoding_map() {
    const auto z = quantum::UnitaryOp::pauli_z();
    const std::pair<BellLabel, BellLabel> pairs[] = {{BellLabel::PsiPlus, BellLabel::PsiMinus},
                                                     {BellLabel::PsiMinus, BellLabel::PsiPlus},
                                                     {BellLabel::PhiPlus, BellLabel::PhiMinus},
                                                     {BellLabel::PhiMinus, BellLabel::PhiPlus}};
    for (auto [from, to] : pairs) {
        const auto s = quantum::make_bell(from, "a", "b");
        const auto once = quantum::apply_unitary(z, s, {"a"});
        if (!quantum::phase_equivalent(once, quantum::make_bell(to, "a", "b"))) {
            return "σ_z does not map " + std::string(quantum::to_string(from)) + " to " +
                   std::string(quantum::to_string(to));
        }
        const auto twice = quantum::apply_unitary(z, once, {"a"});
        if (!quantum::phase_equivalent(twice, s)) return "σ_z is not an involution";
    }
    return {};
}

std::string check_attacked_state() {
    const auto cfg = adversary::AncillaAttackConfig::orthonormal(0.5);
    const auto joint = quantum::make_bell(BellLabel::PsiPlus, "travel", "home");
    const auto attacked = adversary::eve_forward_tap(cfg, joint);
    // Layout (travel, home, ancilla): keep the home = |1> slice.
    const std::size_t a = cfg.ancilla_dim();
    std::vector<quantum::Complex> slice(2 * a);
    double norm2 = 0.0;
    for (std::size_t t = 0; t < 2; ++t) {
        for (std::size_t k = 0; k < a; ++k) {
            slice[t * a + k] = attacked[(t * 2 + 1) * a + k];
            norm2 += std::norm(slice[t * a + k]);
        }
    }
    for (auto &z : slice) z /= std::sqrt(norm2);
    const quantum::SubsystemLayout ta{{"travel", 2}, {"ancilla", a}};
    std::vector<quantum::Complex> want(2 * a);
    for (std::size_t k = 0; k < a; ++k) {
        want[k] += kInvSqrt2 * cfg.chi(0, 0)[k];
        want[a + k] += kInvSqrt2 * cfg.chi(0, 1)[k];
    }
    if (!quantum::phase_equivalent(StateVector(ta, slice), StateVector(ta, want))) {
        return "attacked state is not (|0,χ00> + |1,χ01>)/√2";
    }
    return {};
}

std::string check_pattern(const adversary::StrategySpec &strategy, std::uint8_t bit,
                          const std::array<double, 4> &want, const char *what) {
    for (auto prepared : {BellLabel::PsiPlus, BellLabel::PhiPlus}) {
        auto expected = want;
        if (prepared == BellLabel::PhiPlus && want[2] == 0.0 && want[3] == 0.0) {
            // Same pattern on the Φ family.
            expected = {want[2], want[3], want[0], want[1]};
        }
        const auto got = exact_round_distribution(prepared, bit, strategy).bell_marginal();
        for (std::size_t i = 0; i < 4; ++i) {
            if (auto err = expect_close(got[i], expected[i], kAlgebraTol,
                                        std::string(what) + " " + std::string(quantum::to_string(prepared)) +
                                            " -> " + std::string(quantum::to_string(quantum::kBellOrder[i])));
                !err.empty())
                return err;
        }
    }
    return {};
}

std::string check_eve_certain() {
    const adversary::StrategySpec s = adversary::AncillaStrategy{0.5, std::nullopt};
    for (auto prepared : {BellLabel::PsiPlus, BellLabel::PhiPlus}) {
        for (std::uint8_t bit : {0, 1}) {
            const auto acc = exact_round_distribution(prepared, bit, s).eve_accuracy();
            if (!acc) return "Eve inferred nothing";
            if (auto err = expect_close(*acc, 1.0, kAlgebraTol, "Eve accuracy"); !err.empty()) return err;
        }
    }
    return {};
}

std::string check_d_zero() {
    const adversary::StrategySpec none = adversary::NoEavesdropper{};
    const adversary::StrategySpec zero = adversary::AncillaStrategy{0.0, std::nullopt};
    for (auto prepared : {BellLabel::PsiPlus, BellLabel::PhiPlus}) {
        for (std::uint8_t bit : {0, 1}) {
            const auto a = exact_round_distribution(prepared, bit, none).bell_marginal();
            const auto b = exact_round_distribution(prepared, bit, zero).bell_marginal();
            for (std::size_t i = 0; i < 4; ++i) {
                if (auto err = expect_close(b[i], a[i], kAlgebraTol, "d=0 vs no Eve"); !err.empty()) return err;
            }
        }
    }
    return {};
}

} // namespace

std::vector<CheckResult> run_self_checks() {
    const adversary::StrategySpec none = adversary::NoEavesdropper{};
    const adversary::StrategySpec full = adversary::AncillaStrategy{0.5, std::nullopt};

    const std::vector<Check> checks = {
        {"bell_states_orthonormal", check_bell_orthonormal},
        {"bell_reduced_states_maximally_mixed", check_bell_reduced_states},
        {"phase_flip_maps_bell_states", check_encoding_map},
        {"attacked_state_equal_superposition", check_attacked_state},
        {"no_eve_bit0_decodes_psi_plus",
         [&] { return check_pattern(none, 0, {1.0, 0.0, 0.0, 0.0}, "no Eve, bit 0"); }},
        {"no_eve_bit1_decodes_psi_minus",
         [&] { return check_pattern(none, 1, {0.0, 1.0, 0.0, 0.0}, "no Eve, bit 1"); }},
        {"full_attack_uniform_bell_outcomes",
         [&] {
             for (std::uint8_t bit : {0, 1}) {
                 if (auto err = check_pattern(full, bit, {0.25, 0.25, 0.25, 0.25}, "d=1/2"); !err.empty())
                     return err;
             }
             return std::string{};
         }},
        {"full_attack_eve_certain", check_eve_certain},
        {"full_attack_detection_half",
         [&] { return expect_close(detection_probability(full), 0.5, kAlgebraTol, "detection probability"); }},
        {"d_zero_matches_no_eve", check_d_zero},
        {"survival_after_1000_rounds",
         [] {
             const double l = survival_probability({1000, 0.5});
             if (auto err = expect_close(l, -301.0299956639812, 1e-6, "log10 D"); !err.empty()) return err;
             const auto text = format_log10_scientific(l, 3);
             return text == "9.33e-302" ? std::string{} : "rendered as " + text;
         }},
    };

    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto &c : checks) {
        CheckResult r{c.name, false, {}};
        try {
            r.detail = c.body();
            r.passed = r.detail.empty();
        } catch (const std::exception &e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_check_report(std::span<const CheckResult> results) {
    std::string out;
    std::size_t passed = 0;
    for (const auto &r : results) {
        out += r.passed ? "[PASS] " : "[FAIL] ";
        out += r.name;
        if (!r.passed) out += ": " + r.detail;
        out += '\n';
        passed += r.passed ? 1 : 0;
    }
    out += std::to_string(passed) + "/" + std::to_string(results.size()) + " checks passed\n";
    return out;
}

} // namespace pingpong::analysis
