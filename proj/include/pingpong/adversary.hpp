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
 * Eavesdropping strategies, packaged as channel taps.
 *
 * The ancilla attack dilates Eve's operation to a unitary Ê on
 * travel ⊗ ancilla:
 *
 *     Ê|0,χ> = α|0,χ00> + β|1,χ01>
 *     Ê|1,χ> = α|1,χ11> + β|0,χ10>,      d = |β|² = 1 - |α|²
 *
 * After Alice encodes, Eve measures travel ⊗ ancilla in the discrimination
 * basis {(|0,χ00> ± |1,χ01>)/√2, (|1,χ11> ± |0,χ10>)/√2}; a "+" outcome means
 * Alice applied I, a "-" outcome means σ_z. At d = 1/2 with orthonormal χ's
 * the guess is always right and Bob sees every Bell state with probability 1/4.
 */

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pingpong/protocol.hpp"
#include "pingpong/quantum.hpp"

namespace pingpong::adversary {

using protocol::EncodingOp;
using protocol::EveRecord;
using quantum::StateVector;

/// Parameters of the ancilla attack.
class AncillaAttackConfig {
  public:
    /// `chi` lists χ00, χ01, χ10, χ11, each a unit vector of dimension
    /// `ancilla_dim` (1..4). Throws InvalidArgument for d outside [0,1],
    /// bad dimensions, or χ's for which Ê has no unitary completion.
    AncillaAttackConfig(double d, std::size_t ancilla_dim, std::vector<StateVector> chi);

    /// χ00 = χ11 = |0>, χ01 = |1>, χ10 = |2> in a four-level ancilla.
    static AncillaAttackConfig orthonormal(double d);

    /// Like orthonormal(), but with <χ00|χ01> = s and <χ11|χ10> = -s:
    /// χ01 = s|0> + √(1-s²)|1>, χ10 = -s|0> + √(1-s²)|2>. s in [0,1].
    static AncillaAttackConfig with_overlap(double d, double s);

    double d() const { return d_; }
    double alpha() const;
    double beta() const;
    std::size_t ancilla_dim() const { return ancilla_dim_; }
    const StateVector &chi(int travel_in, int travel_out) const { return chi_[2 * travel_in + travel_out]; }

    /// Eve's fresh ancilla |χ> (the first basis vector).
    StateVector initial_ancilla() const;

  private:
    double d_;
    std::size_t ancilla_dim_;
    std::vector<StateVector> chi_;
};

/// Ê on (travel, ancilla); unspecified columns filled by Gram–Schmidt over the
/// computational basis in index order.
quantum::UnitaryOp build_attack_unitary(const AncillaAttackConfig &cfg);

/// Complete measurement basis of travel ⊗ ancilla: the (orthonormalized)
/// discrimination vectors first, then a completion. `meaning[k]` is the
/// operation Eve infers from outcome k; completion outcomes carry none.
struct DiscriminationBasis {
    std::vector<StateVector> vectors;
    std::vector<std::optional<EncodingOp>> meaning;
};

DiscriminationBasis discrimination_basis(const AncillaAttackConfig &cfg);

/// Identity tap; records action "none".
class PassiveTap final : public protocol::ChannelTap {
  public:
    void on_forward(protocol::TapView &, RandomSource &, EveRecord &record) const override;
    void on_return(protocol::TapView &, RandomSource &, EveRecord &) const override {}
};

class AncillaAttack final : public protocol::ChannelTap {
  public:
    explicit AncillaAttack(AncillaAttackConfig cfg);

    const AncillaAttackConfig &config() const { return cfg_; }
    const quantum::UnitaryOp &unitary() const { return unitary_; }
    const DiscriminationBasis &basis() const { return basis_; }

    /// Whether the return leg measures at all. With d = 0 the attack never
    /// moves the travel qubit, Alice's two candidate states coincide on
    /// Eve's side, and there is nothing to discriminate.
    bool measures() const { return cfg_.d() > 0.0; }

    /// Attaches the ancilla and applies Ê. Throws ContractViolation if an
    /// ancilla is already attached.
    void on_forward(protocol::TapView &view, RandomSource &rand, EveRecord &record) const override;
    /// Discrimination measurement. Throws ContractViolation without an ancilla.
    void on_return(protocol::TapView &view, RandomSource &rand, EveRecord &record) const override;

  private:
    AncillaAttackConfig cfg_;
    quantum::UnitaryOp unitary_;
    DiscriminationBasis basis_;
};

enum class InterceptBasis { Computational, Diagonal };

std::string_view to_string(InterceptBasis basis);
std::vector<StateVector> intercept_basis_vectors(InterceptBasis basis);

/// Measure-and-resend on the travel qubit, on both legs, in a fixed basis.
/// The return-leg guess is PhaseFlip iff the two outcomes differ.
class InterceptResend final : public protocol::ChannelTap {
  public:
    explicit InterceptResend(InterceptBasis basis) : basis_(basis) {}

    InterceptBasis basis() const { return basis_; }

    void on_forward(protocol::TapView &view, RandomSource &rand, EveRecord &record) const override;
    void on_return(protocol::TapView &view, RandomSource &rand, EveRecord &record) const override;

  private:
    InterceptBasis basis_;
};

/// Single-call forms of the ancilla attack legs on a bare joint state.
StateVector eve_forward_tap(const AncillaAttackConfig &cfg, const StateVector &joint);
std::pair<StateVector, EveRecord> eve_return_tap(const AncillaAttackConfig &cfg, const StateVector &joint,
                                                 RandomSource &rand);

// ---------------------------------------------------------------------------
// Strategy selection by name, as used in experiment configuration.

struct NoEavesdropper {
    bool operator==(const NoEavesdropper &) const = default;
};

struct AncillaStrategy {
    double d = 0.5;
    /// Empty for the orthonormal χ family, otherwise the overlap s.
    std::optional<double> overlap;
    bool operator==(const AncillaStrategy &) const = default;
};

struct InterceptResendStrategy {
    InterceptBasis basis = InterceptBasis::Computational;
    bool operator==(const InterceptResendStrategy &) const = default;
};

using StrategySpec = std::variant<NoEavesdropper, AncillaStrategy, InterceptResendStrategy>;

/// Accepts `none`, `ancilla:d=<real>[,chi=orthonormal|chi=overlap:<real>]`
/// and `intercept_resend[:basis=computational|diagonal]`.
StrategySpec parse_strategy(std::string_view text);
std::string format_strategy(const StrategySpec &spec);

AncillaAttackConfig make_config(const AncillaStrategy &spec);
std::unique_ptr<protocol::ChannelTap> make_tap(const StrategySpec &spec);

} // namespace pingpong::adversary
