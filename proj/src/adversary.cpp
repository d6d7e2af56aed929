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

#include <charconv>
#include <cmath>

namespace pingpong::adversary {

using quantum::Complex;
using quantum::kAlgebraTol;
using quantum::Matrix;
using quantum::SubsystemLayout;
using quantum::UnitaryOp;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
// Residual norm below which a Gram–Schmidt candidate counts as dependent.
constexpr double kDependentTol = 1e-6;

using Vec = std::vector<Complex>;

Complex dot(const Vec &a, const Vec &b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double vec_norm(const Vec &a) { return std::sqrt(dot(a, a).real()); }

// Orthogonalizes `v` against `basis` (two passes), returning the normalized
// residual or nothing when `v` is (numerically) in their span.
std::optional<Vec> orthonormalize_against(Vec v, const std::vector<Vec> &basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto &q : basis) {
            const Complex c = dot(q, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
        }
    }
    const double n = vec_norm(v);
    if (n < kDependentTol) return std::nullopt;
    for (auto &x : v) x /= n;
    return v;
}

// |t> ⊗ χ on travel ⊗ ancilla, scaled.
void add_branch(Vec &out, int travel, const StateVector &chi, Complex scale) {
    const std::size_t a = chi.dim();
    for (std::size_t i = 0; i < a; ++i) out[travel * a + i] += scale * chi[i];
}

SubsystemLayout ancilla_layout(std::size_t dim) { return SubsystemLayout{{std::string(protocol::kAncilla), dim}}; }

const std::vector<std::string> &travel_ancilla() {
    static const std::vector<std::string> ids{std::string(protocol::kTravel), std::string(protocol::kAncilla)};
    return ids;
}

const std::vector<std::string> &travel_only() {
    static const std::vector<std::string> ids{std::string(protocol::kTravel)};
    return ids;
}

double parse_real(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw InvalidArgument("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// AncillaAttackConfig

AncillaAttackConfig::AncillaAttackConfig(double d, std::size_t ancilla_dim, std::vector<StateVector> chi_states)
    : d_(d), ancilla_dim_(ancilla_dim), chi_(std::move(chi_states)) {
    if (!(d_ >= 0.0 && d_ <= 1.0)) throw InvalidArgument("attack parameter d must lie in [0, 1]");
    if (ancilla_dim_ < 1 || ancilla_dim_ > 4) {
        throw InvalidArgument("ancilla dimension must be between 1 and 4");
    }
    if (chi_.size() != 4) throw InvalidArgument("exactly four χ states are required");
    for (const auto &c : chi_) {
        if (c.dim() != ancilla_dim_) throw InvalidArgument("χ state dimension differs from ancilla dimension");
    }
    // Ê|0,χ> and Ê|1,χ> must be orthonormal for a unitary completion to exist.
    const std::size_t n = 2 * ancilla_dim_;
    Vec img0(n), img1(n);
    add_branch(img0, 0, chi(0, 0), alpha());
    add_branch(img0, 1, chi(0, 1), beta());
    add_branch(img1, 1, chi(1, 1), alpha());
    add_branch(img1, 0, chi(1, 0), beta());
    if (std::abs(vec_norm(img0) - 1.0) > kAlgebraTol || std::abs(vec_norm(img1) - 1.0) > kAlgebraTol ||
        std::abs(dot(img0, img1)) > kAlgebraTol) {
        throw InvalidArgument("χ states admit no unitary completion of the attack");
    }
}

AncillaAttackConfig AncillaAttackConfig::orthonormal(double d) { return with_overlap(d, 0.0); }

AncillaAttackConfig AncillaAttackConfig::with_overlap(double d, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("χ overlap must lie in [0, 1]");
    const double c = std::sqrt(1.0 - s * s);
    const auto layout = ancilla_layout(4);
    std::vector<StateVector> chi{
        StateVector::basis(layout, 0),              // χ00
        StateVector(layout, {s, c, 0.0, 0.0}),      // χ01
        StateVector(layout, {-s, 0.0, c, 0.0}),     // χ10
        StateVector::basis(layout, 0),              // χ11
    };
    return AncillaAttackConfig(d, 4, std::move(chi));
}

double AncillaAttackConfig::alpha() const { return std::sqrt(1.0 - d_); }
double AncillaAttackConfig::beta() const { return std::sqrt(d_); }

StateVector AncillaAttackConfig::initial_ancilla() const {
    return StateVector::basis(ancilla_layout(ancilla_dim_), 0);
}

// ---------------------------------------------------------------------------
// Attack unitary and discrimination basis

UnitaryOp build_attack_unitary(const AncillaAttackConfig &cfg) {
    const std::size_t a = cfg.ancilla_dim();
    const std::size_t n = 2 * a;
    std::vector<std::optional<Vec>> columns(n);

    Vec img0(n), img1(n);
    add_branch(img0, 0, cfg.chi(0, 0), cfg.alpha());
    add_branch(img0, 1, cfg.chi(0, 1), cfg.beta());
    add_branch(img1, 1, cfg.chi(1, 1), cfg.alpha());
    add_branch(img1, 0, cfg.chi(1, 0), cfg.beta());
    columns[0] = img0;
    columns[a] = img1;

    std::vector<Vec> taken{img0, img1};
    std::size_t slot = 0;
    for (std::size_t j = 0; j < n; ++j) {
        while (slot < n && columns[slot]) ++slot;
        if (slot == n) break;
        Vec e(n);
        e[j] = 1.0;
        if (auto q = orthonormalize_against(std::move(e), taken)) {
            taken.push_back(*q);
            columns[slot] = std::move(*q);
        }
    }

    std::vector<Vec> cols;
    cols.reserve(n);
    for (auto &c : columns) cols.push_back(std::move(*c));
    return UnitaryOp({2, a}, Matrix::from_columns(cols));
}

DiscriminationBasis discrimination_basis(const AncillaAttackConfig &cfg) {
    const std::size_t a = cfg.ancilla_dim();
    const std::size_t n = 2 * a;
    const SubsystemLayout layout{{std::string(protocol::kTravel), 2}, {std::string(protocol::kAncilla), a}};

    struct Candidate {
        Vec v;
        EncodingOp meaning;
    };
    std::vector<Candidate> candidates;
    for (double sign : {1.0, -1.0}) {
        Vec v(n);
        add_branch(v, 0, cfg.chi(0, 0), kInvSqrt2);
        add_branch(v, 1, cfg.chi(0, 1), sign * kInvSqrt2);
        candidates.push_back({std::move(v), sign > 0 ? EncodingOp::Identity : EncodingOp::PhaseFlip});
    }
    for (double sign : {1.0, -1.0}) {
        Vec v(n);
        add_branch(v, 1, cfg.chi(1, 1), kInvSqrt2);
        add_branch(v, 0, cfg.chi(1, 0), sign * kInvSqrt2);
        candidates.push_back({std::move(v), sign > 0 ? EncodingOp::Identity : EncodingOp::PhaseFlip});
    }

    DiscriminationBasis out;
    std::vector<Vec> taken;
    for (auto &c : candidates) {
        if (auto q = orthonormalize_against(c.v, taken)) {
            taken.push_back(*q);
            out.vectors.emplace_back(layout, *q);
            out.meaning.push_back(c.meaning);
        }
    }
    for (std::size_t j = 0; j < n && taken.size() < n; ++j) {
        Vec e(n);
        e[j] = 1.0;
        if (auto q = orthonormalize_against(std::move(e), taken)) {
            taken.push_back(*q);
            out.vectors.emplace_back(layout, *q);
            out.meaning.push_back(std::nullopt);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Taps

void PassiveTap::on_forward(protocol::TapView &, RandomSource &, EveRecord &record) const {
    record.action = "none";
}

AncillaAttack::AncillaAttack(AncillaAttackConfig cfg)
    : cfg_(std::move(cfg)), unitary_(build_attack_unitary(cfg_)), basis_(discrimination_basis(cfg_)) {}

void AncillaAttack::on_forward(protocol::TapView &view, RandomSource &, EveRecord &record) const {
    if (!view.has(protocol::kTravel)) throw InvalidArgument("joint state has no travel subsystem");
    if (view.has(protocol::kAncilla)) throw ContractViolation("ancilla already attached (double attack)");
    view.attach(cfg_.initial_ancilla());
    view.apply(unitary_, travel_ancilla());
    record.action = "ancilla";
}

void AncillaAttack::on_return(protocol::TapView &view, RandomSource &rand, EveRecord &record) const {
    if (!view.has(protocol::kAncilla)) throw ContractViolation("return tap without an attached ancilla");
    if (!measures()) return;
    const std::size_t k = view.measure(travel_ancilla(), basis_.vectors, rand);
    record.measurement_outcome = k;
    // Completion outcomes carry no information; Eve falls back to guessing I.
    record.inferred_operation = basis_.meaning[k].value_or(EncodingOp::Identity);
}

std::string_view to_string(InterceptBasis basis) {
    return basis == InterceptBasis::Computational ? "computational" : "diagonal";
}

std::vector<StateVector> intercept_basis_vectors(InterceptBasis basis) {
    return basis == InterceptBasis::Computational ? quantum::computational_basis(2) : quantum::diagonal_basis();
}

void InterceptResend::on_forward(protocol::TapView &view, RandomSource &rand, EveRecord &record) const {
    static const auto computational = intercept_basis_vectors(InterceptBasis::Computational);
    static const auto diagonal = intercept_basis_vectors(InterceptBasis::Diagonal);
    // Projective collapse leaves the travel qubit in the observed basis state,
    // which is exactly the re-prepared qubit Eve sends on.
    record.action = "intercept_resend";
    record.forward_outcome =
        view.measure(travel_only(), basis_ == InterceptBasis::Computational ? computational : diagonal, rand);
}

void InterceptResend::on_return(protocol::TapView &view, RandomSource &rand, EveRecord &record) const {
    static const auto computational = intercept_basis_vectors(InterceptBasis::Computational);
    static const auto diagonal = intercept_basis_vectors(InterceptBasis::Diagonal);
    const std::size_t k =
        view.measure(travel_only(), basis_ == InterceptBasis::Computational ? computational : diagonal, rand);
    record.measurement_outcome = k;
    record.inferred_operation =
        (record.forward_outcome && *record.forward_outcome != k) ? EncodingOp::PhaseFlip : EncodingOp::Identity;
}

StateVector eve_forward_tap(const AncillaAttackConfig &cfg, const StateVector &joint) {
    StateVector out = joint;
    protocol::TapView view(out, std::string(protocol::kHome));
    RandomSource unused(0);
    EveRecord record;
    AncillaAttack(cfg).on_forward(view, unused, record);
    return out;
}

std::pair<StateVector, EveRecord> eve_return_tap(const AncillaAttackConfig &cfg, const StateVector &joint,
                                                 RandomSource &rand) {
    StateVector out = joint;
    protocol::TapView view(out, std::string(protocol::kHome));
    EveRecord record;
    record.action = "ancilla";
    AncillaAttack(cfg).on_return(view, rand, record);
    return {std::move(out), std::move(record)};
}

// ---------------------------------------------------------------------------
// Strategy strings

StrategySpec parse_strategy(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::string_view params = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (name == "none") {
        if (!params.empty()) throw InvalidArgument("strategy 'none' takes no parameters");
        return NoEavesdropper{};
    }
    if (name == "ancilla") {
        AncillaStrategy spec;
        bool have_d = false;
        if (params.empty()) throw InvalidArgument("strategy 'ancilla' requires d=<real>");
        for (auto item : split_on(params, ',')) {
            const auto eq = item.find('=');
            const std::string_view key = item.substr(0, eq);
            const std::string_view value = eq == std::string_view::npos ? std::string_view{} : item.substr(eq + 1);
            if (eq == std::string_view::npos && !have_d) {
                spec.d = parse_real(item, "attack parameter d");
                have_d = true;
            } else if (key == "d") {
                spec.d = parse_real(value, "attack parameter d");
                have_d = true;
            } else if (key == "chi" && value == "orthonormal") {
                spec.overlap.reset();
            } else if (key == "chi" && value.starts_with("overlap:")) {
                spec.overlap = parse_real(value.substr(8), "χ overlap");
            } else {
                throw InvalidArgument("unknown ancilla parameter '" + std::string(item) + "'");
            }
        }
        if (!have_d) throw InvalidArgument("strategy 'ancilla' requires d=<real>");
        make_config(spec); // validate ranges now rather than at first use
        return spec;
    }
    if (name == "intercept_resend") {
        InterceptResendStrategy spec;
        if (params.empty() || params == "basis=computational" || params == "computational") {
            spec.basis = InterceptBasis::Computational;
        } else if (params == "basis=diagonal" || params == "diagonal") {
            spec.basis = InterceptBasis::Diagonal;
        } else {
            throw InvalidArgument("unknown intercept_resend parameter '" + std::string(params) + "'");
        }
        return spec;
    }
    throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

std::string format_strategy(const StrategySpec &spec) {
    if (std::holds_alternative<NoEavesdropper>(spec)) return "none";
    if (const auto *a = std::get_if<AncillaStrategy>(&spec)) {
        std::string out = "ancilla:d=" + format_real(a->d);
        out += a->overlap ? ",chi=overlap:" + format_real(*a->overlap) : ",chi=orthonormal";
        return out;
    }
    const auto &ir = std::get<InterceptResendStrategy>(spec);
    return "intercept_resend:basis=" + std::string(to_string(ir.basis));
}

AncillaAttackConfig make_config(const AncillaStrategy &spec) {
    return spec.overlap ? AncillaAttackConfig::with_overlap(spec.d, *spec.overlap)
                        : AncillaAttackConfig::orthonormal(spec.d);
}

std::unique_ptr<protocol::ChannelTap> make_tap(const StrategySpec &spec) {
    if (std::holds_alternative<NoEavesdropper>(spec)) return std::make_unique<PassiveTap>();
    if (const auto *a = std::get_if<AncillaStrategy>(&spec)) return std::make_unique<AncillaAttack>(make_config(*a));
    return std::make_unique<InterceptResend>(std::get<InterceptResendStrategy>(spec).basis);
}

} // namespace pingpong::adversary
