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

#include "pingpong/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace pingpong::quantum {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool all_finite(std::span<const Complex> values) {
    return std::all_of(values.begin(), values.end(), [](const Complex &z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

// Index bookkeeping for an operator on `targets` embedded in `layout`:
// full[rest * target_dim + t] is the joint basis index whose target digits
// spell t and whose remaining digits spell rest (both most-significant-first).
struct Split {
    std::size_t target_dim = 1;
    std::size_t rest_dim = 1;
    std::vector<std::size_t> full;

    std::size_t at(std::size_t rest, std::size_t t) const { return full[rest * target_dim + t]; }
};

Split split(const SubsystemLayout &layout, const std::vector<std::string> &targets) {
    std::vector<std::size_t> target_pos;
    target_pos.reserve(targets.size());
    for (const auto &id : targets) {
        auto pos = layout.find(id);
        if (!pos) {
            throw InvalidArgument("unknown subsystem id '" + id + "'");
        }
        if (std::find(target_pos.begin(), target_pos.end(), *pos) != target_pos.end()) {
            throw InvalidArgument("subsystem id '" + id + "' listed twice");
        }
        target_pos.push_back(*pos);
    }
    std::vector<std::size_t> rest_pos;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (std::find(target_pos.begin(), target_pos.end(), i) == target_pos.end()) {
            rest_pos.push_back(i);
        }
    }

    const std::size_t n = layout.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) {
        stride[i - 1] = stride[i] * layout[i].dim;
    }

    Split out;
    for (auto p : target_pos) out.target_dim *= layout[p].dim;
    for (auto p : rest_pos) out.rest_dim *= layout[p].dim;
    out.full.resize(layout.total_dim());

    std::vector<std::size_t> digit(n);
    for (std::size_t idx = 0; idx < layout.total_dim(); ++idx) {
        for (std::size_t i = 0; i < n; ++i) {
            digit[i] = (idx / stride[i]) % layout[i].dim;
        }
        std::size_t t = 0;
        for (auto p : target_pos) t = t * layout[p].dim + digit[p];
        std::size_t r = 0;
        for (auto p : rest_pos) r = r * layout[p].dim + digit[p];
        out.full[r * out.target_dim + t] = idx;
    }
    return out;
}

// Full-space matrix of `local` acting on the targets of `s`, identity elsewhere.
Matrix embed(const Matrix &local, const Split &s) {
    const std::size_t n = s.full.size();
    Matrix m(n, n);
    for (std::size_t r = 0; r < s.rest_dim; ++r) {
        for (std::size_t i = 0; i < s.target_dim; ++i) {
            for (std::size_t j = 0; j < s.target_dim; ++j) {
                m(s.at(r, i), s.at(r, j)) = local(i, j);
            }
        }
    }
    return m;
}

void require_dims(std::span<const std::size_t> expected, const SubsystemLayout &layout,
                  const std::vector<std::string> &targets) {
    if (expected.size() != targets.size()) {
        throw InvalidArgument("operator acts on " + std::to_string(expected.size()) +
                              " subsystems but " + std::to_string(targets.size()) + " targets given");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (layout.dim_of(targets[i]) != expected[i]) {
            throw InvalidArgument("dimension mismatch on subsystem '" + targets[i] + "'");
        }
    }
}

std::vector<double> clamp_probabilities(std::vector<double> p) {
    double total = 0.0;
    for (auto &x : p) {
        if (x < 0.0 && x > -kAlgebraTol) x = 0.0;
        if (x > 1.0 && x < 1.0 + kAlgebraTol) x = 1.0;
        total += x;
    }
    if (std::abs(total - 1.0) > kAlgebraTol) {
        throw InvalidArgument("Born probabilities sum to " + std::to_string(total));
    }
    return p;
}

} // namespace

// ---------------------------------------------------------------------------
// SubsystemLayout

SubsystemLayout::SubsystemLayout(std::initializer_list<Subsystem> parts)
    : SubsystemLayout(std::vector<Subsystem>(parts)) {}

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
    std::set<std::string_view> seen;
    for (const auto &p : parts_) {
        if (p.dim == 0) {
            throw InvalidArgument("subsystem '" + p.id + "' has dimension 0");
        }
        if (!seen.insert(p.id).second) {
            throw InvalidArgument("duplicate subsystem id '" + p.id + "'");
        }
        total_dim_ *= p.dim;
        if (total_dim_ > kMaxDimension) {
            throw InvalidArgument("joint dimension exceeds " + std::to_string(kMaxDimension));
        }
    }
}

std::vector<std::string> SubsystemLayout::ids() const {
    std::vector<std::string> out;
    out.reserve(parts_.size());
    for (const auto &p : parts_) out.push_back(p.id);
    return out;
}

std::optional<std::size_t> SubsystemLayout::find(std::string_view id) const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t SubsystemLayout::dim_of(std::string_view id) const {
    auto pos = find(id);
    if (!pos) throw InvalidArgument("unknown subsystem id '" + std::string(id) + "'");
    return parts_[*pos].dim;
}

SubsystemLayout SubsystemLayout::select(const std::vector<std::string> &ids) const {
    std::vector<Subsystem> out;
    out.reserve(ids.size());
    for (const auto &id : ids) out.push_back({id, dim_of(id)});
    return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout &other) const {
    std::vector<Subsystem> out = parts_;
    out.insert(out.end(), other.parts_.begin(), other.parts_.end());
    return SubsystemLayout(std::move(out));
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidArgument("matrix data length does not match shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_columns(const std::vector<std::vector<Complex>> &columns) {
    if (columns.empty()) return {};
    const std::size_t rows = columns.front().size();
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows) throw InvalidArgument("ragged column list");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    }
    return m;
}

Complex Matrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

Matrix Matrix::operator*(const Matrix &rhs) const {
    if (cols_ != rhs.rows_) throw InvalidArgument("matrix product shape mismatch");
    Matrix m(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) m(r, c) += a * rhs(k, c);
        }
    }
    return m;
}

Matrix &Matrix::operator*=(Complex scale) {
    for (auto &z : data_) z *= scale;
    return *this;
}

double Matrix::max_abs_diff(const Matrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw InvalidArgument("matrix comparison shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return m;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(SubsystemLayout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.total_dim()) {
        throw InvalidArgument("state has " + std::to_string(amps_.size()) +
                              " amplitudes for a layout of dimension " +
                              std::to_string(layout_.total_dim()));
    }
    if (!all_finite(amps_)) throw InvalidArgument("state has non-finite amplitudes");
    if (std::abs(norm() - 1.0) > kAlgebraTol) {
        throw InvalidArgument("state is not normalized (norm " + std::to_string(norm()) + ")");
    }
}

StateVector StateVector::basis(SubsystemLayout layout, std::size_t index) {
    std::vector<Complex> amps(layout.total_dim());
    if (index >= amps.size()) throw InvalidArgument("basis index out of range");
    amps[index] = 1.0;
    return StateVector(std::move(layout), std::move(amps));
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto &z : amps_) sum += std::norm(z);
    return std::sqrt(sum);
}

StateVector StateVector::relabel(SubsystemLayout layout) const {
    return StateVector(std::move(layout), amps_);
}

Complex inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) throw InvalidArgument("inner product of states of different dimension");
    Complex sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

bool phase_equivalent(const StateVector &a, const StateVector &b, double tol) {
    return a.dim() == b.dim() && std::abs(std::abs(inner(a, b)) - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(SubsystemLayout layout, Matrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
    const std::size_t n = layout_.total_dim();
    if (entries_.rows() != n || entries_.cols() != n) {
        throw InvalidArgument("density matrix shape does not match layout");
    }
    if (!all_finite(entries_.data())) throw InvalidArgument("density matrix has non-finite entries");
    if (entries_.max_abs_diff(entries_.adjoint()) > kAlgebraTol) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - Complex{1.0}) > kAlgebraTol) {
        throw InvalidArgument("density matrix trace is " + std::to_string(tr.real()));
    }
    Eigen::MatrixXcd m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = entries_(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kEigenTol) {
        throw InvalidArgument("density matrix has a negative eigenvalue");
    }
}

DensityMatrix::DensityMatrix(SubsystemLayout layout, Matrix entries, Unchecked)
    : layout_(std::move(layout)), entries_(std::move(entries)) {}

// ---------------------------------------------------------------------------
// UnitaryOp

UnitaryOp::UnitaryOp(std::vector<std::size_t> dims, Matrix entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
    const std::size_t n =
        std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    if (dims_.empty() || entries_.rows() != n || entries_.cols() != n) {
        throw InvalidArgument("unitary shape does not match its subsystem dimensions");
    }
    if (!all_finite(entries_.data())) throw InvalidArgument("unitary has non-finite entries");
    const double dev = (entries_ * entries_.adjoint()).max_abs_diff(Matrix::identity(n));
    if (dev > kAlgebraTol) {
        throw InvalidArgument("operator is not unitary (|UU†-I| = " + std::to_string(dev) + ")");
    }
}

UnitaryOp UnitaryOp::identity(std::size_t dim) { return UnitaryOp({dim}, Matrix::identity(dim)); }

UnitaryOp UnitaryOp::pauli_z() { return UnitaryOp({2}, Matrix(2, 2, {1.0, 0.0, 0.0, -1.0})); }

UnitaryOp UnitaryOp::pauli_x() { return UnitaryOp({2}, Matrix(2, 2, {0.0, 1.0, 1.0, 0.0})); }

UnitaryOp UnitaryOp::hadamard() {
    return UnitaryOp({2}, Matrix(2, 2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}));
}

// ---------------------------------------------------------------------------
// Bell states

std::string_view to_string(BellLabel label) {
    switch (label) {
    case BellLabel::PsiPlus: return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
    case BellLabel::PhiPlus: return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
    }
    return "?";
}

std::optional<BellLabel> parse_bell_label(std::string_view text) {
    for (auto label : kBellOrder) {
        if (to_string(label) == text) return label;
    }
    return std::nullopt;
}

StateVector make_bell(BellLabel label, std::string first, std::string second) {
    const double h = kInvSqrt2;
    std::vector<Complex> amps;
    switch (label) {
    case BellLabel::PsiPlus: amps = {0.0, h, h, 0.0}; break;
    case BellLabel::PsiMinus: amps = {0.0, h, -h, 0.0}; break;
    case BellLabel::PhiPlus: amps = {h, 0.0, 0.0, h}; break;
    case BellLabel::PhiMinus: amps = {h, 0.0, 0.0, -h}; break;
    }
    return StateVector(SubsystemLayout{{std::move(first), 2}, {std::move(second), 2}}, std::move(amps));
}

std::vector<StateVector> bell_basis() {
    std::vector<StateVector> out;
    for (auto label : kBellOrder) out.push_back(make_bell(label, "q0", "q1"));
    return out;
}

std::vector<StateVector> computational_basis(std::size_t dim) {
    std::vector<StateVector> out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(StateVector::basis({{"q", dim}}, i));
    return out;
}

std::vector<StateVector> diagonal_basis() {
    const SubsystemLayout q{{"q", 2}};
    return {StateVector(q, {kInvSqrt2, kInvSqrt2}), StateVector(q, {kInvSqrt2, -kInvSqrt2})};
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor(const StateVector &a, const StateVector &b) {
    SubsystemLayout layout = a.layout().concat(b.layout());
    std::vector<Complex> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return StateVector(std::move(layout), std::move(amps));
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix(a.layout().concat(b.layout()), kron(a.entries(), b.entries()));
}

StateVector apply_unitary(const UnitaryOp &u, const StateVector &s,
                          const std::vector<std::string> &targets) {
    require_dims(u.dims(), s.layout(), targets);
    const Split sp = split(s.layout(), targets);
    const Matrix &m = u.entries();
    std::vector<Complex> out(s.dim());
    for (std::size_t r = 0; r < sp.rest_dim; ++r) {
        for (std::size_t i = 0; i < sp.target_dim; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < sp.target_dim; ++j) acc += m(i, j) * s[sp.at(r, j)];
            out[sp.at(r, i)] = acc;
        }
    }
    return StateVector(s.layout(), std::move(out));
}

DensityMatrix apply_unitary(const UnitaryOp &u, const DensityMatrix &d,
                            const std::vector<std::string> &targets) {
    require_dims(u.dims(), d.layout(), targets);
    const Matrix full = embed(u.entries(), split(d.layout(), targets));
    return DensityMatrix(d.layout(), full * d.entries() * full.adjoint());
}

DensityMatrix density_of(const StateVector &s) {
    Matrix m(s.dim(), s.dim());
    for (std::size_t r = 0; r < s.dim(); ++r)
        for (std::size_t c = 0; c < s.dim(); ++c) m(r, c) = s[r] * std::conj(s[c]);
    return DensityMatrix(s.layout(), std::move(m), DensityMatrix::Unchecked{});
}

DensityMatrix partial_trace(const DensityMatrix &d, const std::vector<std::string> &keep) {
    if (keep.empty()) throw InvalidArgument("partial trace must keep at least one subsystem");
    const Split sp = split(d.layout(), keep);
    Matrix m(sp.target_dim, sp.target_dim);
    for (std::size_t i = 0; i < sp.target_dim; ++i)
        for (std::size_t j = 0; j < sp.target_dim; ++j)
            for (std::size_t r = 0; r < sp.rest_dim; ++r) m(i, j) += d(sp.at(r, i), sp.at(r, j));
    return DensityMatrix(d.layout().select(keep), std::move(m));
}

DensityMatrix reduced_density(const StateVector &s, const std::vector<std::string> &keep) {
    if (keep.empty()) throw InvalidArgument("partial trace must keep at least one subsystem");
    const Split sp = split(s.layout(), keep);
    Matrix m(sp.target_dim, sp.target_dim);
    for (std::size_t i = 0; i < sp.target_dim; ++i)
        for (std::size_t j = 0; j < sp.target_dim; ++j)
            for (std::size_t r = 0; r < sp.rest_dim; ++r)
                m(i, j) += s[sp.at(r, i)] * std::conj(s[sp.at(r, j)]);
    return DensityMatrix(s.layout().select(keep), std::move(m), DensityMatrix::Unchecked{});
}

void require_orthonormal_basis(std::span<const StateVector> basis, std::size_t dim) {
    if (basis.size() != dim) {
        throw InvalidArgument("basis has " + std::to_string(basis.size()) + " vectors for dimension " +
                              std::to_string(dim));
    }
    for (const auto &b : basis) {
        if (b.dim() != dim) throw InvalidArgument("basis vector dimension mismatch");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            if (std::abs(inner(basis[i], basis[j])) > kAlgebraTol) {
                throw InvalidArgument("basis is not orthonormal");
            }
        }
    }
}

std::vector<double> outcome_probabilities(const StateVector &s, const std::vector<std::string> &targets,
                                          std::span<const StateVector> basis) {
    const Split sp = split(s.layout(), targets);
    require_orthonormal_basis(basis, sp.target_dim);
    std::vector<double> p(basis.size(), 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (std::size_t r = 0; r < sp.rest_dim; ++r) {
            Complex c = 0.0;
            for (std::size_t t = 0; t < sp.target_dim; ++t) c += std::conj(basis[k][t]) * s[sp.at(r, t)];
            p[k] += std::norm(c);
        }
    }
    return clamp_probabilities(std::move(p));
}

Measurement measure_in_basis(const StateVector &s, const std::vector<std::string> &targets,
                             std::span<const StateVector> basis, RandomSource &rand) {
    const std::vector<double> p = outcome_probabilities(s, targets, basis);
    const std::size_t k = sample_index(p, rand);
    const Split sp = split(s.layout(), targets);
    const double scale = 1.0 / std::sqrt(p[k]);

    std::vector<Complex> out(s.dim());
    for (std::size_t r = 0; r < sp.rest_dim; ++r) {
        Complex c = 0.0;
        for (std::size_t t = 0; t < sp.target_dim; ++t) c += std::conj(basis[k][t]) * s[sp.at(r, t)];
        c *= scale;
        for (std::size_t t = 0; t < sp.target_dim; ++t) out[sp.at(r, t)] = basis[k][t] * c;
    }
    return {k, StateVector(s.layout(), std::move(out))};
}

std::vector<double> born_probabilities(const DensityMatrix &d, std::span<const StateVector> basis) {
    require_orthonormal_basis(basis, d.dim());
    std::vector<double> p(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        Complex acc = 0.0;
        for (std::size_t r = 0; r < d.dim(); ++r)
            for (std::size_t c = 0; c < d.dim(); ++c) acc += std::conj(basis[k][r]) * d(r, c) * basis[k][c];
        p[k] = acc.real();
    }
    return clamp_probabilities(std::move(p));
}

Projection project(const DensityMatrix &d, const std::vector<std::string> &targets,
                   const StateVector &v) {
    const Split sp = split(d.layout(), targets);
    if (v.dim() != sp.target_dim) throw InvalidArgument("projector dimension mismatch");
    Matrix local(v.dim(), v.dim());
    for (std::size_t r = 0; r < v.dim(); ++r)
        for (std::size_t c = 0; c < v.dim(); ++c) local(r, c) = v[r] * std::conj(v[c]);
    const Matrix full = embed(local, sp);
    Matrix post = full * d.entries() * full;
    const double prob = post.trace().real();
    if (prob <= kNegligibleProbability) return {0.0, std::nullopt};
    post *= Complex{1.0 / prob};
    // Re-symmetrize to absorb rounding before validation.
    Matrix sym = post;
    const Matrix adj = post.adjoint();
    for (std::size_t r = 0; r < sym.rows(); ++r)
        for (std::size_t c = 0; c < sym.cols(); ++c) sym(r, c) = 0.5 * (post(r, c) + adj(r, c));
    return {prob, DensityMatrix(d.layout(), std::move(sym))};
}

std::size_t sample_index(std::span<const double> probabilities, RandomSource &rand) {
    const double u = rand.uniform();
    double cumulative = 0.0;
    std::optional<std::size_t> last_positive;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        if (probabilities[k] <= 0.0) continue;
        last_positive = k;
        cumulative += probabilities[k];
        if (u < cumulative) return k;
    }
    if (!last_positive) throw InvalidArgument("no outcome has positive probability");
    return *last_positive;
}

} // namespace pingpong::quantum
