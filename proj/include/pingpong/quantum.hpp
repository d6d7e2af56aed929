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
 * Dense finite-dimensional quantum states over labelled tensor products.
 *
 * Every space in this library is tiny (at most a travel qubit, a home qubit
 * and a four-level ancilla), so states and operators are plain dense complex
 * arrays. Basis order is the computational basis with the first-listed
 * subsystem most significant.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pingpong/random.hpp"

namespace pingpong::quantum {

using Complex = std::complex<double>;

/// Tolerance for algebraic identities (norms, unitarity, traces).
inline constexpr double kAlgebraTol = 1e-12;
/// Tolerance for global-phase equivalence of two states.
inline constexpr double kPhaseTol = 1e-9;
/// Most negative eigenvalue accepted in a density matrix.
inline constexpr double kEigenTol = 1e-10;
/// Branch probabilities at or below this are treated as exactly zero by project().
inline constexpr double kNegligibleProbability = 1e-14;
/// Largest joint dimension handled by the dense representation.
inline constexpr std::size_t kMaxDimension = 16;

struct Subsystem {
    std::string id;
    std::size_t dim = 2;

    bool operator==(const Subsystem &) const = default;
};

/// Ordered list of named subsystems. Ids are unique and dimensions positive.
class SubsystemLayout {
  public:
    SubsystemLayout() = default;
    SubsystemLayout(std::initializer_list<Subsystem> parts);
    explicit SubsystemLayout(std::vector<Subsystem> parts);

    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    const Subsystem &operator[](std::size_t i) const { return parts_[i]; }
    std::span<const Subsystem> subsystems() const { return parts_; }
    std::vector<std::string> ids() const;

    /// Product of all subsystem dimensions (1 for the empty layout).
    std::size_t total_dim() const { return total_dim_; }

    std::optional<std::size_t> find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id).has_value(); }
    std::size_t dim_of(std::string_view id) const;

    /// Layout of the listed subsystems, in the listed order.
    SubsystemLayout select(const std::vector<std::string> &ids) const;
    /// This layout followed by `other`; ids must be disjoint.
    SubsystemLayout concat(const SubsystemLayout &other) const;

    bool operator==(const SubsystemLayout &other) const { return parts_ == other.parts_; }

  private:
    std::vector<Subsystem> parts_;
    std::size_t total_dim_ = 1;
};

/// Small dense row-major complex matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

    static Matrix identity(std::size_t n);
    /// Column-wise construction; every column must have the same length.
    static Matrix from_columns(const std::vector<std::vector<Complex>> &columns);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const Complex> data() const { return data_; }

    Matrix adjoint() const;
    Complex trace() const;
    Matrix operator*(const Matrix &rhs) const;
    Matrix &operator*=(Complex scale);

    /// Largest entrywise |a_ij - b_ij|; shapes must agree.
    double max_abs_diff(const Matrix &other) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix kron(const Matrix &a, const Matrix &b);

/// Unit-norm amplitude vector over a layout.
class StateVector {
  public:
    /// Validates length, finiteness and unit norm (within kAlgebraTol).
    StateVector(SubsystemLayout layout, std::vector<Complex> amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(SubsystemLayout layout, std::size_t index);

    const SubsystemLayout &layout() const { return layout_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::size_t dim() const { return amps_.size(); }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }
    double norm() const;

    /// Same amplitudes under a different layout of equal dimensions.
    StateVector relabel(SubsystemLayout layout) const;

  private:
    SubsystemLayout layout_;
    std::vector<Complex> amps_;
};

/// <a|b>. Only dimensions have to agree; layouts are not compared.
Complex inner(const StateVector &a, const StateVector &b);

/// True iff |<a|b>| = 1 within `tol`, i.e. the states differ by a global phase.
bool phase_equivalent(const StateVector &a, const StateVector &b, double tol = kPhaseTol);

/// Hermitian, unit-trace, positive semidefinite matrix over a layout.
class DensityMatrix {
  public:
    /// Validates Hermiticity and trace within kAlgebraTol and eigenvalues >= -kEigenTol.
    DensityMatrix(SubsystemLayout layout, Matrix entries);

    const SubsystemLayout &layout() const { return layout_; }
    const Matrix &entries() const { return entries_; }
    std::size_t dim() const { return entries_.rows(); }
    Complex operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }
    double trace() const { return entries_.trace().real(); }

  private:
    struct Unchecked {};
    DensityMatrix(SubsystemLayout layout, Matrix entries, Unchecked);

    friend DensityMatrix density_of(const StateVector &);
    friend DensityMatrix reduced_density(const StateVector &, const std::vector<std::string> &);

    SubsystemLayout layout_;
    Matrix entries_;
};

/// Unitary acting on an ordered list of subsystem dimensions.
class UnitaryOp {
  public:
    /// Rejects the matrix unless U·U† equals the identity within kAlgebraTol.
    UnitaryOp(std::vector<std::size_t> dims, Matrix entries);

    static UnitaryOp identity(std::size_t dim);
    static UnitaryOp pauli_z();
    static UnitaryOp pauli_x();
    static UnitaryOp hadamard();

    std::span<const std::size_t> dims() const { return dims_; }
    std::size_t dim() const { return entries_.rows(); }
    const Matrix &entries() const { return entries_; }

  private:
    std::vector<std::size_t> dims_;
    Matrix entries_;
};

enum class BellLabel { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

/// Canonical outcome order used by sampling, histograms and serialized output.
inline constexpr std::array<BellLabel, 4> kBellOrder = {BellLabel::PsiPlus, BellLabel::PsiMinus,
                                                       BellLabel::PhiPlus, BellLabel::PhiMinus};

std::string_view to_string(BellLabel label);
std::optional<BellLabel> parse_bell_label(std::string_view text);
inline std::size_t index_of(BellLabel label) { return static_cast<std::size_t>(label); }
inline bool is_psi_family(BellLabel label) {
    return label == BellLabel::PsiPlus || label == BellLabel::PsiMinus;
}

/// Bell state on a two-qubit layout (first, second).
StateVector make_bell(BellLabel label, std::string first = "a", std::string second = "b");

/// The four Bell states in kBellOrder.
std::vector<StateVector> bell_basis();

/// Computational basis {|0>, ..., |dim-1>} of a single subsystem.
std::vector<StateVector> computational_basis(std::size_t dim);

/// {|+>, |->} on one qubit.
std::vector<StateVector> diagonal_basis();

StateVector tensor(const StateVector &a, const StateVector &b);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b);

StateVector apply_unitary(const UnitaryOp &u, const StateVector &s,
                          const std::vector<std::string> &targets);
/// U ρ U† with U acting on `targets`.
DensityMatrix apply_unitary(const UnitaryOp &u, const DensityMatrix &d,
                            const std::vector<std::string> &targets);

DensityMatrix density_of(const StateVector &s);

DensityMatrix partial_trace(const DensityMatrix &d, const std::vector<std::string> &keep);

/// partial_trace(density_of(s), keep) without forming the full outer product.
DensityMatrix reduced_density(const StateVector &s, const std::vector<std::string> &keep);

/// Throws InvalidArgument unless `basis` holds exactly `dim` pairwise
/// orthonormal vectors of dimension `dim`.
void require_orthonormal_basis(std::span<const StateVector> basis, std::size_t dim);

/// Born probabilities of measuring `targets` of `s` in `basis`.
std::vector<double> outcome_probabilities(const StateVector &s, const std::vector<std::string> &targets,
                                          std::span<const StateVector> basis);

struct Measurement {
    std::size_t outcome;
    StateVector state;
};

/// Projective measurement of `targets` in `basis`; one uniform draw selects
/// the outcome by inverse CDF over the basis order.
Measurement measure_in_basis(const StateVector &s, const std::vector<std::string> &targets,
                             std::span<const StateVector> basis, RandomSource &rand);

/// p_k = Tr(|b_k><b_k| d) for a basis of d's whole space.
std::vector<double> born_probabilities(const DensityMatrix &d, std::span<const StateVector> basis);

struct Projection {
    double probability = 0.0;
    /// Normalized post-measurement state; empty when probability is zero.
    std::optional<DensityMatrix> state;
};

/// Applies the projector |v><v| ⊗ I on `targets` to `d`.
Projection project(const DensityMatrix &d, const std::vector<std::string> &targets,
                   const StateVector &v);

/// Inverse-CDF pick over `probabilities` using one uniform draw. Outcomes of
/// zero probability are never returned.
std::size_t sample_index(std::span<const double> probabilities, RandomSource &rand);

} // namespace pingpong::quantum
