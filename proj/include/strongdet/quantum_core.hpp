#pragma once

// Finite-dimensional states, operators, subspaces and exact unitary
// propagation for time-independent Hamiltonians (hbar = 1).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "strongdet/errors.hpp"
#include "strongdet/tolerances.hpp"

namespace strongdet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Largest entrywise deviation from Hermiticity.
double hermiticity_defect(const CMatrix& m);

/// Normalized pure state. Equality of physical states is up to a global phase.
class StateVector {
public:
    explicit StateVector(CVector amplitudes, const Tolerances& tol = default_tolerances());

    /// Rescales `v` to unit norm; throws ValidationError for the zero vector.
    static StateVector normalized(const CVector& v);
    static StateVector basis(Index dim, Index i);

    Index dim() const { return amps_.size(); }
    const CVector& amplitudes() const { return amps_; }
    Complex operator[](Index i) const { return amps_(i); }

    /// |<this|other>| >= 1 - tol.
    bool physically_equals(const StateVector& other, double tol = default_tolerances().phase) const;

private:
    CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries, const Tolerances& tol = default_tolerances());

    static DensityMatrix from_pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(Index dim);

    Index dim() const { return w_.rows(); }
    const CMatrix& entries() const { return w_; }

    double purity() const;
    Eigen::VectorXd eigenvalues() const;

    /// Largest entrywise difference.
    double distance_max(const DensityMatrix& other) const;

private:
    DensityMatrix(CMatrix entries, std::nullptr_t) : w_(std::move(entries)) {}
    CMatrix w_;
};

/// Hermitian matrix carrying a role tag, so Hamiltonians and observables
/// are not interchangeable by accident.
template <class Role>
class HermitianOperator {
public:
    explicit HermitianOperator(CMatrix entries, const Tolerances& tol = default_tolerances())
        : m_(std::move(entries)) {
        if (m_.rows() == 0 || m_.rows() != m_.cols())
            throw ValidationError("operator must be a non-empty square matrix");
        if (!m_.allFinite()) throw ValidationError("operator has non-finite entries");
        if (hermiticity_defect(m_) > tol.hermitian)
            throw ValidationError("operator is not Hermitian");
    }

    static HermitianOperator zero(Index dim) { return HermitianOperator(CMatrix::Zero(dim, dim)); }
    static HermitianOperator identity(Index dim) {
        return HermitianOperator(CMatrix::Identity(dim, dim));
    }

    Index dim() const { return m_.rows(); }
    const CMatrix& entries() const { return m_; }

private:
    CMatrix m_;
};

struct HamiltonianRole {};
struct ObservableRole {};
using Hamiltonian = HermitianOperator<HamiltonianRole>;
using Observable = HermitianOperator<ObservableRole>;

/// Orthonormal basis of a k-dimensional subspace of C^n, stored as n x k columns.
/// `family` names a symbolic construction ("first-2-of-16") when there is one.
class Subspace {
public:
    explicit Subspace(CMatrix basis, std::optional<std::string> family = std::nullopt,
                      const Tolerances& tol = default_tolerances());

    /// span{e_0, ..., e_{k-1}} in C^n.
    static Subspace first_k(Index k, Index ambient_dim);
    /// span{e_offset, ..., e_{offset+k-1}} in C^n.
    static Subspace basis_block(Index offset, Index k, Index ambient_dim);
    /// Span of the eigenvectors of the k lowest eigenvalues of H.
    static Subspace lowest_eigenvectors(const Hamiltonian& H, Index k);
    /// Orthonormalizes the given columns (Gram-Schmidt via QR); they must be independent.
    static Subspace spanned_by(const CMatrix& columns);

    Index ambient_dim() const { return b_.rows(); }
    Index dim() const { return b_.cols(); }
    const CMatrix& basis() const { return b_; }
    const std::optional<std::string>& family() const { return family_; }

    /// ||(I - P) v|| for a vector of the ambient space.
    double residual(const CVector& v) const;

private:
    CMatrix b_;
    std::optional<std::string> family_;
};

/// exp(-i H dt), unitary.
class Propagator {
public:
    Propagator(CMatrix entries, double time_step, const Tolerances& tol = default_tolerances());

    Index dim() const { return u_.rows(); }
    const CMatrix& entries() const { return u_; }
    double time_step() const { return dt_; }

private:
    CMatrix u_;
    double dt_;
};

using QuantumState = std::variant<StateVector, DensityMatrix>;

Index state_dim(const QuantumState& state);
DensityMatrix to_density(const QuantumState& state);

/// Exact propagator via the spectral decomposition of H.
Propagator make_propagator(const Hamiltonian& H, double dt);
/// Product a * b; the time steps add.
Propagator compose(const Propagator& a, const Propagator& b);

StateVector evolve_state(const Propagator& U, const StateVector& psi);
DensityMatrix evolve_density(const Propagator& U, const DensityMatrix& W);
QuantumState evolve(const Propagator& U, const QuantumState& state);

/// P = B B^dagger.
CMatrix projector(const Subspace& S);
Observable projector_observable(const Subspace& S);

double expectation(const Observable& A, const StateVector& psi);
double expectation(const Observable& A, const DensityMatrix& W);
double expectation(const Observable& A, const QuantumState& state);

/// GUE-style H = (G + G^dagger)/2 with i.i.d. standard complex normal G.
Hamiltonian random_hamiltonian(Index dim, std::uint64_t seed);
Observable random_observable(Index dim, std::uint64_t seed);

}  // namespace strongdet
