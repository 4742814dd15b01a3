#include "strongdet/quantum_core.hpp"

#include <cmath>

#include "strongdet/rng.hpp"

namespace strongdet {

namespace {

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b)
        throw ValidationError(std::string("dimension mismatch in ") + what + ": " +
                              std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// StateVector ---------------------------------------------------------------

StateVector::StateVector(CVector amplitudes, const Tolerances& tol) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw ValidationError("state vector must have dim >= 1");
    if (!amps_.allFinite()) throw ValidationError("state vector has non-finite amplitudes");
    if (std::abs(amps_.norm() - 1.0) > tol.norm)
        throw ValidationError("state vector is not normalized (norm " + std::to_string(amps_.norm()) +
                              ")");
}

StateVector StateVector::normalized(const CVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("cannot normalize a zero vector");
    return StateVector(v / n);
}

StateVector StateVector::basis(Index dim, Index i) {
    if (dim < 1 || i < 0 || i >= dim) throw ValidationError("basis index out of range");
    return StateVector(CVector::Unit(dim, i));
}

bool StateVector::physically_equals(const StateVector& other, double tol) const {
    if (dim() != other.dim()) return false;
    return std::abs(amps_.dot(other.amps_)) >= 1.0 - tol;
}

// DensityMatrix -------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix entries, const Tolerances& tol) : w_(std::move(entries)) {
    if (w_.rows() == 0 || w_.rows() != w_.cols())
        throw ValidationError("density matrix must be a non-empty square matrix");
    if (!w_.allFinite()) throw ValidationError("density matrix has non-finite entries");
    if (hermiticity_defect(w_) > tol.hermitian) throw ValidationError("density matrix is not Hermitian");
    if (std::abs(w_.trace() - Complex(1.0, 0.0)) > tol.trace)
        throw ValidationError("density matrix trace is not 1");
    if (eigenvalues().minCoeff() < -tol.psd)
        throw ValidationError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    return DensityMatrix(CMatrix(psi.amplitudes() * psi.amplitudes().adjoint()), nullptr);
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
    if (dim < 1) throw ValidationError("dim must be >= 1");
    return DensityMatrix(CMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim)), nullptr);
}

double DensityMatrix::purity() const { return (w_ * w_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(w_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
    return es.eigenvalues();
}

double DensityMatrix::distance_max(const DensityMatrix& other) const {
    require_same_dim(dim(), other.dim(), "density comparison");
    return (w_ - other.w_).cwiseAbs().maxCoeff();
}

// Subspace ------------------------------------------------------------------

Subspace::Subspace(CMatrix basis, std::optional<std::string> family, const Tolerances& tol)
    : b_(std::move(basis)), family_(std::move(family)) {
    if (b_.rows() < 1 || b_.cols() < 1) throw ValidationError("subspace needs ambientDim >= 1 and k >= 1");
    if (b_.cols() > b_.rows()) throw ValidationError("subspace dimension exceeds ambient dimension");
    if (!b_.allFinite()) throw ValidationError("subspace basis has non-finite entries");
    const CMatrix gram = b_.adjoint() * b_;
    const double defect = (gram - CMatrix::Identity(b_.cols(), b_.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.orthonormal) throw ValidationError("subspace basis is not orthonormal");
}

Subspace Subspace::first_k(Index k, Index ambient_dim) {
    if (k < 1 || k > ambient_dim) throw ValidationError("first_k requires 1 <= k <= ambientDim");
    return Subspace(CMatrix::Identity(ambient_dim, k),
                    "first-" + std::to_string(k) + "-of-" + std::to_string(ambient_dim));
}

Subspace Subspace::basis_block(Index offset, Index k, Index ambient_dim) {
    if (k < 1 || offset < 0 || offset + k > ambient_dim)
        throw ValidationError("basis block out of range");
    CMatrix b = CMatrix::Zero(ambient_dim, k);
    for (Index j = 0; j < k; ++j) b(offset + j, j) = 1.0;
    if (offset == 0) return Subspace(std::move(b), "first-" + std::to_string(k) + "-of-" + std::to_string(ambient_dim));
    return Subspace(std::move(b), "block-" + std::to_string(offset) + "-" + std::to_string(k) + "-of-" +
                                      std::to_string(ambient_dim));
}

Subspace Subspace::lowest_eigenvectors(const Hamiltonian& H, Index k) {
    if (k < 1 || k > H.dim()) throw ValidationError("lowest_eigenvectors requires 1 <= k <= dim");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H.entries());
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
    // eigenvalues come sorted ascending
    return Subspace(es.eigenvectors().leftCols(k),
                    "lowest-" + std::to_string(k) + "-eigenvectors-of-" + std::to_string(H.dim()));
}

Subspace Subspace::spanned_by(const CMatrix& columns) {
    if (columns.cols() < 1 || columns.cols() > columns.rows())
        throw ValidationError("spanned_by needs 1 <= columns <= rows");
    Eigen::ColPivHouseholderQR<CMatrix> qr(columns);
    if (qr.rank() < columns.cols()) throw ValidationError("spanning vectors are linearly dependent");
    // Modified Gram-Schmidt keeps the span ordering of the input columns.
    CMatrix q = columns;
    for (Index j = 0; j < q.cols(); ++j) {
        for (Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        q.col(j) /= q.col(j).norm();
    }
    return Subspace(std::move(q));
}

double Subspace::residual(const CVector& v) const {
    require_same_dim(ambient_dim(), v.size(), "subspace residual");
    return (v - b_ * (b_.adjoint() * v)).norm();
}

// Propagator ----------------------------------------------------------------

Propagator::Propagator(CMatrix entries, double time_step, const Tolerances& tol)
    : u_(std::move(entries)), dt_(time_step) {
    if (u_.rows() == 0 || u_.rows() != u_.cols()) throw ValidationError("propagator must be square");
    if (!std::isfinite(dt_)) throw ValidationError("time step must be finite");
    const double defect = (u_.adjoint() * u_ - CMatrix::Identity(u_.rows(), u_.cols())).norm();
    if (!(defect < tol.unitary)) throw NumericalError("propagator is not unitary");
}

// Free functions ------------------------------------------------------------

Index state_dim(const QuantumState& state) {
    return std::visit([](const auto& s) { return s.dim(); }, state);
}

DensityMatrix to_density(const QuantumState& state) {
    if (const auto* psi = std::get_if<StateVector>(&state)) return DensityMatrix::from_pure(*psi);
    return std::get<DensityMatrix>(state);
}

Propagator make_propagator(const Hamiltonian& H, double dt) {
    if (!std::isfinite(dt)) throw ValidationError("time step must be finite");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H.entries());
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
    const Eigen::VectorXd& energies = es.eigenvalues();
    CVector phases(energies.size());
    for (Index i = 0; i < energies.size(); ++i) phases(i) = std::polar(1.0, -energies(i) * dt);
    const CMatrix& V = es.eigenvectors();
    return Propagator(V * phases.asDiagonal() * V.adjoint(), dt);
}

Propagator compose(const Propagator& a, const Propagator& b) {
    require_same_dim(a.dim(), b.dim(), "compose");
    return Propagator(a.entries() * b.entries(), a.time_step() + b.time_step());
}

StateVector evolve_state(const Propagator& U, const StateVector& psi) {
    require_same_dim(U.dim(), psi.dim(), "evolve_state");
    return StateVector(U.entries() * psi.amplitudes());
}

DensityMatrix evolve_density(const Propagator& U, const DensityMatrix& W) {
    require_same_dim(U.dim(), W.dim(), "evolve_density");
    CMatrix out = U.entries() * W.entries() * U.entries().adjoint();
    // restore exact Hermiticity lost to rounding
    out = (0.5 * (out + out.adjoint())).eval();
    return DensityMatrix(std::move(out));
}

QuantumState evolve(const Propagator& U, const QuantumState& state) {
    if (const auto* psi = std::get_if<StateVector>(&state)) return evolve_state(U, *psi);
    return evolve_density(U, std::get<DensityMatrix>(state));
}

CMatrix projector(const Subspace& S) { return S.basis() * S.basis().adjoint(); }

Observable projector_observable(const Subspace& S) {
    CMatrix p = projector(S);
    return Observable((0.5 * (p + p.adjoint())).eval());
}

namespace {

double real_part_checked(Complex value) {
    if (std::abs(value.imag()) >= default_tolerances().imaginaryResidue)
        throw NumericalError("expectation has imaginary residue " + std::to_string(value.imag()));
    return value.real();
}

}  // namespace

double expectation(const Observable& A, const StateVector& psi) {
    require_same_dim(A.dim(), psi.dim(), "expectation");
    return real_part_checked(psi.amplitudes().dot(A.entries() * psi.amplitudes()));
}

double expectation(const Observable& A, const DensityMatrix& W) {
    require_same_dim(A.dim(), W.dim(), "expectation");
    // tr(W A) = sum_ij W_ij A_ji
    return real_part_checked((W.entries().array() * A.entries().transpose().array()).sum());
}

double expectation(const Observable& A, const QuantumState& state) {
    return std::visit([&](const auto& s) { return expectation(A, s); }, state);
}

namespace {

CMatrix gue_matrix(Index dim, std::uint64_t seed) {
    if (dim < 1) throw ValidationError("dim must be >= 1");
    Engine engine(seed);
    CMatrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) g(i, j) = complex_normal(engine);
    CMatrix h = 0.5 * (g + g.adjoint());
    return h;
}

}  // namespace

Hamiltonian random_hamiltonian(Index dim, std::uint64_t seed) { return Hamiltonian(gue_matrix(dim, seed)); }

Observable random_observable(Index dim, std::uint64_t seed) { return Observable(gue_matrix(dim, seed)); }

}  // namespace strongdet
