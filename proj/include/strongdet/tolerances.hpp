#pragma once

namespace strongdet {

/// Every numerical tolerance used by the library, in one place.
struct Tolerances {
    double norm = 1e-9;          // unit norm of state vectors
    double hermitian = 1e-9;     // entrywise |A - A^dagger|
    double trace = 1e-9;         // |tr W - 1|
    double psd = 1e-9;           // minimum eigenvalue >= -psd
    double orthonormal = 1e-9;   // basis Gram matrix vs identity
    double unitary = 1e-8;       // ||U^dagger U - I||_F
    double phase = 1e-9;         // |<psi|phi>| >= 1 - phase for physical equality
    double imaginaryResidue = 1e-9;
    double subspaceResidual = 1e-9;  // ||(I - P) psi||
    double agreement = 1e-8;     // trajectory agreement in determinism certification
    double zeroWeight = 1e-12;   // branch weights at or below this are dropped
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace strongdet
