#pragma once

#include "histwalk/types.hpp"

namespace histwalk {

struct HermitianEig {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns
};

// Eigendecomposition of a Hermitian matrix. Throws config_error if the input
// is non-square or fails the Hermiticity check
// max|H - H^dag| <= 1e-12 * max|H|.
HermitianEig hermitian_eig(const Matrix& H);

// exp(-i s H) for Hermitian H, computed through the eigendecomposition so the
// result is unitary to orthonormality error.
Matrix unitary_exp(const Matrix& H, double s);

// Trace out the leading two-dimensional (coin) factor of a density matrix on
// coin (x) walker. Input dimension must be even; output has half the dimension.
Matrix partial_trace_coin(const Matrix& rho);

// Kronecker product, row-major block convention:
// (A (x) B)[i*rB + k, j*cB + l] = A[i,j] * B[k,l].
Matrix tensor(const Matrix& A, const Matrix& B);

}  // namespace histwalk
