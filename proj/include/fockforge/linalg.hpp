#pragma once

#include <cstdint>
#include <functional>

#include "fockforge/types.hpp"

// Dense matrix functions by eigendecomposition, and the operator norms used
// for every residual in the project.
namespace fockforge::linalg {

CMatrix adjoint(const CMatrix& m);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

// f(h) for hermitian h by spectral calculus. h is symmetrized first.
CMatrix hermitian_function(const CMatrix& h, const std::function<Complex(double)>& f);

// exp(scale * h) for hermitian h.
CMatrix expm_hermitian(const CMatrix& h, Complex scale);

// exp(m) for a diagonalizable (not necessarily normal) matrix. Throws
// NumericalError if the eigenvector basis is too ill-conditioned to reconstruct m.
CMatrix expm_diagonalizable(const CMatrix& m);

// Principal logarithm of a unitary matrix via its Schur form. Throws
// NumericalError when an eigenvalue lies within branch_tol (in angle) of -1.
CMatrix logm_unitary(const CMatrix& u, double branch_tol = 1e-8);

// Square root and inverse square root of a strictly positive hermitian matrix.
CMatrix sqrtm_positive(const CMatrix& h);
CMatrix inv_sqrtm_positive(const CMatrix& h);

double frobenius_norm(const CMatrix& m);

// Largest singular value.
double operator_norm(const CMatrix& m);

// Largest singular value of a sparse operator: dense SVD up to dimension 256,
// power iteration on m*m with a fixed seed above that.
double operator_norm(const SparseOp& m, std::uint64_t seed = 0x5eed);

inline constexpr Index kDenseNormLimit = 256;

}  // namespace fockforge::linalg
