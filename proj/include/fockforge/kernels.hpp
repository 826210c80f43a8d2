#pragma once

#include "fockforge/fock.hpp"
#include "fockforge/types.hpp"

// Fock-space assembly kernels. Each kernel comes as a serial reference and an
// OpenMP version; both fill identical per-column triplet buffers in the same
// order, so their results agree bit for bit.
namespace fockforge::kernels {

// sum_{m,n} a(m, n) psi^dagger_m psi_n. Boson terms that would leave the
// truncated space are dropped.
SparseOp bilinear_serial(const FockSpace& space, const CMatrix& a);
SparseOp bilinear_parallel(const FockSpace& space, const CMatrix& a);

// The many-body transformation of u, sector by sector: determinants of u
// minors for fermions, normalized permanents for bosons. Boson output states
// outside the truncated space are dropped.
SparseOp transformation_serial(const FockSpace& space, const CMatrix& u);
SparseOp transformation_parallel(const FockSpace& space, const CMatrix& u);

// Permanent by Ryser's formula with Gray-code updates.
Complex permanent(const CMatrix& m);

}  // namespace fockforge::kernels
