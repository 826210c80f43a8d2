#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fockforge {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseOp = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument does not hold (wrong model, negative mass, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A Fock space or operator would exceed the configured nonzero budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A boson operation would push an occupancy above the per-mode cap.
class CapOverflow : public Error {
 public:
  using Error::Error;
};

// Post-condition verification failed, or a matrix function hit a branch cut.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockforge
