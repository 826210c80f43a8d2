#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fockforge/oneparticle.hpp"
#include "fockforge/types.hpp"

namespace fockforge {

enum class Statistics { fermion, boson };

const char* to_string(Statistics s);
Statistics statistics_from_string(const std::string& name);

// Maximum number of stored nonzeros (and basis states) any Fock-level object
// may use. Default 2^24, overridden by the FOCKFORGE_BUDGET environment variable.
std::size_t nonzero_budget();

// Occupation-number basis over n modes.
//
// Basis ordering: a basis index is the mixed-radix integer whose digit j is the
// occupancy of mode j, with mode 0 the least significant digit. Equivalently,
// states are ordered lexicographically in the occupation vector written as
// (n_{modes-1}, ..., n_1, n_0). For fermions the index is the occupation bitmask.
class FockSpace {
 public:
  static FockSpace fermion(Index modes);
  static FockSpace boson(Index modes, int cap);

  Statistics statistics() const { return statistics_; }
  bool is_fermion() const { return statistics_ == Statistics::fermion; }
  Index modes() const { return modes_; }
  int cap() const { return cap_; }
  Index dim() const { return dim_; }
  Index radix() const { return cap_ + 1; }

  int occupation(Index state, Index mode) const;
  std::vector<int> occupations(Index state) const;
  Index index_of(std::span<const int> occupations) const;
  int particle_number(Index state) const;
  // Multiplier of mode j in the mixed-radix index.
  Index stride(Index mode) const;
  // Every mode occupancy <= max_occupancy.
  bool within(Index state, int max_occupancy) const;

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  FockSpace(Statistics statistics, Index modes, int cap, Index dim)
      : statistics_(statistics), modes_(modes), cap_(cap), dim_(dim) {}

  Statistics statistics_;
  Index modes_;
  int cap_;
  Index dim_;
};

// Fock space over a one-particle space. cap is ignored for fermions and must
// be >= 1 for bosons. Throws BudgetExceeded if the dimension would exceed the
// nonzero budget.
FockSpace make_fock(const OneParticleSpace& space, Statistics statistics, int cap = 1);
FockSpace make_fock(Index modes, Statistics statistics, int cap = 1);

struct FockVector {
  FockSpace space;
  CVector coeffs;

  Complex inner(const FockVector& other) const;  // conjugate-linear in *this
  double norm() const { return coeffs.norm(); }
};

FockVector vacuum(const FockSpace& space);

class FockOperator {
 public:
  FockOperator(FockSpace space, SparseOp matrix);

  static FockOperator identity(const FockSpace& space);
  static FockOperator zero(const FockSpace& space);

  const FockSpace& space() const { return space_; }
  const SparseOp& matrix() const { return matrix_; }
  Index dim() const { return space_.dim(); }
  CMatrix dense() const { return CMatrix(matrix_); }

  FockOperator adjoint() const;
  FockVector apply(const FockVector& v) const;
  Complex vacuum_expectation() const { return matrix_.coeff(0, 0); }

  FockOperator& operator+=(const FockOperator& other);
  FockOperator& operator-=(const FockOperator& other);

  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(Complex s, const FockOperator& a);

 private:
  FockSpace space_;
  SparseOp matrix_;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);
// [a, b]_- for bosons, [a, b]_+ for fermions.
FockOperator graded_commutator(const FockOperator& a, const FockOperator& b);

// Largest singular value.
double operator_norm(const FockOperator& op);

// psi^dagger_j: Jordan-Wigner signs for fermions, sqrt(n+1) amplitudes for
// bosons. Boson creation out of an occupancy at cap is dropped (truncation).
FockOperator creation_mode(const FockSpace& space, Index mode);
FockOperator annihilation_mode(const FockSpace& space, Index mode);

struct FieldPair {
  FockOperator annihilator;
  FockOperator creator;
};

// creator = sum_j f_j psi^dagger_j, annihilator = adjoint(creator): linear in
// f for the creator, antilinear for the annihilator.
FieldPair field_op(const FockSpace& space, const CVector& f);

// psi^dagger(f_1) ... psi^dagger(f_N) Omega. Boson: throws CapOverflow when any
// creator would act on a component already at the cap in a mode f touches.
FockVector wedge_state(const FockSpace& space, std::span<const CVector> fs);

// delta_{N,M} sum over permutations P of (+-1)^{|P|} prod_j (f_j, g_{P j}),
// evaluated by explicit enumeration of S_N. Independent of FockOperator.
Complex wedge_inner_oracle(std::span<const CVector> fs, std::span<const CVector> gs,
                           Statistics statistics);

// Indices of basis states with every mode occupancy <= max_occupancy.
std::vector<Index> protected_states(const FockSpace& space, int max_occupancy);

// Columns of op restricted to the listed basis states (all rows kept).
CMatrix restrict_columns(const FockOperator& op, std::span<const Index> states);

// Compression P op P onto the listed basis states.
CMatrix compress(const FockOperator& op, std::span<const Index> states);

}  // namespace fockforge
