#pragma once

#include <functional>
#include <optional>

#include "fockforge/fock.hpp"
#include "fockforge/oneparticle.hpp"

// Second quantization: the additive and multiplicative lifts q and Q,
// quasi-free representations, normal-ordered bilinears, the Schwinger term
// and the projective multiplier of exponentiated normal-ordered bilinears.
namespace fockforge {

// q(A) = sum_{m,n} A_mn psi^dagger_m psi_n. Number conserving, so on a boson
// space it is exact on every state with total occupancy <= cap.
FockOperator q_of(const OperatorMatrix& a, const FockSpace& fock);

// Q(U): Q(U) Omega = Omega, Q(U) psi^dagger(f) = psi^dagger(Uf) Q(U). U must be
// invertible. Boson output components above the cap are dropped, so Q is exact
// on states with total occupancy <= cap.
FockOperator Q_of(const OperatorMatrix& u, const FockSpace& fock);

using LinearFunctional = std::function<Complex(const CMatrix&)>;

// A -> tr(M A).
LinearFunctional trace_functional(CMatrix weight);

// q'(A) = q(A) - b(A) 1.
FockOperator normalized_q(const OperatorMatrix& a, const FockSpace& fock,
                          const LinearFunctional& b);

// Quasi-free representation defined by a projection P- ("Dirac sea"):
//   hat psi^dagger(f) = psi^dagger(P+ f) + psi(conj(P- f))
//   hat psi(f)        = psi(P+ f) -+ psi^dagger(conj(P- f))
// with - for bosons and + for fermions. conj must commute with P-, otherwise
// the fields fail the (anti)commutation relations. It is the entrywise
// conjugation in the declared basis when P- is real there, and otherwise the
// entrywise conjugation in an orthonormal eigenbasis W of P- (phase fixed):
// conj(v) = W bar(W^* v). For bosons the grading F = P+ - P- twists the star
// operation.
class QuasiFreeRep {
 public:
  QuasiFreeRep(FockSpace fock, OperatorMatrix p_minus);

  const FockSpace& fock() const { return fock_; }
  const OperatorMatrix& p_minus() const { return p_minus_; }
  const OperatorMatrix& p_plus() const { return p_plus_; }
  Statistics statistics() const { return fock_.statistics(); }
  // F = P+ - P-; present for bosons.
  const std::optional<OperatorMatrix>& grading() const { return grading_; }
  // The basis W in which conj is entrywise; identity when P- is real.
  const CMatrix& conjugation_basis() const { return conjugation_basis_; }
  CVector conjugate(const CVector& v) const;

  // The same projection over another Fock space of equal mode count.
  QuasiFreeRep rebased(const FockSpace& fock) const { return QuasiFreeRep(fock, p_minus_); }

 private:
  FockSpace fock_;
  OperatorMatrix p_minus_;
  OperatorMatrix p_plus_;
  std::optional<OperatorMatrix> grading_;
  CMatrix conjugation_basis_;
};

// {hat psi(f), hat psi^dagger(f)}.
FieldPair quasifree_fields(const QuasiFreeRep& rep, const CVector& f);

// sum_{mn} A_mn hat psi^dagger_m hat psi_n in the representation, without
// normal ordering. On a boson space the product of two truncated fields is
// exact only on states at least one level below the cap.
FockOperator represented_bilinear(const OperatorMatrix& a, const QuasiFreeRep& rep);

// hat q(A) = sum_{mn} A_mn (hat psi^dagger_m hat psi_n - <Omega, hat psi^dagger_m hat psi_n Omega>).
// Fermionic representations only.
FockOperator normal_ordered_q(const OperatorMatrix& a, const QuasiFreeRep& rep);

struct SchwingerResult {
  Complex value;
  OperatorMatrix p_minus;
  OperatorMatrix a;
  OperatorMatrix b;
};

// S(A, B) = tr(P- A P+ B P- - P- B P+ A P-).
SchwingerResult schwinger_term(const OperatorMatrix& a, const OperatorMatrix& b,
                               const OperatorMatrix& p_minus);

// ||[hat q(A), hat q(B)] - hat q([A, B]) - S(A, B) 1|| in operator norm.
double commutator_anomaly_check(const OperatorMatrix& a, const OperatorMatrix& b,
                                const QuasiFreeRep& rep);

// |S([A,B],C) + S([B,C],A) + S([C,A],B)|.
double cocycle_check(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c,
                     const OperatorMatrix& p_minus);

struct OffDiagonalNorms {
  double minus_plus;  // ||P- A P+||_2
  double plus_minus;  // ||P+ A P-||_2
};

// Hilbert-Schmidt norms of the blocks of A that mix P- and P+.
OffDiagonalNorms offdiagonal_hs_norms(const OperatorMatrix& a, const OperatorMatrix& p_minus);

struct ProjectivePhase {
  Complex chi;                     // Q(U) Q(V) Q(W)^{-1} = chi 1
  double proportionality_residual;
  Complex chi_reordered;           // <Omega, Q(W)^{-1} Q(U) Q(V) Omega>
  Complex chi_one_particle;        // exp(i tr(P- (C - A - B))), C = -i log(e^{iA} e^{iB})
};

// Hat Q(U) = exp(i hat q(A)), hat Q(V) = exp(i hat q(B)), hat Q(W) = exp(i hat q(C))
// with C = -i Log(e^{iA} e^{iB}) on the principal branch. Throws NumericalError
// if e^{iA} e^{iB} has spectrum on the branch cut.
ProjectivePhase projective_phase(const OperatorMatrix& a, const OperatorMatrix& b,
                                 const QuasiFreeRep& rep);

// Boson quasi-free representation pi_{P-} with P- = (1 - J)/2 over h0 (+) h0.
// Bilinears are assembled on a space padded by one level and compressed back to
// the cap, which makes them exact matrix compressions of the untruncated
// operators onto the cap-protected subspace.
class KgRepZero {
 public:
  KgRepZero(OperatorMatrix j, FockSpace fock);

  const OperatorMatrix& j() const { return j_; }
  const FockSpace& fock() const { return fock_; }
  const QuasiFreeRep& padded_rep() const { return padded_; }

  // q(A) in the representation, compressed to the cap.
  FockOperator q(const OperatorMatrix& a) const;
  // Q(exp(iA)) = exp(i q(A)).
  FockOperator Q_from_generator(const OperatorMatrix& a) const;

  // ||q(A)* - q(J A* J)||; for hermitian A this is ||q(A)* - q(J A J)||.
  double q_adjoint_residual(const OperatorMatrix& a) const;
  // ||Q(U)* - Q(J U* J)|| with U = exp(iA), where J U* J = exp(-i J A* J).
  double Q_adjoint_residual(const OperatorMatrix& a) const;

 private:
  OperatorMatrix j_;
  FockSpace fock_;
  QuasiFreeRep padded_;
};

KgRepZero kg_rep_zero(const OperatorMatrix& j, const FockSpace& fock_boson);

// hat q(K) in the hatted picture: K hat = T K T^{-1} = diag(B, -B) is rotated
// into the eigenbasis of B and normal ordered in the representation with
// P- = (1 - F)/2. The result is diagonal in the occupation basis.
FockOperator bogoliubov_normal_ordered_q(const OperatorMatrix& k, const OperatorMatrix& t,
                                         const OperatorMatrix& f, const FockSpace& fock_boson);

struct CommutatorProbe {
  Complex value;    // [hat psi(f), hat psi^dagger(g)] = value 1 on the protected subspace
  double residual;  // distance from value 1
};

// hat psi(f) = psi(T^{-1} f), hat psi^dagger(g) = psi^dagger(T g) with psi the
// fields of kg_rep_zero; the commutator is evaluated on the cap-protected subspace.
CommutatorProbe boson_commutator_probe(const OperatorMatrix& t, const CVector& f,
                                       const CVector& g, const FockSpace& fock_boson);

struct CommutatorForm {
  CMatrix m;             // [hat psi(e_i), hat psi^dagger(e_j)] = m(i, j)
  double max_residual;
};

CommutatorForm boson_commutator_form(const OperatorMatrix& t, const FockSpace& fock_boson);

}  // namespace fockforge
