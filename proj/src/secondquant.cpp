#include "fockforge/secondquant.hpp"

#include <cmath>
#include <vector>

#include "fockforge/kernels.hpp"
#include "fockforge/linalg.hpp"

namespace fockforge {
namespace {

void require_modes(const OperatorMatrix& a, const FockSpace& fock, const char* what) {
  if (a.dim() != fock.modes())
    throw DimensionMismatch(std::string(what) + ": operator dimension differs from mode count");
}

FockOperator from_dense(const FockSpace& space, const CMatrix& m) {
  return FockOperator(space, m.sparseView(0.0, 0.0));
}

// Compression of an operator on a padded boson space onto the states of the
// target space (same modes, smaller cap). Basis order is preserved because
// both spaces order states lexicographically in the occupation vector.
FockOperator compress_to(const FockOperator& padded, const FockSpace& target) {
  const FockSpace& from = padded.space();
  std::vector<Index> position(static_cast<std::size_t>(from.dim()), -1);
  Index next = 0;
  for (Index s = 0; s < from.dim(); ++s)
    if (from.within(s, target.cap())) position[static_cast<std::size_t>(s)] = next++;
  if (next != target.dim()) throw DimensionMismatch("compress_to: incompatible spaces");
  std::vector<Triplet> trips;
  for (Index c = 0; c < from.dim(); ++c) {
    const Index tc = position[static_cast<std::size_t>(c)];
    if (tc < 0) continue;
    for (SparseOp::InnerIterator it(padded.matrix(), c); it; ++it) {
      const Index tr = position[static_cast<std::size_t>(it.row())];
      if (tr >= 0) trips.emplace_back(tr, tc, it.value());
    }
  }
  SparseOp m(target.dim(), target.dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return FockOperator(target, std::move(m));
}

FockSpace padded_space(const FockSpace& fock, int pad) {
  return FockSpace::boson(fock.modes(), fock.cap() + pad);
}

CMatrix exp_i(const FockOperator& generator) {
  const CMatrix g = generator.dense();
  if ((g - g.adjoint()).norm() <= 1e-12 * std::max(1.0, g.norm()))
    return linalg::expm_hermitian(g, kI);
  return linalg::expm_diagonalizable(kI * g);
}

}  // namespace

FockOperator q_of(const OperatorMatrix& a, const FockSpace& fock) {
  require_modes(a, fock, "q_of");
  return FockOperator(fock, kernels::bilinear_parallel(fock, a.matrix()));
}

FockOperator Q_of(const OperatorMatrix& u, const FockSpace& fock) {
  require_modes(u, fock, "Q_of");
  Eigen::FullPivLU<CMatrix> lu(u.matrix());
  if (!lu.isInvertible()) throw InvalidArgument("Q_of: U must be invertible");
  return FockOperator(fock, kernels::transformation_parallel(fock, u.matrix()));
}

LinearFunctional trace_functional(CMatrix weight) {
  return [w = std::move(weight)](const CMatrix& a) { return (w * a).trace(); };
}

FockOperator normalized_q(const OperatorMatrix& a, const FockSpace& fock,
                          const LinearFunctional& b) {
  return q_of(a, fock) - b(a.matrix()) * FockOperator::identity(fock);
}

QuasiFreeRep::QuasiFreeRep(FockSpace fock, OperatorMatrix p_minus)
    : fock_(fock),
      p_minus_(std::move(p_minus)),
      p_plus_(OperatorMatrix(p_minus_.space(),
                             CMatrix::Identity(p_minus_.dim(), p_minus_.dim()) - p_minus_.matrix())) {
  require_modes(p_minus_, fock_, "QuasiFreeRep");
  if (!p_minus_.is_projection())
    throw InvalidArgument("QuasiFreeRep: P- must be an orthogonal projection");
  const CMatrix& pm = p_minus_.matrix();
  const Index n = pm.rows();
  if (pm.imag().cwiseAbs().maxCoeff() == 0.0) {
    conjugation_basis_ = CMatrix::Identity(n, n);
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pm + pm.adjoint()));
    conjugation_basis_ = es.eigenvectors();
    for (Index c = 0; c < n; ++c) {
      Index top = 0;
      conjugation_basis_.col(c).cwiseAbs().maxCoeff(&top);
      const Complex z = conjugation_basis_(top, c);
      conjugation_basis_.col(c) *= std::conj(z) / std::abs(z);
    }
  }
  if (!fock_.is_fermion()) {
    grading_ = OperatorMatrix(p_minus_.space(), p_plus_.matrix() - p_minus_.matrix());
    if (!grading_->is_grading()) throw NumericalError("QuasiFreeRep: F is not a grading");
  }
}

CVector QuasiFreeRep::conjugate(const CVector& v) const {
  return conjugation_basis_ * (conjugation_basis_.adjoint() * v).conjugate();
}

FieldPair quasifree_fields(const QuasiFreeRep& rep, const CVector& f) {
  if (f.size() != rep.fock().modes()) throw DimensionMismatch("quasifree_fields: vector length");
  const CVector plus = rep.p_plus().matrix() * f;
  const CVector minus_conj = rep.conjugate(rep.p_minus().matrix() * f);
  const FieldPair on_plus = field_op(rep.fock(), plus);
  const FieldPair on_minus = field_op(rep.fock(), minus_conj);
  const double sign = rep.fock().is_fermion() ? 1.0 : -1.0;
  FockOperator creator = on_plus.creator + on_minus.annihilator;
  FockOperator annihilator = on_plus.annihilator + Complex(sign) * on_minus.creator;
  return FieldPair{std::move(annihilator), std::move(creator)};
}

FockOperator represented_bilinear(const OperatorMatrix& a, const QuasiFreeRep& rep) {
  require_modes(a, rep.fock(), "represented_bilinear");
  const Index n = a.dim();
  std::vector<FockOperator> creators;
  std::vector<FockOperator> annihilators;
  creators.reserve(static_cast<std::size_t>(n));
  annihilators.reserve(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    auto pair = quasifree_fields(rep, CVector::Unit(n, m));
    creators.push_back(std::move(pair.creator));
    annihilators.push_back(std::move(pair.annihilator));
  }
  FockOperator total = FockOperator::zero(rep.fock());
  for (Index m = 0; m < n; ++m) {
    FockOperator row = FockOperator::zero(rep.fock());
    bool any = false;
    for (Index k = 0; k < n; ++k) {
      if (a.matrix()(m, k) == Complex(0.0)) continue;
      row += a.matrix()(m, k) * annihilators[static_cast<std::size_t>(k)];
      any = true;
    }
    if (any) total += creators[static_cast<std::size_t>(m)] * row;
  }
  return total;
}

FockOperator normal_ordered_q(const OperatorMatrix& a, const QuasiFreeRep& rep) {
  if (!rep.fock().is_fermion())
    throw InvalidArgument("normal_ordered_q: fermionic representation required");
  FockOperator x = represented_bilinear(a, rep);
  const Complex vev = x.vacuum_expectation();
  return x - vev * FockOperator::identity(rep.fock());
}

SchwingerResult schwinger_term(const OperatorMatrix& a, const OperatorMatrix& b,
                               const OperatorMatrix& p_minus) {
  require_same_dim(a, b, "schwinger_term");
  require_same_dim(a, p_minus, "schwinger_term");
  const CMatrix& pm = p_minus.matrix();
  const CMatrix pp = CMatrix::Identity(pm.rows(), pm.cols()) - pm;
  const CMatrix& am = a.matrix();
  const CMatrix& bm = b.matrix();
  const Complex value = (pm * am * pp * bm * pm).trace() - (pm * bm * pp * am * pm).trace();
  return SchwingerResult{value, p_minus, a, b};
}

double commutator_anomaly_check(const OperatorMatrix& a, const OperatorMatrix& b,
                                const QuasiFreeRep& rep) {
  const FockOperator qa = normal_ordered_q(a, rep);
  const FockOperator qb = normal_ordered_q(b, rep);
  const OperatorMatrix ab(linalg::commutator(a.matrix(), b.matrix()));
  const FockOperator qab = normal_ordered_q(ab, rep);
  const Complex s = schwinger_term(a, b, rep.p_minus()).value;
  const FockOperator residual =
      commutator(qa, qb) - qab - s * FockOperator::identity(rep.fock());
  return operator_norm(residual);
}

double cocycle_check(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c,
                     const OperatorMatrix& p_minus) {
  const auto bracket = [](const OperatorMatrix& x, const OperatorMatrix& y) {
    return OperatorMatrix(linalg::commutator(x.matrix(), y.matrix()));
  };
  const Complex total = schwinger_term(bracket(a, b), c, p_minus).value +
                        schwinger_term(bracket(b, c), a, p_minus).value +
                        schwinger_term(bracket(c, a), b, p_minus).value;
  return std::abs(total);
}

OffDiagonalNorms offdiagonal_hs_norms(const OperatorMatrix& a, const OperatorMatrix& p_minus) {
  require_same_dim(a, p_minus, "offdiagonal_hs_norms");
  const CMatrix& pm = p_minus.matrix();
  const CMatrix pp = CMatrix::Identity(pm.rows(), pm.cols()) - pm;
  return OffDiagonalNorms{(pm * a.matrix() * pp).norm(), (pp * a.matrix() * pm).norm()};
}

ProjectivePhase projective_phase(const OperatorMatrix& a, const OperatorMatrix& b,
                                 const QuasiFreeRep& rep) {
  if (!a.is_hermitian() || !b.is_hermitian())
    throw InvalidArgument("projective_phase: A and B must be hermitian");
  const CMatrix u = linalg::expm_hermitian(a.matrix(), kI);
  const CMatrix v = linalg::expm_hermitian(b.matrix(), kI);
  CMatrix c = -kI * linalg::logm_unitary(u * v);
  c = 0.5 * (c + c.adjoint()).eval();
  const OperatorMatrix c_op(c);

  const CMatrix qu = linalg::expm_hermitian(normal_ordered_q(a, rep).dense(), kI);
  const CMatrix qv = linalg::expm_hermitian(normal_ordered_q(b, rep).dense(), kI);
  const CMatrix qw = linalg::expm_hermitian(normal_ordered_q(c_op, rep).dense(), kI);
  const CMatrix qw_inv = qw.adjoint();

  const CMatrix product = qu * qv * qw_inv;
  const Index dim = product.rows();
  const Complex chi = product.trace() / static_cast<double>(dim);
  const double residual =
      linalg::operator_norm(CMatrix(product - chi * CMatrix::Identity(dim, dim)));

  const CMatrix reordered = qw_inv * (qu * qv);
  const Complex chi_reordered = reordered(0, 0);

  const CMatrix drift = c - a.matrix() - b.matrix();
  const Complex chi_one = std::exp(kI * (rep.p_minus().matrix() * drift).trace());
  return ProjectivePhase{chi, residual, chi_reordered, chi_one};
}

KgRepZero::KgRepZero(OperatorMatrix j, FockSpace fock)
    : j_(std::move(j)),
      fock_(fock),
      padded_(padded_space(fock, 1),
              OperatorMatrix(0.5 * (CMatrix::Identity(j_.dim(), j_.dim()) - j_.matrix()))) {
  if (fock_.is_fermion()) throw InvalidArgument("kg_rep_zero: boson Fock space required");
  if (!j_.is_grading()) throw InvalidArgument("kg_rep_zero: J must be a grading");
  require_modes(j_, fock_, "kg_rep_zero");
}

FockOperator KgRepZero::q(const OperatorMatrix& a) const {
  return compress_to(represented_bilinear(a, padded_), fock_);
}

FockOperator KgRepZero::Q_from_generator(const OperatorMatrix& a) const {
  return from_dense(fock_, exp_i(q(a)));
}

double KgRepZero::q_adjoint_residual(const OperatorMatrix& a) const {
  const CMatrix& jm = j_.matrix();
  const OperatorMatrix twisted(jm * a.matrix().adjoint() * jm);
  return operator_norm(q(a).adjoint() - q(twisted));
}

double KgRepZero::Q_adjoint_residual(const OperatorMatrix& a) const {
  const CMatrix& jm = j_.matrix();
  const OperatorMatrix twisted(-(jm * a.matrix().adjoint() * jm));
  return operator_norm(Q_from_generator(a).adjoint() - Q_from_generator(twisted));
}

KgRepZero kg_rep_zero(const OperatorMatrix& j, const FockSpace& fock_boson) {
  return KgRepZero(j, fock_boson);
}

FockOperator bogoliubov_normal_ordered_q(const OperatorMatrix& k, const OperatorMatrix& t,
                                         const OperatorMatrix& f, const FockSpace& fock_boson) {
  if (fock_boson.is_fermion())
    throw InvalidArgument("bogoliubov_normal_ordered_q: boson Fock space required");
  require_same_dim(k, t, "bogoliubov_normal_ordered_q");
  require_same_dim(k, f, "bogoliubov_normal_ordered_q");
  require_modes(k, fock_boson, "bogoliubov_normal_ordered_q");
  if (k.dim() % 2 != 0) throw InvalidArgument("bogoliubov_normal_ordered_q: odd dimension");
  const Index half = k.dim() / 2;

  CMatrix f_expected = CMatrix::Identity(k.dim(), k.dim());
  f_expected.bottomRightCorner(half, half) *= -1.0;
  if ((f.matrix() - f_expected).norm() > 1e-12)
    throw InvalidArgument("bogoliubov_normal_ordered_q: F must be diag(1, -1)");

  Eigen::PartialPivLU<CMatrix> lu(t.matrix());
  const CMatrix k_hat = t.matrix() * k.matrix() * lu.inverse();
  CMatrix b = k_hat.topLeftCorner(half, half);
  b = 0.5 * (b + b.adjoint()).eval();
  const double scale = std::max(1.0, b.norm());
  if ((k_hat.bottomRightCorner(half, half) + b).norm() > 1e-8 * scale ||
      k_hat.topRightCorner(half, half).norm() > 1e-8 * scale ||
      k_hat.bottomLeftCorner(half, half).norm() > 1e-8 * scale)
    throw NumericalError("bogoliubov_normal_ordered_q: T K T^{-1} is not diag(B, -B)");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(b, Eigen::EigenvaluesOnly);
  const RVector& energies = es.eigenvalues();
  if (!(energies(0) > 0.0))
    throw InvalidArgument("bogoliubov_normal_ordered_q: B must be strictly positive");

  // K hat in the eigenbasis of B: diag(b, -b), which commutes with F.
  CMatrix k_diag = CMatrix::Zero(k.dim(), k.dim());
  for (Index i = 0; i < half; ++i) {
    k_diag(i, i) = energies(i);
    k_diag(half + i, half + i) = -energies(i);
  }
  const OperatorMatrix p_minus(0.5 * (CMatrix::Identity(k.dim(), k.dim()) - f.matrix()));
  const QuasiFreeRep padded(padded_space(fock_boson, 1), p_minus);
  FockOperator x = represented_bilinear(OperatorMatrix(k_diag), padded);
  const Complex vev = x.vacuum_expectation();
  x -= vev * FockOperator::identity(padded.fock());
  return compress_to(x, fock_boson);
}

CommutatorProbe boson_commutator_probe(const OperatorMatrix& t, const CVector& f,
                                       const CVector& g, const FockSpace& fock_boson) {
  if (fock_boson.is_fermion())
    throw InvalidArgument("boson_commutator_probe: boson Fock space required");
  require_modes(t, fock_boson, "boson_commutator_probe");
  if (t.dim() % 2 != 0) throw InvalidArgument("boson_commutator_probe: odd dimension");
  const KgRepZero rep(kg_grading(t.dim() / 2), fock_boson);
  Eigen::PartialPivLU<CMatrix> lu(t.matrix());
  const CVector tf = lu.solve(f);
  const CVector tg = t.matrix() * g;
  const FockOperator annihilator = quasifree_fields(rep.padded_rep(), tf).annihilator;
  const FockOperator creator = quasifree_fields(rep.padded_rep(), tg).creator;
  const CMatrix comm = compress_to(commutator(annihilator, creator), fock_boson).dense();
  const Complex value = comm(0, 0);
  const Index dim = comm.rows();
  const double residual =
      linalg::operator_norm(CMatrix(comm - value * CMatrix::Identity(dim, dim)));
  return CommutatorProbe{value, residual};
}

CommutatorForm boson_commutator_form(const OperatorMatrix& t, const FockSpace& fock_boson) {
  const Index n = t.dim();
  CommutatorForm form{CMatrix::Zero(n, n), 0.0};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const auto probe =
          boson_commutator_probe(t, CVector::Unit(n, i), CVector::Unit(n, j), fock_boson);
      form.m(i, j) = probe.value;
      form.max_residual = std::max(form.max_residual, probe.residual);
    }
  }
  return form;
}

}  // namespace fockforge
