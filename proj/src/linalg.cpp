#include "fockforge/linalg.hpp"

#include <cmath>
#include <numbers>

#include "fockforge/random.hpp"

namespace fockforge::linalg {

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix hermitian_function(const CMatrix& h, const std::function<Complex(double)>& f) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
  const RVector& ev = es.eigenvalues();
  CVector fv(ev.size());
  for (Index i = 0; i < ev.size(); ++i) fv(i) = f(ev(i));
  const CMatrix& v = es.eigenvectors();
  return v * fv.asDiagonal() * v.adjoint();
}

CMatrix expm_hermitian(const CMatrix& h, Complex scale) {
  return hermitian_function(h, [scale](double x) { return std::exp(scale * x); });
}

CMatrix expm_diagonalizable(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
  const CMatrix& v = es.eigenvectors();
  Eigen::PartialPivLU<CMatrix> lu(v);
  const CVector& ev = es.eigenvalues();
  const CMatrix recon = v * ev.asDiagonal() * lu.inverse();
  const double scale = std::max(1.0, frobenius_norm(m));
  if (frobenius_norm(recon - m) > 1e-9 * scale)
    throw NumericalError("matrix is not numerically diagonalizable; exp refused");
  CVector ex(ev.size());
  for (Index i = 0; i < ev.size(); ++i) ex(i) = std::exp(ev(i));
  return v * ex.asDiagonal() * lu.inverse();
}

CMatrix logm_unitary(const CMatrix& u, double branch_tol) {
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& z = schur.matrixU();
  const Index n = u.rows();
  // A unitary matrix is normal, so its Schur form is diagonal up to rounding.
  const CMatrix strict_upper = t.triangularView<Eigen::StrictlyUpper>();
  if (frobenius_norm(strict_upper) > 1e-8)
    throw NumericalError("logm_unitary: input is not normal");
  CVector logs(n);
  for (Index i = 0; i < n; ++i) {
    const Complex lambda = t(i, i);
    const double angle = std::arg(lambda);
    if (std::numbers::pi - std::abs(angle) < branch_tol)
      throw NumericalError("logm_unitary: spectrum touches the branch cut at -1");
    logs(i) = Complex(std::log(std::abs(lambda)), angle);
  }
  return z * logs.asDiagonal() * z.adjoint();
}

CMatrix sqrtm_positive(const CMatrix& h) {
  return hermitian_function(h, [](double x) {
    if (x <= 0.0) throw InvalidArgument("sqrtm_positive: matrix is not strictly positive");
    return Complex(std::sqrt(x));
  });
}

CMatrix inv_sqrtm_positive(const CMatrix& h) {
  return hermitian_function(h, [](double x) {
    if (x <= 0.0) throw InvalidArgument("inv_sqrtm_positive: matrix is not strictly positive");
    return Complex(1.0 / std::sqrt(x));
  });
}

double frobenius_norm(const CMatrix& m) { return m.norm(); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const SparseOp& m, std::uint64_t seed) {
  if (m.nonZeros() == 0) return 0.0;
  if (m.rows() <= kDenseNormLimit && m.cols() <= kDenseNormLimit)
    return operator_norm(CMatrix(m));

  CounterRng rng(seed);
  CVector v = random_vector(rng, m.cols());
  v.normalize();
  const SparseOp mh = m.adjoint();
  double estimate = 0.0;
  for (int iter = 0; iter < 1000; ++iter) {
    CVector w = mh * (m * v);
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    const double next = std::sqrt(norm_w);
    v = w / norm_w;
    if (iter > 10 && std::abs(next - estimate) <= 1e-13 * next) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace fockforge::linalg
