#include "fockforge/oneparticle.hpp"

#include <cmath>

#include "fockforge/linalg.hpp"

namespace fockforge {
namespace {

StructureFlags compute_flags(const CMatrix& m) {
  StructureFlags flags;
  if (m.rows() != m.cols()) return flags;
  const Index n = m.rows();
  const double tol = OperatorMatrix::kFlagTolerance * std::max(1.0, m.norm());
  const CMatrix id = CMatrix::Identity(n, n);
  flags.hermitian = (m - m.adjoint()).norm() <= tol;
  flags.unitary = (m.adjoint() * m - id).norm() <= tol;
  const CMatrix sq = m * m;
  flags.projection = flags.hermitian && (sq - m).norm() <= tol;
  flags.grading = flags.hermitian && (sq - id).norm() <= tol;
  return flags;
}

void require_lengths(const LatticeConfig& cfg) {
  if (static_cast<Index>(cfg.phi.size()) != cfg.sites ||
      static_cast<Index>(cfg.vec_a.size()) != cfg.sites)
    throw DimensionMismatch("LatticeConfig: phi and vecA must have length L");
}

CMatrix diagonal_field(const std::vector<double>& samples) {
  const Index n = static_cast<Index>(samples.size());
  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = samples[static_cast<std::size_t>(i)];
  return d;
}

std::vector<std::string> site_labels(Index sites, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(sites));
  for (Index j = 0; j < sites; ++j) labels.push_back(prefix + std::to_string(j));
  return labels;
}

std::vector<std::string> two_component_labels(Index sites, const std::string& a,
                                              const std::string& b) {
  auto labels = site_labels(sites, a);
  auto upper = site_labels(sites, b);
  labels.insert(labels.end(), upper.begin(), upper.end());
  return labels;
}

}  // namespace

SpaceRef OneParticleSpace::make(Index dim) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) labels.push_back(std::to_string(i));
  return make(std::move(labels));
}

SpaceRef OneParticleSpace::make(std::vector<std::string> labels) {
  if (labels.empty()) throw InvalidArgument("OneParticleSpace: dim must be >= 1");
  auto space = std::make_shared<OneParticleSpace>();
  space->dim = static_cast<Index>(labels.size());
  space->basis_labels = std::move(labels);
  return space;
}

OperatorMatrix::OperatorMatrix(CMatrix entries)
    : space_(OneParticleSpace::make(entries.rows())), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw DimensionMismatch("OperatorMatrix: entries must be square");
  flags_ = compute_flags(entries_);
}

OperatorMatrix::OperatorMatrix(SpaceRef space, CMatrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (!space_) throw InvalidArgument("OperatorMatrix: null space");
  if (entries_.rows() != space_->dim || entries_.cols() != space_->dim)
    throw DimensionMismatch("OperatorMatrix: entries must be dim x dim");
  flags_ = compute_flags(entries_);
}

OperatorMatrix OperatorMatrix::identity(Index dim) {
  return OperatorMatrix(CMatrix::Identity(dim, dim));
}

OperatorMatrix OperatorMatrix::zero(Index dim) { return OperatorMatrix(CMatrix::Zero(dim, dim)); }

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(space_, entries_.adjoint()); }

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
  if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

const char* to_string(LatticeModel model) {
  switch (model) {
    case LatticeModel::schrodinger1d: return "schrodinger1d";
    case LatticeModel::dirac1d: return "dirac1d";
    case LatticeModel::kleingordon1d: return "kleingordon1d";
  }
  return "?";
}

LatticeModel lattice_model_from_string(const std::string& name) {
  if (name == "schrodinger1d") return LatticeModel::schrodinger1d;
  if (name == "dirac1d") return LatticeModel::dirac1d;
  if (name == "kleingordon1d") return LatticeModel::kleingordon1d;
  throw InvalidArgument("unknown lattice model '" + name + "'");
}

LatticeConfig LatticeConfig::free(LatticeModel model, Index sites, double spacing, double mass,
                                  double charge) {
  LatticeConfig cfg;
  cfg.model = model;
  cfg.sites = sites;
  cfg.spacing = spacing;
  cfg.mass = mass;
  cfg.charge = charge;
  cfg.phi.assign(static_cast<std::size_t>(sites), 0.0);
  cfg.vec_a.assign(static_cast<std::size_t>(sites), 0.0);
  return cfg;
}

void LatticeConfig::validate() const {
  if (sites < 1) throw InvalidArgument("LatticeConfig: L must be >= 1");
  if (!(spacing > 0.0)) throw InvalidArgument("LatticeConfig: spacing must be positive");
  if (!(mass >= 0.0)) throw InvalidArgument("LatticeConfig: mass must be non-negative");
  require_lengths(*this);
  if (model == LatticeModel::kleingordon1d && !(mass > 0.0))
    throw InvalidArgument("LatticeConfig: kleingordon1d requires m > 0");
  if (model == LatticeModel::schrodinger1d && !(mass > 0.0))
    throw InvalidArgument("LatticeConfig: schrodinger1d requires m > 0");
}

CMatrix covariant_momentum(const LatticeConfig& cfg) {
  require_lengths(cfg);
  if (!(cfg.spacing > 0.0)) throw InvalidArgument("spacing must be positive");
  const Index n = cfg.sites;
  CMatrix x = CMatrix::Zero(n, n);
  const Complex hop = -kI / (2.0 * cfg.spacing);
  // On L = 1 (and L = 2) the forward and backward neighbours coincide and the
  // periodic centered difference vanishes, which the accumulation handles.
  for (Index j = 0; j < n; ++j) {
    x(j, (j + 1) % n) += hop;
    x(j, (j + n - 1) % n) -= hop;
  }
  for (Index j = 0; j < n; ++j) x(j, j) += cfg.charge * cfg.vec_a[static_cast<std::size_t>(j)];
  return x;
}

OperatorMatrix build_schrodinger_1d(const LatticeConfig& cfg) {
  if (cfg.model != LatticeModel::schrodinger1d)
    throw InvalidArgument("build_schrodinger_1d: model must be schrodinger1d");
  cfg.validate();
  if (!(cfg.mass > 0.0)) throw InvalidArgument("build_schrodinger_1d: m must be positive");
  const CMatrix x = covariant_momentum(cfg);
  CMatrix h = x.adjoint() * x / (2.0 * cfg.mass) - cfg.charge * diagonal_field(cfg.phi);
  h = 0.5 * (h + h.adjoint()).eval();
  return OperatorMatrix(OneParticleSpace::make(site_labels(cfg.sites, "x")), std::move(h));
}

OperatorMatrix build_dirac_1d(const LatticeConfig& cfg) {
  if (cfg.model != LatticeModel::dirac1d)
    throw InvalidArgument("build_dirac_1d: model must be dirac1d");
  cfg.validate();
  const Index n = cfg.sites;
  const CMatrix x = covariant_momentum(cfg);
  const CMatrix phi = diagonal_field(cfg.phi);
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix d = CMatrix::Zero(2 * n, 2 * n);
  // alpha = sigma_x couples the two spinor components through X.
  d.topRightCorner(n, n) = x;
  d.bottomLeftCorner(n, n) = x;
  // beta = sigma_z
  d.topLeftCorner(n, n) = cfg.mass * id - cfg.charge * phi;
  d.bottomRightCorner(n, n) = -cfg.mass * id - cfg.charge * phi;
  return OperatorMatrix(OneParticleSpace::make(two_component_labels(n, "up:x", "dn:x")),
                        std::move(d));
}

OperatorMatrix kg_grading(Index half_dim) {
  const Index n = half_dim;
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -kI * CMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = kI * CMatrix::Identity(n, n);
  return OperatorMatrix(std::move(j));
}

KleinGordonSystem build_klein_gordon_1d(const LatticeConfig& cfg) {
  if (cfg.model != LatticeModel::kleingordon1d)
    throw InvalidArgument("build_klein_gordon_1d: model must be kleingordon1d");
  cfg.validate();
  const Index n = cfg.sites;
  const CMatrix x = covariant_momentum(cfg);
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix b2 = x * x + cfg.mass * cfg.mass * id;
  b2 = 0.5 * (b2 + b2.adjoint()).eval();
  const CMatrix c = -cfg.charge * diagonal_field(cfg.phi);

  CMatrix k(2 * n, 2 * n);
  k.topLeftCorner(n, n) = c;
  k.topRightCorner(n, n) = kI * id;
  k.bottomLeftCorner(n, n) = -kI * b2;
  k.bottomRightCorner(n, n) = c;

  auto h0 = OneParticleSpace::make(site_labels(n, "x"));
  auto hkg = OneParticleSpace::make(two_component_labels(n, "psi:x", "pi:x"));
  KleinGordonSystem sys{OperatorMatrix(hkg, std::move(k)),
                        OperatorMatrix(hkg, kg_grading(n).matrix()),
                        OperatorMatrix(h0, std::move(b2)), OperatorMatrix(h0, c)};
  return sys;
}

SpectralSplit spectral_split(const OperatorMatrix& h, double zero_tol) {
  if (!h.is_hermitian()) throw InvalidArgument("spectral_split: operator is not hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h.matrix() + h.matrix().adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("spectral_split: eigensolver failed");
  const Index n = h.dim();
  const RVector& ev = es.eigenvalues();
  Index neg = 0;
  while (neg < n && ev(neg) < -zero_tol) ++neg;
  const CMatrix& v = es.eigenvectors();
  CMatrix pm = v.leftCols(neg) * v.leftCols(neg).adjoint();
  pm = 0.5 * (pm + pm.adjoint()).eval();
  CMatrix pp = CMatrix::Identity(n, n) - pm;
  return SpectralSplit{ev, v, OperatorMatrix(h.space(), std::move(pm)),
                       OperatorMatrix(h.space(), std::move(pp)), neg};
}

double hs_distance(const OperatorMatrix& p1, const OperatorMatrix& p2) {
  require_same_dim(p1, p2, "hs_distance");
  if (!p1.is_projection() || !p2.is_projection())
    throw InvalidArgument("hs_distance: inputs must be orthogonal projections");
  const CMatrix d = p1.matrix() - p2.matrix();
  return std::sqrt(std::max(0.0, (d.adjoint() * d).trace().real()));
}

bool is_j_selfadjoint(const OperatorMatrix& k, const OperatorMatrix& j, double tol) {
  require_same_dim(k, j, "is_j_selfadjoint");
  if (!j.is_grading()) throw InvalidArgument("is_j_selfadjoint: J is not a grading");
  const CMatrix& jm = j.matrix();
  return (k.matrix().adjoint() - jm * k.matrix() * jm).norm() <= tol;
}

bool is_j_unitary(const OperatorMatrix& u, const OperatorMatrix& j, double tol) {
  require_same_dim(u, j, "is_j_unitary");
  if (!j.is_grading()) throw InvalidArgument("is_j_unitary: J is not a grading");
  Eigen::FullPivLU<CMatrix> lu(u.matrix());
  if (!lu.isInvertible()) throw InvalidArgument("is_j_unitary: U is singular");
  const CMatrix& jm = j.matrix();
  return (lu.inverse() - jm * u.matrix().adjoint() * jm).norm() <= tol;
}

BogoliubovResult bogoliubov_transform(const OperatorMatrix& b2) {
  if (!b2.is_hermitian()) throw InvalidArgument("bogoliubov_transform: B2 must be hermitian");
  const Index n = b2.dim();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(b2.matrix(), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0))
    throw InvalidArgument("bogoliubov_transform: B2 must be strictly positive");

  const CMatrix b = linalg::sqrtm_positive(b2.matrix());
  const CMatrix b_half = linalg::sqrtm_positive(b);
  const CMatrix b_mhalf = linalg::inv_sqrtm_positive(b);
  const CMatrix id = CMatrix::Identity(n, n);
  const double r = 1.0 / std::sqrt(2.0);

  CMatrix t(2 * n, 2 * n);
  t.topLeftCorner(n, n) = r * b_half;
  t.topRightCorner(n, n) = (r * kI) * b_mhalf;
  t.bottomLeftCorner(n, n) = r * b_half;
  t.bottomRightCorner(n, n) = (-r * kI) * b_mhalf;

  CMatrix f = CMatrix::Zero(2 * n, 2 * n);
  f.topLeftCorner(n, n) = id;
  f.bottomRightCorner(n, n) = -id;

  CMatrix k = CMatrix::Zero(2 * n, 2 * n);
  k.topRightCorner(n, n) = kI * id;
  k.bottomLeftCorner(n, n) = -kI * b2.matrix();

  const CMatrix jm = kg_grading(n).matrix();
  Eigen::PartialPivLU<CMatrix> lu(t);
  const CMatrix t_inv = lu.inverse();
  CMatrix k_hat = t * k * t_inv;

  CMatrix target = CMatrix::Zero(2 * n, 2 * n);
  target.topLeftCorner(n, n) = b;
  target.bottomRightCorner(n, n) = -b;
  const double diag_res = (k_hat - target).norm();

  const CMatrix jtf = jm * t.adjoint() * f;
  const double res_plus = (t_inv - jtf).norm();
  const double res_minus = (t_inv + jtf).norm();
  const int sigma = res_plus <= res_minus ? 1 : -1;
  const double inv_res = std::min(res_plus, res_minus);

  if (diag_res > kBogoliubovTolerance || inv_res > kBogoliubovTolerance)
    throw NumericalError("bogoliubov_transform: verification residual above tolerance (diag=" +
                         std::to_string(diag_res) + ", inverse=" + std::to_string(inv_res) + ")");

  auto hkg = OneParticleSpace::make(2 * n);
  return BogoliubovResult{OperatorMatrix(hkg, std::move(t)),
                          OperatorMatrix(hkg, std::move(f)),
                          OperatorMatrix(hkg, std::move(k)),
                          OperatorMatrix(hkg, std::move(k_hat)),
                          OperatorMatrix(b),
                          sigma,
                          diag_res,
                          inv_res};
}

}  // namespace fockforge
