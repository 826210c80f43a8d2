#include "fockforge/cli/suites.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <optional>

#include "fockforge/linalg.hpp"
#include "fockforge/physics.hpp"
#include "fockforge/random.hpp"
#include "fockforge/secondquant.hpp"

namespace fockforge::cli {
namespace {

constexpr int kRandomCases = 5;
constexpr int kWedgeCases = 20;
constexpr Index kDenseFockLimit = 1024;
constexpr Index kMaxTraceFermions = 14;

std::uint64_t stream_of(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const LatticeConfig& require_model(const RunConfig& cfg, const std::string& check) {
  if (!cfg.model) throw ConfigError("check '" + check + "' needs a model section");
  return *cfg.model;
}

Index one_particle_dim(const LatticeConfig& m) {
  return m.model == LatticeModel::schrodinger1d ? m.sites : 2 * m.sites;
}

// Sparse Frobenius norm: an upper bound on the operator norm.
double frobenius(const FockOperator& op) { return op.matrix().norm(); }

ResultRecord skipped(std::string reason) {
  ResultRecord r;
  r.status = Status::skipped;
  r.reason = std::move(reason);
  return r;
}

// Number-conserving residuals on bosons are exact on the sectors N <= cap.
std::vector<Index> complete_sectors(const FockSpace& fock) {
  std::vector<Index> states;
  for (Index s = 0; s < fock.dim(); ++s)
    if (fock.is_fermion() || fock.particle_number(s) <= fock.cap()) states.push_back(s);
  return states;
}

double conserving_norm(const FockOperator& op) {
  if (op.space().is_fermion()) return operator_norm(op);
  const auto states = complete_sectors(op.space());
  return linalg::operator_norm(compress(op, states));
}

FockSpace statistics_space(const RunConfig& cfg, Index modes) {
  return make_fock(modes, cfg.statistics, cfg.boson_cap);
}

OperatorMatrix sea_projection(const RunConfig& cfg, CounterRng& rng, Index n) {
  const auto& m = *cfg.model;
  if (m.model == LatticeModel::dirac1d) return spectral_split(build_dirac_1d(m)).p_minus;
  return OperatorMatrix(random_projection(rng, n, n / 2));
}

LatticeConfig as_klein_gordon(const LatticeConfig& m) {
  LatticeConfig kg = m;
  kg.model = LatticeModel::kleingordon1d;
  return kg;
}

ResultRecord check_car(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "car"));
  const auto fock = FockSpace::fermion(n);
  const auto id = FockOperator::identity(fock);
  double modes = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto ci = annihilation_mode(fock, i);
    for (Index j = 0; j < n; ++j) {
      const auto cj = annihilation_mode(fock, j);
      auto mixed = anticommutator(ci, creation_mode(fock, j));
      if (i == j) mixed -= id;
      modes = std::max({modes, frobenius(mixed), frobenius(anticommutator(ci, cj))});
    }
  }
  double smeared = 0.0;
  double pauli = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const CVector f = random_vector(rng, n);
    const CVector g = random_vector(rng, n);
    const auto pf = field_op(fock, f);
    const auto pg = field_op(fock, g);
    const auto rel = anticommutator(pf.annihilator, pg.creator) - f.dot(g) * id;
    smeared = std::max({smeared, frobenius(rel), frobenius(anticommutator(pf.creator, pg.creator))});
    pauli = std::max(pauli, frobenius(pf.creator * pf.creator));
  }
  ResultRecord r;
  r.residuals = {{"mode_relations", modes}, {"smeared_relations", smeared}, {"pauli", pauli}};
  r.details["modes"] = n;
  return r;
}

ResultRecord check_ccr(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "ccr"));
  const auto fock = FockSpace::boson(n, cfg.boson_cap);
  const auto id = FockOperator::identity(fock);
  const auto prot = protected_states(fock, cfg.boson_cap - 1);
  const auto on_protected = [&](const FockOperator& op) { return restrict_columns(op, prot).norm(); };
  double modes = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto ai = annihilation_mode(fock, i);
    for (Index j = 0; j < n; ++j) {
      auto mixed = commutator(ai, creation_mode(fock, j));
      if (i == j) mixed -= id;
      modes = std::max({modes, on_protected(mixed),
                        frobenius(commutator(ai, annihilation_mode(fock, j)))});
    }
  }
  double smeared = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const CVector f = random_vector(rng, n);
    const CVector g = random_vector(rng, n);
    const auto rel =
        commutator(field_op(fock, f).annihilator, field_op(fock, g).creator) - f.dot(g) * id;
    smeared = std::max(smeared, on_protected(rel));
  }
  ResultRecord r;
  r.residuals = {{"mode_relations", modes}, {"smeared_relations", smeared}};
  r.details["modes"] = n;
  r.details["cap"] = cfg.boson_cap;
  r.details["protected_states"] = prot.size();
  return r;
}

ResultRecord check_wedge(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "wedge"));
  const auto fock = statistics_space(cfg, n);
  const Index max_n = fock.is_fermion() ? std::min<Index>(4, n) : std::min<Index>(4, fock.cap());
  double worst = 0.0;
  for (int k = 0; k < kWedgeCases; ++k) {
    const Index count = rng.uniform_index(1, max_n);
    std::vector<CVector> fs;
    std::vector<CVector> gs;
    for (Index j = 0; j < count; ++j) {
      fs.push_back(random_vector(rng, n));
      gs.push_back(random_vector(rng, n));
    }
    const Complex built = wedge_state(fock, fs).inner(wedge_state(fock, gs));
    const Complex oracle = wedge_inner_oracle(fs, gs, fock.statistics());
    worst = std::max(worst, std::abs(built - oracle));
  }
  ResultRecord r;
  r.residuals = {{"inner_product", worst}};
  r.details["cases"] = kWedgeCases;
  return r;
}

ResultRecord check_qq(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "qq"));
  const auto fock = statistics_space(cfg, n);
  double worst = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix a(random_hermitian(rng, n));
    const OperatorMatrix b(random_hermitian(rng, n));
    const OperatorMatrix ab(linalg::commutator(a.matrix(), b.matrix()));
    worst = std::max(worst, conserving_norm(commutator(q_of(a, fock), q_of(b, fock)) - q_of(ab, fock)));
  }
  ResultRecord r;
  r.residuals = {{"lie_bracket", worst}};
  return r;
}

ResultRecord check_group(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "group"));
  const auto fock = statistics_space(cfg, n);
  const auto id = FockOperator::identity(fock);
  double product = 0.0;
  double inverse = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix u(random_unitary(rng, n));
    const OperatorMatrix v(random_unitary(rng, n));
    const OperatorMatrix uv(CMatrix(u.matrix() * v.matrix()));
    product = std::max(product, conserving_norm(Q_of(u, fock) * Q_of(v, fock) - Q_of(uv, fock)));
    inverse = std::max(inverse, conserving_norm(Q_of(u, fock) * Q_of(u.adjoint(), fock) - id));
  }
  ResultRecord r;
  r.residuals = {{"product", product}, {"inverse", inverse}};
  return r;
}

ResultRecord check_exp(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "exp"));
  const auto fock = statistics_space(cfg, n);
  double worst = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix a(random_hermitian(rng, n));
    const OperatorMatrix u(linalg::expm_hermitian(a.matrix(), kI));
    const CMatrix lifted = linalg::expm_hermitian(q_of(a, fock).dense(), kI);
    const FockOperator diff(fock, CMatrix(Q_of(u, fock).dense() - lifted).sparseView());
    worst = std::max(worst, conserving_norm(diff));
  }
  ResultRecord r;
  r.residuals = {{"exponential", worst}};
  return r;
}

ResultRecord check_anomaly(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "anomaly"));
  const auto pm = sea_projection(cfg, rng, n);
  const QuasiFreeRep rep(FockSpace::fermion(n), pm);
  double worst = 0.0;
  double real_part = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix a(random_hermitian(rng, n));
    const OperatorMatrix b(random_hermitian(rng, n));
    worst = std::max(worst, commutator_anomaly_check(a, b, rep));
    real_part = std::max(real_part, std::abs(schwinger_term(a, b, pm).value.real()));
  }
  ResultRecord r;
  r.residuals = {{"anomaly_identity", worst}, {"schwinger_real_part", real_part}};
  return r;
}

ResultRecord check_cocycle(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "cocycle"));
  const auto pm = sea_projection(cfg, rng, n);
  double worst = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix a(random_hermitian(rng, n));
    const OperatorMatrix b(random_hermitian(rng, n));
    const OperatorMatrix c(random_hermitian(rng, n));
    worst = std::max(worst, cocycle_check(a, b, c, pm));
  }
  ResultRecord r;
  r.residuals = {{"cocycle", worst}};
  return r;
}

ResultRecord check_jself(const RunConfig& cfg, CounterRng& rng) {
  const auto& m = require_model(cfg, "jself");
  if (!(m.mass > 0.0)) return skipped("Klein-Gordon form needs m > 0");
  const auto kg = build_klein_gordon_1d(as_klein_gordon(m));
  const CMatrix& j = kg.j.matrix();
  const CMatrix& k = kg.k.matrix();
  const double one_particle = (k.adjoint() - j * k * j).norm();
  const auto rep = kg_rep_zero(kg.j, FockSpace::boson(kg.k.dim(), cfg.boson_cap));
  const OperatorMatrix a(random_matrix(rng, kg.k.dim(), kg.k.dim()));
  const double adjoint = rep.q_adjoint_residual(a);
  const auto qk = rep.q(kg.k);
  const double hermitian = frobenius(qk.adjoint() - qk);
  ResultRecord r;
  r.residuals = {{"k_j_selfadjoint", one_particle},
                 {"q_adjoint_identity", adjoint},
                 {"q_of_k_hermitian", hermitian}};
  return r;
}

ResultRecord check_bogoliubov(const RunConfig& cfg, CounterRng&) {
  const auto& m = require_model(cfg, "bogoliubov");
  if (!(m.mass > 0.0)) return skipped("Klein-Gordon form needs m > 0");
  const auto kg = build_klein_gordon_1d(as_klein_gordon(m));
  const auto bt = bogoliubov_transform(kg.b2);
  const auto qk = bogoliubov_normal_ordered_q(bt.k, bt.t, bt.f,
                                              FockSpace::boson(bt.k.dim(), cfg.boson_cap));
  const SparseOp& mat = qk.matrix();
  RVector diag = RVector::Zero(mat.rows());
  double offdiag = 0.0;
  for (Index c = 0; c < mat.outerSize(); ++c)
    for (SparseOp::InnerIterator it(mat, c); it; ++it) {
      if (it.row() == c)
        diag(c) = it.value().real();
      else
        offdiag += std::norm(it.value());
    }
  offdiag = std::sqrt(offdiag);
  ResultRecord r;
  r.residuals = {{"diagonalization", bt.diagonalization_residual},
                 {"inverse_identity", bt.inverse_residual},
                 {"qhat_offdiagonal", offdiag},
                 {"qhat_vacuum", std::abs(qk.vacuum_expectation())},
                 {"qhat_negative_part", std::max(0.0, -diag.minCoeff())}};
  r.details["sigma"] = bt.sigma;
  return r;
}

ResultRecord check_dirac_sea(const RunConfig& cfg, CounterRng&) {
  const auto& m = require_model(cfg, "dirac_sea");
  if (m.model != LatticeModel::dirac1d) return skipped("needs a dirac1d model");
  const auto d = build_dirac_1d(m);
  const auto fock = FockSpace::fermion(d.dim());
  if (fock.dim() > kDenseFockLimit) return skipped("Fock space too large for a dense eigensolve");
  const auto plain = stability_report(d);
  const auto split = spectral_split(d);
  const auto qd = normal_ordered_q(d, QuasiFreeRep(fock, split.p_minus));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(qd.dense());
  const double min_eig = es.eigenvalues()(0);
  const double overlap = std::norm(es.eigenvectors()(0, 0));
  const CVector omega = vacuum(fock).coeffs;
  ResultRecord r;
  r.residuals = {{"min_eigenvalue", std::abs(min_eig)},
                 {"vacuum_eigen_residual", (qd.matrix() * omega).norm()},
                 {"vacuum_overlap_defect", 1.0 - overlap}};
  r.details["plain_lift_min_eig"] = plain.min_eig;
  r.details["plain_lift_requires_quasifree"] = plain.requires_quasifree;
  if (!plain.requires_quasifree) r.residuals.emplace_back("plain_lift_flagged", 1.0);
  return r;
}

ResultRecord check_free_energy(const RunConfig& cfg, CounterRng& rng) {
  ThermoParams p;
  p.statistics = cfg.statistics;
  OperatorMatrix h = OperatorMatrix::zero(1);
  if (cfg.thermo && cfg.thermo->random_modes) {
    h = OperatorMatrix(random_hermitian(rng, *cfg.thermo->random_modes));
  } else {
    h = model_hamiltonian(require_model(cfg, "free_energy"));
    if (cfg.model->model == LatticeModel::dirac1d)
      h = OperatorMatrix(linalg::hermitian_function(h.matrix(), [](double e) { return Complex(std::abs(e)); }));
  }
  if (cfg.thermo) {
    p.beta = cfg.thermo->beta;
    p.mu = cfg.thermo->mu;
  } else if (cfg.statistics == Statistics::boson) {
    p.mu = stability_report(h).min_eig - 1.0;
  }
  std::optional<FockSpace> fock;
  if (cfg.statistics == Statistics::boson || h.dim() <= kMaxTraceFermions) {
    try {
      fock = make_fock(h.dim(), cfg.statistics, cfg.boson_cap);
    } catch (const BudgetExceeded&) {
    }
  }
  ResultRecord r;
  try {
    const auto report = free_energy(h, p, fock);
    r.details["value_formula"] = report.value_formula;
    if (!report.value_trace) {
      r.reason = "Fock trace infeasible; formula only";
      return r;
    }
    r.residuals = {{"discrepancy", *report.discrepancy}};
    r.details["value_trace"] = *report.value_trace;
    if (report.truncation_bound) {
      r.details["truncation_bound"] = *report.truncation_bound;
      r.details["sector_tail_bound"] = *report.sector_tail_bound;
    }
  } catch (const Divergence& e) {
    r.status = Status::fail;
    r.reason = e.what();
  }
  return r;
}

ResultRecord check_dispersion(const RunConfig& cfg, CounterRng&) {
  const auto& m = require_model(cfg, "dispersion");
  for (double x : m.vec_a)
    if (x != 0.0) return skipped("closed form needs A = 0");
  for (double x : m.phi)
    if (x != m.phi.front()) return skipped("closed form needs a constant phi");
  const RVector numeric = model_spectrum(m);
  const RVector exact = analytic_free_spectrum(m).array() - m.charge * m.phi.front();
  ResultRecord r;
  r.residuals = {{"max_deviation", (numeric - exact).cwiseAbs().maxCoeff()}};
  return r;
}

ResultRecord check_projective_phase(const RunConfig& cfg, CounterRng& rng) {
  const Index n = one_particle_dim(require_model(cfg, "projective_phase"));
  const auto pm = sea_projection(cfg, rng, n);
  const QuasiFreeRep rep(FockSpace::fermion(n), pm);
  double proportional = 0.0;
  double modulus = 0.0;
  double reordered = 0.0;
  double one_particle = 0.0;
  for (int k = 0; k < kRandomCases; ++k) {
    const OperatorMatrix a(random_hermitian(rng, n, 0.3));
    const OperatorMatrix b(random_hermitian(rng, n, 0.3));
    const auto ph = projective_phase(a, b, rep);
    proportional = std::max(proportional, ph.proportionality_residual);
    modulus = std::max(modulus, std::abs(std::abs(ph.chi) - 1.0));
    reordered = std::max(reordered, std::abs(ph.chi - ph.chi_reordered));
    one_particle = std::max(one_particle, std::abs(ph.chi - ph.chi_one_particle));
  }
  ResultRecord r;
  r.residuals = {{"proportionality", proportional},
                 {"unit_modulus", modulus},
                 {"reordered_route", reordered},
                 {"one_particle_route", one_particle}};
  return r;
}

using Check = std::function<ResultRecord(const RunConfig&, CounterRng&)>;

const std::map<std::string, Check>& checks() {
  static const std::map<std::string, Check> table = {
      {"car", check_car},
      {"ccr", check_ccr},
      {"wedge", check_wedge},
      {"qq", check_qq},
      {"group", check_group},
      {"exp", check_exp},
      {"anomaly", check_anomaly},
      {"cocycle", check_cocycle},
      {"jself", check_jself},
      {"bogoliubov", check_bogoliubov},
      {"dirac_sea", check_dirac_sea},
      {"free_energy", check_free_energy},
      {"dispersion", check_dispersion},
      {"projective_phase", check_projective_phase},
  };
  return table;
}

}  // namespace

OperatorMatrix model_hamiltonian(const LatticeConfig& cfg) {
  switch (cfg.model) {
    case LatticeModel::schrodinger1d:
      return build_schrodinger_1d(cfg);
    case LatticeModel::dirac1d:
      return build_dirac_1d(cfg);
    case LatticeModel::kleingordon1d:
      return OperatorMatrix(linalg::sqrtm_positive(build_klein_gordon_1d(cfg).b2.matrix()));
  }
  throw InvalidArgument("model_hamiltonian: unknown model");
}

ResultRecord run_suite(const std::string& name, const RunConfig& cfg) {
  const auto it = checks().find(name);
  if (it == checks().end()) throw ConfigError("unknown check '" + name + "'");
  CounterRng rng(cfg.seed, stream_of(name));
  const auto start = std::chrono::steady_clock::now();
  ResultRecord r = it->second(cfg, rng);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  r.name = name;
  r.tolerance = cfg.tolerances.at(name);
  if (name == "free_energy" && r.details.contains("truncation_bound"))
    r.tolerance += r.details["truncation_bound"].get<double>();
  if (r.status == Status::pass) r.judge();
  r.wall_time_s = elapsed.count();
  r.inputs_digest = inputs_digest(cfg);
  return r;
}

std::vector<ResultRecord> run_suites(const RunConfig& cfg, int jobs) {
  const auto count = static_cast<Index>(cfg.suite.size());
  std::vector<ResultRecord> records(cfg.suite.size());
  std::vector<std::exception_ptr> errors(cfg.suite.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs)) if (jobs > 1)
  for (Index i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      records[k] = run_suite(cfg.suite[k], cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

}  // namespace fockforge::cli
