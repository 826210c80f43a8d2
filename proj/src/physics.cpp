#include "fockforge/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockforge/kernels.hpp"

namespace fockforge {
namespace {

RVector hermitian_eigenvalues(const CMatrix& h) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  return es.eigenvalues();
}

void require_hermitian(const OperatorMatrix& h, const char* what) {
  if (!h.is_hermitian()) throw InvalidArgument(std::string(what) + ": H must be hermitian");
}

// log(sum exp(x_i)) over all pushed values.
class LogSumExp {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

void ThermoParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw InvalidArgument("thermo: beta must be positive and finite");
  if (!std::isfinite(mu)) throw InvalidArgument("thermo: mu must be finite");
}

double free_energy_formula(const OperatorMatrix& h, const ThermoParams& p) {
  p.validate();
  require_hermitian(h, "free_energy_formula");
  const RVector energies = hermitian_eigenvalues(h.matrix());
  double total = 0.0;
  for (Index i = 0; i < energies.size(); ++i) {
    const double x = p.beta * (energies(i) - p.mu);
    if (p.statistics == Statistics::fermion) {
      // log(1 + e^{-x}) without overflow.
      const double l = x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
      total -= l / p.beta;
    } else {
      if (!(x > 0.0)) throw Divergence("free energy diverges: mu >= min spec(H)");
      total += std::log(-std::expm1(-x)) / p.beta;
    }
  }
  return total;
}

FockTrace free_energy_trace(const OperatorMatrix& h, const ThermoParams& p, const FockSpace& fock) {
  p.validate();
  require_hermitian(h, "free_energy_trace");
  if (h.dim() != fock.modes())
    throw DimensionMismatch("free_energy_trace: H dimension differs from mode count");
  if (fock.statistics() != p.statistics)
    throw InvalidArgument("free_energy_trace: statistics of Fock space and parameters differ");

  const Index n = h.dim();
  const CMatrix shifted = h.matrix() - p.mu * CMatrix::Identity(n, n);
  const SparseOp generator = kernels::bilinear_parallel(fock, shifted);

  const int max_sector = fock.is_fermion() ? static_cast<int>(n) : fock.cap();
  std::vector<std::vector<Index>> sectors(static_cast<std::size_t>(max_sector + 1));
  std::vector<Index> position(static_cast<std::size_t>(fock.dim()), -1);
  for (Index s = 0; s < fock.dim(); ++s) {
    const int count = fock.particle_number(s);
    if (count > max_sector) continue;
    auto& sector = sectors[static_cast<std::size_t>(count)];
    position[static_cast<std::size_t>(s)] = static_cast<Index>(sector.size());
    sector.push_back(s);
  }

  LogSumExp log_z;
  for (const auto& sector : sectors) {
    const auto size = static_cast<Index>(sector.size());
    CMatrix block = CMatrix::Zero(size, size);
    for (Index c = 0; c < size; ++c) {
      for (SparseOp::InnerIterator it(generator, sector[static_cast<std::size_t>(c)]); it; ++it) {
        const Index r = position[static_cast<std::size_t>(it.row())];
        if (r < 0) throw NumericalError("free_energy_trace: generator leaves its sector");
        block(r, c) = it.value();
      }
    }
    const RVector levels = hermitian_eigenvalues(block);
    for (Index i = 0; i < levels.size(); ++i) log_z.add(-p.beta * levels(i));
  }

  FockTrace out;
  out.value = -log_z.value() / p.beta;
  out.sectors = max_sector + 1;
  if (!fock.is_fermion()) {
    const RVector energies = hermitian_eigenvalues(h.matrix());
    const double gap = energies(0) - p.mu;
    if (!(gap > 0.0)) throw Divergence("free energy diverges: mu >= min spec(H)");
    double geometric = 0.0;
    for (Index i = 0; i < energies.size(); ++i) {
      const double x = p.beta * (energies(i) - p.mu);
      geometric += std::exp(-x * (fock.cap() + 1)) / (-std::expm1(-x)) / p.beta;
    }
    out.truncation_bound = geometric;
    // Omitted sectors: sum_{N > cap} C(N + n - 1, n - 1) x^N with x the largest
    // Boltzmann factor, relative to the kept trace.
    const double log_x = -p.beta * gap;
    LogSumExp log_tail;
    for (int count = fock.cap() + 1;; ++count) {
      const double term =
          log_binomial(count + static_cast<double>(n) - 1.0, static_cast<double>(n) - 1.0) +
          count * log_x;
      log_tail.add(term);
      if (term < log_tail.value() - 40.0 || count > fock.cap() + 100000) break;
    }
    out.sector_tail_bound = std::log1p(std::exp(log_tail.value() - log_z.value())) / p.beta;
  }
  return out;
}

FreeEnergyReport free_energy(const OperatorMatrix& h, const ThermoParams& p,
                             const std::optional<FockSpace>& fock) {
  FreeEnergyReport report;
  report.value_formula = free_energy_formula(h, p);
  if (fock) {
    const FockTrace trace = free_energy_trace(h, p, *fock);
    report.value_trace = trace.value;
    report.discrepancy = std::abs(report.value_formula - trace.value);
    report.truncation_bound = trace.truncation_bound;
    report.sector_tail_bound = trace.sector_tail_bound;
  }
  return report;
}

StabilityReport stability_report(const OperatorMatrix& h, double zero_tol) {
  require_hermitian(h, "stability_report");
  const RVector e = hermitian_eigenvalues(h.matrix());
  StabilityReport r;
  r.min_eig = e(0);
  r.max_eig = e(e.size() - 1);
  r.requires_quasifree = r.min_eig < -zero_tol;
  r.bounded_below = !r.requires_quasifree;
  return r;
}

StabilityReport stability_report(const FockOperator& h, double zero_tol) {
  const RVector e = hermitian_eigenvalues(h.dense());
  StabilityReport r;
  r.min_eig = e(0);
  r.max_eig = e(e.size() - 1);
  r.bounded_below = r.min_eig >= -zero_tol;
  r.requires_quasifree = false;
  return r;
}

double schatten_norm(const OperatorMatrix& a, int p) {
  if (p < 2 || p % 2 != 0) throw InvalidArgument("schatten_norm: p must be an even integer >= 2");
  Eigen::JacobiSVD<CMatrix> svd(a.matrix());
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  const double top = s(0);
  double sum = 0.0;
  for (Index i = 0; i < s.size(); ++i) sum += std::pow(s(i) / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double lattice_dirac_energy(double p, double spacing, double mass) {
  const double s = std::sin(p * spacing) / spacing;
  return std::sqrt(s * s + mass * mass);
}

double continuum_dirac_energy(double p, double mass) { return std::sqrt(p * p + mass * mass); }

RVector analytic_free_spectrum(const LatticeConfig& cfg) {
  cfg.validate();
  const Index l = cfg.sites;
  const double a = cfg.spacing;
  std::vector<double> values;
  for (Index k = 0; k < l; ++k) {
    const double s = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) /
                              static_cast<double>(l)) / a;
    switch (cfg.model) {
      case LatticeModel::schrodinger1d:
        values.push_back(s * s / (2.0 * cfg.mass));
        break;
      case LatticeModel::dirac1d:
      case LatticeModel::kleingordon1d: {
        const double w = std::sqrt(s * s + cfg.mass * cfg.mass);
        values.push_back(w);
        values.push_back(-w);
        break;
      }
    }
  }
  std::sort(values.begin(), values.end());
  return Eigen::Map<RVector>(values.data(), static_cast<Index>(values.size()));
}

RVector model_spectrum(const LatticeConfig& cfg) {
  cfg.validate();
  switch (cfg.model) {
    case LatticeModel::schrodinger1d:
      return hermitian_eigenvalues(build_schrodinger_1d(cfg).matrix());
    case LatticeModel::dirac1d:
      return hermitian_eigenvalues(build_dirac_1d(cfg).matrix());
    case LatticeModel::kleingordon1d: {
      const auto kg = build_klein_gordon_1d(cfg);
      Eigen::ComplexEigenSolver<CMatrix> es(kg.k.matrix(), false);
      if (es.info() != Eigen::Success) throw NumericalError("model_spectrum: eigensolver failed");
      const CVector ev = es.eigenvalues();
      double imag = 0.0;
      std::vector<double> values;
      for (Index i = 0; i < ev.size(); ++i) {
        values.push_back(ev(i).real());
        imag = std::max(imag, std::abs(ev(i).imag()));
      }
      if (imag > 1e-8 * std::max(1.0, kg.k.matrix().norm()))
        throw NumericalError("model_spectrum: Klein-Gordon spectrum is not real");
      std::sort(values.begin(), values.end());
      return Eigen::Map<RVector>(values.data(), static_cast<Index>(values.size()));
    }
  }
  throw InvalidArgument("model_spectrum: unknown model");
}

EquivalenceTable equivalence_sweep(const std::vector<LatticeConfig>& family, double zero_tol) {
  const auto count = static_cast<Index>(family.size());
  EquivalenceTable table;
  table.distance = Eigen::MatrixXd::Constant(count, count, std::numeric_limits<double>::quiet_NaN());
  table.refused.assign(family.size(), false);
  table.reasons.assign(family.size(), "");
  if (family.empty()) return table;

  std::vector<std::optional<OperatorMatrix>> projections(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& cfg = family[i];
    if (cfg.model != LatticeModel::dirac1d)
      throw InvalidArgument("equivalence_sweep: every config must be dirac1d");
    if (cfg.sites != family[0].sites || cfg.spacing != family[0].spacing)
      throw DimensionMismatch("equivalence_sweep: configs must share sites and spacing");
    const SpectralSplit split = spectral_split(build_dirac_1d(cfg), zero_tol);
    const double gap = split.eigenvalues.cwiseAbs().minCoeff();
    if (gap <= zero_tol) {
      table.refused[i] = true;
      table.reasons[i] = "gap closure: eigenvalue within zero_tol of 0";
      continue;
    }
    projections[i] = split.p_minus;
  }

#pragma omp parallel for schedule(dynamic)
  for (Index i = 0; i < count; ++i) {
    const auto& pi = projections[static_cast<std::size_t>(i)];
    if (!pi) continue;
    table.distance(i, i) = 0.0;
    for (Index j = i + 1; j < count; ++j) {
      const auto& pj = projections[static_cast<std::size_t>(j)];
      if (!pj) continue;
      const double d = hs_distance(*pi, *pj);
      table.distance(i, j) = d;
      table.distance(j, i) = d;
    }
  }
  return table;
}

}  // namespace fockforge
