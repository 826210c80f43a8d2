#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockforge/fock.hpp"
#include "fockforge/oneparticle.hpp"

namespace fockforge {

struct ThermoParams {
  double beta = 1.0;
  double mu = 0.0;
  Statistics statistics = Statistics::fermion;

  // beta > 0 and finite mu.
  void validate() const;
};

// Thrown when a boson chemical potential is not below the spectrum.
class Divergence : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Sum over eigenvalues E of H of
//   fermions: -1/beta log(1 + e^{-beta (E - mu)})
//   bosons:   +1/beta log(1 - e^{-beta (E - mu)})
// Throws Divergence for bosons with mu >= min spec(H).
double free_energy_formula(const OperatorMatrix& h, const ThermoParams& p);

struct FockTrace {
  double value = 0.0;
  // Bosons: sum over modes of e^{-beta (E - mu)(cap + 1)} / (beta (1 - e^{-beta (E - mu)})).
  std::optional<double> truncation_bound;
  // Bosons: bound on the weight of the omitted sectors N > cap, relative to
  // the kept trace, divided by beta.
  std::optional<double> sector_tail_bound;
  Index sectors = 0;
};

// -1/beta log tr exp(-beta (q(H) - mu q(1))) on the Fock space. q(H) is
// assembled in the basis H is given in and diagonalized one particle-number
// sector at a time; the one-particle eigenbasis is never used for the value.
// Boson traces keep the sectors N <= cap, where the truncated q(H) is exact.
FockTrace free_energy_trace(const OperatorMatrix& h, const ThermoParams& p, const FockSpace& fock);

struct FreeEnergyReport {
  double value_formula = 0.0;
  std::optional<double> value_trace;
  std::optional<double> discrepancy;
  std::optional<double> truncation_bound;
  std::optional<double> sector_tail_bound;
};

// Both routes; the trace is skipped when fock is empty.
FreeEnergyReport free_energy(const OperatorMatrix& h, const ThermoParams& p,
                             const std::optional<FockSpace>& fock);

struct StabilityReport {
  bool bounded_below = true;
  double min_eig = 0.0;
  double max_eig = 0.0;
  // Negative one-particle energies: the plain Fock lift is not bounded below
  // and a quasi-free (Dirac sea) representation is needed.
  bool requires_quasifree = false;
};

// One-particle operator: q(H) is bounded below on the Fock space iff H >= 0.
StabilityReport stability_report(const OperatorMatrix& h, double zero_tol = kDefaultZeroTol);
// Fock operator: bounded below by the vacuum energy 0, i.e. min eig >= -zero_tol.
StabilityReport stability_report(const FockOperator& h, double zero_tol = kDefaultZeroTol);

// (tr (a* a)^{p/2})^{1/p} for even p >= 2.
double schatten_norm(const OperatorMatrix& a, int p);

// Free lattice Dirac energy sqrt(sin^2(p a) / a^2 + m^2) and its continuum limit.
double lattice_dirac_energy(double p, double spacing, double mass);
double continuum_dirac_energy(double p, double mass);

// Analytic spectrum of the free one-particle operator of cfg (phi = A = 0),
// ascending. Klein-Gordon returns the eigenvalues of K.
RVector analytic_free_spectrum(const LatticeConfig& cfg);

// Numerical spectrum of the one-particle operator of cfg, ascending.
RVector model_spectrum(const LatticeConfig& cfg);

struct EquivalenceTable {
  // distance(i, j) = ||P-(D_i) - P-(D_j)||_2; NaN where a config was refused.
  Eigen::MatrixXd distance;
  std::vector<bool> refused;
  std::vector<std::string> reasons;
};

// Pairwise Hilbert-Schmidt distances of the negative spectral projections of
// a family of lattice Dirac operators sharing (L, a). A config whose Dirac
// operator has an eigenvalue within zero_tol of 0 is refused.
EquivalenceTable equivalence_sweep(const std::vector<LatticeConfig>& family,
                                   double zero_tol = kDefaultZeroTol);

}  // namespace fockforge
