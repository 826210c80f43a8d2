#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fockforge/types.hpp"

// Finite one-particle Hilbert spaces and the operators living on them:
// lattice Schrödinger, Dirac and Klein-Gordon generators in static external
// fields, spectral splittings, gradings and the Bogoliubov transform.
//
// Units: hbar = c = 1. The inner product is (f, g) = sum_i conj(f_i) g_i.
namespace fockforge {

struct OneParticleSpace {
  Index dim = 0;
  std::vector<std::string> basis_labels;

  // Labels "0", "1", ..., "dim-1".
  static std::shared_ptr<const OneParticleSpace> make(Index dim);
  static std::shared_ptr<const OneParticleSpace> make(std::vector<std::string> labels);
};

using SpaceRef = std::shared_ptr<const OneParticleSpace>;

// Cached structural properties, each checked to kFlagTolerance (relative to
// max(1, ||M||_F)) at construction.
struct StructureFlags {
  bool hermitian = false;
  bool unitary = false;
  bool projection = false;
  bool grading = false;
};

class OperatorMatrix {
 public:
  static constexpr double kFlagTolerance = 1e-12;

  // On an anonymous space of matching dimension.
  explicit OperatorMatrix(CMatrix entries);
  OperatorMatrix(SpaceRef space, CMatrix entries);

  static OperatorMatrix identity(Index dim);
  static OperatorMatrix zero(Index dim);

  const CMatrix& matrix() const { return entries_; }
  const SpaceRef& space() const { return space_; }
  Index dim() const { return entries_.rows(); }
  const StructureFlags& flags() const { return flags_; }

  bool is_hermitian() const { return flags_.hermitian; }
  bool is_unitary() const { return flags_.unitary; }
  bool is_projection() const { return flags_.projection; }
  bool is_grading() const { return flags_.grading; }

  OperatorMatrix adjoint() const;

 private:
  SpaceRef space_;
  CMatrix entries_;
  StructureFlags flags_;
};

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what);

enum class LatticeModel { schrodinger1d, dirac1d, kleingordon1d };

const char* to_string(LatticeModel model);
LatticeModel lattice_model_from_string(const std::string& name);

// Periodic 1D lattice with L sites, spacing a, in a static scalar potential
// phi and vector potential A sampled on the sites.
struct LatticeConfig {
  LatticeModel model = LatticeModel::schrodinger1d;
  Index sites = 1;
  double spacing = 1.0;
  double mass = 0.0;
  double charge = 0.0;
  std::vector<double> phi;
  std::vector<double> vec_a;

  // Zero fields of the right length.
  static LatticeConfig free(LatticeModel model, Index sites, double spacing, double mass,
                            double charge = 1.0);

  // Throws InvalidArgument / DimensionMismatch.
  void validate() const;
};

// -i times the centered periodic difference plus e*A on the diagonal: the
// lattice form of (-i d/dx + eA). Hermitian.
CMatrix covariant_momentum(const LatticeConfig& cfg);

// H = (1/2m) X* X - e Phi with X the covariant momentum.
OperatorMatrix build_schrodinger_1d(const LatticeConfig& cfg);

// D = sigma_x (x) X + m sigma_z (x) 1 - e Phi (x) 1 on 2L components; index
// s * L + j for spinor component s at site j.
OperatorMatrix build_dirac_1d(const LatticeConfig& cfg);

struct KleinGordonSystem {
  OperatorMatrix k;   // [[C, i], [-i B2, C]]
  OperatorMatrix j;   // [[0, -i], [i, 0]]
  OperatorMatrix b2;  // X^2 + m^2
  OperatorMatrix c;   // -e Phi
};

KleinGordonSystem build_klein_gordon_1d(const LatticeConfig& cfg);

// The grading J = [[0, -i], [i, 0]] on h0 (+) h0 with dim(h0) = half_dim.
OperatorMatrix kg_grading(Index half_dim);

struct SpectralSplit {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns, unitary
  OperatorMatrix p_minus;
  OperatorMatrix p_plus;
  Index negative_count = 0;
};

inline constexpr double kDefaultZeroTol = 1e-10;

// Eigenvalues in [-zero_tol, zero_tol] go to the positive side.
SpectralSplit spectral_split(const OperatorMatrix& h, double zero_tol = kDefaultZeroTol);

// Hilbert-Schmidt norm of P1 - P2 for two projections.
double hs_distance(const OperatorMatrix& p1, const OperatorMatrix& p2);

bool is_j_selfadjoint(const OperatorMatrix& k, const OperatorMatrix& j, double tol);
bool is_j_unitary(const OperatorMatrix& u, const OperatorMatrix& j, double tol);

struct BogoliubovResult {
  OperatorMatrix t;
  OperatorMatrix f;      // diag(1, -1)
  OperatorMatrix k;      // [[0, i], [-i B2, 0]]
  OperatorMatrix k_hat;  // T K T^{-1}
  OperatorMatrix b;      // B2^{1/2}
  int sigma = 1;         // T^{-1} = sigma J T* F
  double diagonalization_residual = 0.0;  // ||T K T^{-1} - diag(B, -B)||
  double inverse_residual = 0.0;          // ||T^{-1} - sigma J T* F||
};

inline constexpr double kBogoliubovTolerance = 1e-10;

// C = 0 only. B2 must be hermitian and strictly positive.
BogoliubovResult bogoliubov_transform(const OperatorMatrix& b2);

}  // namespace fockforge
