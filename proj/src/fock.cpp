#include "fockforge/fock.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <system_error>

#include "fockforge/linalg.hpp"

namespace fockforge {
namespace {

constexpr std::size_t kDefaultBudget = std::size_t{1} << 24;

Index checked_dim(Index modes, Index radix) {
  const auto budget = static_cast<Index>(nonzero_budget());
  Index dim = 1;
  for (Index j = 0; j < modes; ++j) {
    if (dim > budget / radix)
      throw BudgetExceeded("Fock space dimension exceeds the nonzero budget (" +
                           std::to_string(budget) + ")");
    dim *= radix;
  }
  return dim;
}

int fermion_sign_before(Index state, Index mode) {
  const auto below = static_cast<std::uint64_t>(state) & ((std::uint64_t{1} << mode) - 1);
  return (std::popcount(below) & 1) ? -1 : 1;
}

void require_vector(const FockSpace& space, const CVector& f, const char* what) {
  if (f.size() != space.modes())
    throw DimensionMismatch(std::string(what) + ": vector length differs from the mode count");
}

}  // namespace

const char* to_string(Statistics s) { return s == Statistics::fermion ? "fermion" : "boson"; }

Statistics statistics_from_string(const std::string& name) {
  if (name == "fermion") return Statistics::fermion;
  if (name == "boson") return Statistics::boson;
  throw InvalidArgument("unknown statistics '" + name + "'");
}

std::size_t nonzero_budget() {
  if (const char* env = std::getenv("FOCKFORGE_BUDGET")) {
    const std::string_view text(env);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || v == 0)
      throw InvalidArgument("FOCKFORGE_BUDGET must be a positive integer");
    return v;
  }
  return kDefaultBudget;
}

FockSpace FockSpace::fermion(Index modes) {
  if (modes < 0) throw InvalidArgument("FockSpace: negative mode count");
  if (modes > 62) throw BudgetExceeded("FockSpace: too many fermion modes");
  return FockSpace(Statistics::fermion, modes, 1, checked_dim(modes, 2));
}

FockSpace FockSpace::boson(Index modes, int cap) {
  if (modes < 0) throw InvalidArgument("FockSpace: negative mode count");
  if (cap < 1) throw InvalidArgument("FockSpace: boson cap must be >= 1");
  return FockSpace(Statistics::boson, modes, cap, checked_dim(modes, cap + 1));
}

int FockSpace::occupation(Index state, Index mode) const {
  if (statistics_ == Statistics::fermion) return static_cast<int>((state >> mode) & 1);
  return static_cast<int>((state / stride(mode)) % radix());
}

std::vector<int> FockSpace::occupations(Index state) const {
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  for (Index j = 0; j < modes_; ++j) {
    occ[static_cast<std::size_t>(j)] = static_cast<int>(state % radix());
    state /= radix();
  }
  return occ;
}

Index FockSpace::index_of(std::span<const int> occupations) const {
  if (static_cast<Index>(occupations.size()) != modes_)
    throw DimensionMismatch("FockSpace::index_of: wrong occupation vector length");
  Index idx = 0;
  for (Index j = modes_ - 1; j >= 0; --j) {
    const int n = occupations[static_cast<std::size_t>(j)];
    if (n < 0 || n > cap_) throw CapOverflow("FockSpace::index_of: occupancy out of range");
    idx = idx * radix() + n;
  }
  return idx;
}

int FockSpace::particle_number(Index state) const {
  if (statistics_ == Statistics::fermion)
    return std::popcount(static_cast<std::uint64_t>(state));
  int total = 0;
  for (Index j = 0; j < modes_; ++j) {
    total += static_cast<int>(state % radix());
    state /= radix();
  }
  return total;
}

Index FockSpace::stride(Index mode) const {
  Index s = 1;
  for (Index j = 0; j < mode; ++j) s *= radix();
  return s;
}

bool FockSpace::within(Index state, int max_occupancy) const {
  for (Index j = 0; j < modes_; ++j) {
    if (state % radix() > max_occupancy) return false;
    state /= radix();
  }
  return true;
}

FockSpace make_fock(Index modes, Statistics statistics, int cap) {
  return statistics == Statistics::fermion ? FockSpace::fermion(modes)
                                           : FockSpace::boson(modes, cap);
}

FockSpace make_fock(const OneParticleSpace& space, Statistics statistics, int cap) {
  return make_fock(space.dim, statistics, cap);
}

Complex FockVector::inner(const FockVector& other) const {
  if (!(space == other.space)) throw DimensionMismatch("FockVector::inner: different spaces");
  return coeffs.dot(other.coeffs);
}

FockVector vacuum(const FockSpace& space) {
  CVector v = CVector::Zero(space.dim());
  v(0) = 1.0;
  return FockVector{space, std::move(v)};
}

FockOperator::FockOperator(FockSpace space, SparseOp matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
    throw DimensionMismatch("FockOperator: matrix does not match the Fock space");
  if (static_cast<std::size_t>(matrix_.nonZeros()) > nonzero_budget())
    throw BudgetExceeded("FockOperator: nonzero count exceeds the budget");
  matrix_.makeCompressed();
}

FockOperator FockOperator::identity(const FockSpace& space) {
  SparseOp id(space.dim(), space.dim());
  id.setIdentity();
  return FockOperator(space, std::move(id));
}

FockOperator FockOperator::zero(const FockSpace& space) {
  return FockOperator(space, SparseOp(space.dim(), space.dim()));
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(space_, SparseOp(matrix_.adjoint()));
}

FockVector FockOperator::apply(const FockVector& v) const {
  if (!(v.space == space_)) throw DimensionMismatch("FockOperator::apply: different spaces");
  return FockVector{space_, matrix_ * v.coeffs};
}

FockOperator& FockOperator::operator+=(const FockOperator& other) {
  if (!(other.space_ == space_)) throw DimensionMismatch("FockOperator: different spaces");
  matrix_ += other.matrix_;
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& other) {
  if (!(other.space_ == space_)) throw DimensionMismatch("FockOperator: different spaces");
  matrix_ -= other.matrix_;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (!(a.space_ == b.space_)) throw DimensionMismatch("FockOperator: different spaces");
  return FockOperator(a.space_, SparseOp(a.matrix_ * b.matrix_));
}

FockOperator operator*(Complex s, const FockOperator& a) {
  return FockOperator(a.space_, SparseOp(s * a.matrix_));
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return a * b + b * a;
}

FockOperator graded_commutator(const FockOperator& a, const FockOperator& b) {
  return a.space().is_fermion() ? anticommutator(a, b) : commutator(a, b);
}

double operator_norm(const FockOperator& op) { return linalg::operator_norm(op.matrix()); }

FockOperator creation_mode(const FockSpace& space, Index mode) {
  if (mode < 0 || mode >= space.modes()) throw InvalidArgument("creation_mode: mode out of range");
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(space.dim()));
  const Index stride = space.stride(mode);
  for (Index s = 0; s < space.dim(); ++s) {
    const int n = space.occupation(s, mode);
    if (n >= space.cap()) continue;
    const double amp = space.is_fermion() ? fermion_sign_before(s, mode)
                                          : std::sqrt(static_cast<double>(n + 1));
    trips.emplace_back(s + stride, s, amp);
  }
  SparseOp m(space.dim(), space.dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return FockOperator(space, std::move(m));
}

FockOperator annihilation_mode(const FockSpace& space, Index mode) {
  return creation_mode(space, mode).adjoint();
}

FieldPair field_op(const FockSpace& space, const CVector& f) {
  require_vector(space, f, "field_op");
  std::vector<Triplet> trips;
  for (Index s = 0; s < space.dim(); ++s) {
    for (Index j = 0; j < space.modes(); ++j) {
      if (f(j) == Complex(0.0)) continue;
      const int n = space.occupation(s, j);
      if (n >= space.cap()) continue;
      const double amp = space.is_fermion() ? fermion_sign_before(s, j)
                                            : std::sqrt(static_cast<double>(n + 1));
      trips.emplace_back(s + space.stride(j), s, f(j) * amp);
    }
  }
  SparseOp m(space.dim(), space.dim());
  m.setFromTriplets(trips.begin(), trips.end());
  FockOperator creator(space, std::move(m));
  FockOperator annihilator = creator.adjoint();
  return FieldPair{std::move(annihilator), std::move(creator)};
}

FockVector wedge_state(const FockSpace& space, std::span<const CVector> fs) {
  if (space.is_fermion() && static_cast<Index>(fs.size()) > space.modes())
    return FockVector{space, CVector::Zero(space.dim())};
  FockVector state = vacuum(space);
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
    const CVector& f = *it;
    require_vector(space, f, "wedge_state");
    if (!space.is_fermion()) {
      for (Index s = 0; s < space.dim(); ++s) {
        if (state.coeffs(s) == Complex(0.0)) continue;
        for (Index j = 0; j < space.modes(); ++j)
          if (f(j) != Complex(0.0) && space.occupation(s, j) >= space.cap())
            throw CapOverflow("wedge_state: an occupancy would exceed the boson cap");
      }
    }
    state = field_op(space, f).creator.apply(state);
  }
  return state;
}

Complex wedge_inner_oracle(std::span<const CVector> fs, std::span<const CVector> gs,
                           Statistics statistics) {
  if (fs.size() != gs.size()) return Complex(0.0);
  const std::size_t n = fs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (fs[i].size() != fs[0].size() || gs[i].size() != fs[0].size())
      throw DimensionMismatch("wedge_inner_oracle: vectors of different length");
  }
  // gram(j, k) = (f_j, g_k)
  std::vector<Complex> gram(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) gram[j * n + k] = fs[j].dot(gs[k]);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    // Parity by counting inversions.
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    const double sign =
        (statistics == Statistics::fermion && (inversions & 1)) ? -1.0 : 1.0;
    Complex prod = sign;
    for (std::size_t j = 0; j < n; ++j) prod *= gram[j * n + perm[j]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::vector<Index> protected_states(const FockSpace& space, int max_occupancy) {
  std::vector<Index> states;
  for (Index s = 0; s < space.dim(); ++s)
    if (space.within(s, max_occupancy)) states.push_back(s);
  return states;
}

CMatrix restrict_columns(const FockOperator& op, std::span<const Index> states) {
  CMatrix out = CMatrix::Zero(op.dim(), static_cast<Index>(states.size()));
  for (std::size_t c = 0; c < states.size(); ++c)
    for (SparseOp::InnerIterator it(op.matrix(), states[c]); it; ++it)
      out(it.row(), static_cast<Index>(c)) = it.value();
  return out;
}

CMatrix compress(const FockOperator& op, std::span<const Index> states) {
  std::vector<Index> position(static_cast<std::size_t>(op.dim()), -1);
  for (std::size_t i = 0; i < states.size(); ++i)
    position[static_cast<std::size_t>(states[i])] = static_cast<Index>(i);
  const auto k = static_cast<Index>(states.size());
  CMatrix out = CMatrix::Zero(k, k);
  for (Index c = 0; c < k; ++c)
    for (SparseOp::InnerIterator it(op.matrix(), states[static_cast<std::size_t>(c)]); it; ++it) {
      const Index r = position[static_cast<std::size_t>(it.row())];
      if (r >= 0) out(r, c) = it.value();
    }
  return out;
}

}  // namespace fockforge
