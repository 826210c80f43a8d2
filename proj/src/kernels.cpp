#include "fockforge/kernels.hpp"

#include <bit>
#include <string>
#include <cmath>
#include <vector>


namespace fockforge::kernels {
namespace {

using ColumnBuffers = std::vector<std::vector<Triplet>>;

int sign_before(std::uint64_t state, Index mode) {
  return (std::popcount(state & ((std::uint64_t{1} << mode) - 1)) & 1) ? -1 : 1;
}

void bilinear_column(const FockSpace& space, const CMatrix& a, Index col,
                     std::vector<Triplet>& out) {
  const Index modes = space.modes();
  if (space.is_fermion()) {
    const auto s = static_cast<std::uint64_t>(col);
    for (Index n = 0; n < modes; ++n) {
      if (!((s >> n) & 1)) continue;
      const std::uint64_t t = s & ~(std::uint64_t{1} << n);
      const int sn = sign_before(s, n);
      for (Index m = 0; m < modes; ++m) {
        const Complex amn = a(m, n);
        if (amn == Complex(0.0) || ((t >> m) & 1)) continue;
        const int sm = sign_before(t, m);
        out.emplace_back(static_cast<Index>(t | (std::uint64_t{1} << m)), col,
                         amn * static_cast<double>(sn * sm));
      }
    }
    return;
  }
  const auto occ = space.occupations(col);
  for (Index n = 0; n < modes; ++n) {
    const int on = occ[static_cast<std::size_t>(n)];
    if (on == 0) continue;
    const double down = std::sqrt(static_cast<double>(on));
    const Index t = col - space.stride(n);
    for (Index m = 0; m < modes; ++m) {
      const Complex amn = a(m, n);
      if (amn == Complex(0.0)) continue;
      const int om = occ[static_cast<std::size_t>(m)] - (m == n ? 1 : 0);
      if (om >= space.cap()) continue;
      const double up = std::sqrt(static_cast<double>(om + 1));
      out.emplace_back(t + space.stride(m), col, amn * (down * up));
    }
  }
}

// States of each particle-number sector, in basis order.
std::vector<std::vector<Index>> sectors(const FockSpace& space) {
  int max_n = 0;
  for (Index s = 0; s < space.dim(); ++s) max_n = std::max(max_n, space.particle_number(s));
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(max_n + 1));
  for (Index s = 0; s < space.dim(); ++s)
    out[static_cast<std::size_t>(space.particle_number(s))].push_back(s);
  return out;
}

// Mode list with multiplicity, ascending.
std::vector<Index> mode_list(const FockSpace& space, Index state) {
  std::vector<Index> modes;
  const auto occ = space.occupations(state);
  for (Index j = 0; j < space.modes(); ++j)
    for (int k = 0; k < occ[static_cast<std::size_t>(j)]; ++k) modes.push_back(j);
  return modes;
}

double factorial_norm(const FockSpace& space, Index state) {
  double prod = 1.0;
  for (int n : space.occupations(state))
    for (int k = 2; k <= n; ++k) prod *= k;
  return prod;
}

void transformation_column(const FockSpace& space, const CMatrix& u,
                           const std::vector<std::vector<Index>>& by_sector, Index col,
                           std::vector<Triplet>& out) {
  const auto cols = mode_list(space, col);
  const auto n = static_cast<Index>(cols.size());
  if (n == 0) {
    out.emplace_back(col, col, Complex(1.0));
    return;
  }
  const double col_norm = space.is_fermion() ? 1.0 : factorial_norm(space, col);
  CMatrix minor(n, n);
  for (Index row : by_sector[static_cast<std::size_t>(n)]) {
    const auto rows = mode_list(space, row);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        minor(i, j) = u(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    Complex amp;
    if (space.is_fermion()) {
      amp = minor.determinant();
    } else {
      amp = permanent(minor) / std::sqrt(col_norm * factorial_norm(space, row));
    }
    if (amp != Complex(0.0)) out.emplace_back(row, col, amp);
  }
}

SparseOp assemble(const FockSpace& space, ColumnBuffers& buffers) {
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  std::vector<Triplet> trips;
  trips.reserve(total);
  for (auto& b : buffers) trips.insert(trips.end(), b.begin(), b.end());
  SparseOp m(space.dim(), space.dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

void require_square(const FockSpace& space, const CMatrix& a, const char* what) {
  if (a.rows() != space.modes() || a.cols() != space.modes())
    throw DimensionMismatch(std::string(what) + ": one-particle matrix does not match mode count");
}

}  // namespace

Complex permanent(const CMatrix& m) {
  const Index n = m.rows();
  if (n == 0) return 1.0;
  if (n > 30) throw BudgetExceeded("permanent: matrix too large");
  // Ryser: perm = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} m(i, j)
  CVector row_sums = CVector::Zero(n);
  Complex total = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t changed = gray ^ gray_prev;
    const int j = std::countr_zero(changed);
    if (gray & changed)
      row_sums += m.col(j);
    else
      row_sums -= m.col(j);
    gray_prev = gray;
    Complex prod = 1.0;
    for (Index i = 0; i < n; ++i) prod *= row_sums(i);
    total += (std::popcount(gray) & 1) ? -prod : prod;
  }
  return (n & 1) ? -total : total;
}

SparseOp bilinear_serial(const FockSpace& space, const CMatrix& a) {
  require_square(space, a, "bilinear");
  ColumnBuffers buffers(static_cast<std::size_t>(space.dim()));
  for (Index col = 0; col < space.dim(); ++col)
    bilinear_column(space, a, col, buffers[static_cast<std::size_t>(col)]);
  return assemble(space, buffers);
}

SparseOp bilinear_parallel(const FockSpace& space, const CMatrix& a) {
  require_square(space, a, "bilinear");
  const Index dim = space.dim();
  ColumnBuffers buffers(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(dynamic, 64)
  for (Index col = 0; col < dim; ++col)
    bilinear_column(space, a, col, buffers[static_cast<std::size_t>(col)]);
  return assemble(space, buffers);
}

SparseOp transformation_serial(const FockSpace& space, const CMatrix& u) {
  require_square(space, u, "transformation");
  const auto by_sector = sectors(space);
  ColumnBuffers buffers(static_cast<std::size_t>(space.dim()));
  for (Index col = 0; col < space.dim(); ++col)
    transformation_column(space, u, by_sector, col, buffers[static_cast<std::size_t>(col)]);
  return assemble(space, buffers);
}

SparseOp transformation_parallel(const FockSpace& space, const CMatrix& u) {
  require_square(space, u, "transformation");
  const auto by_sector = sectors(space);
  const Index dim = space.dim();
  ColumnBuffers buffers(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(dynamic, 16)
  for (Index col = 0; col < dim; ++col)
    transformation_column(space, u, by_sector, col, buffers[static_cast<std::size_t>(col)]);
  return assemble(space, buffers);
}

}  // namespace fockforge::kernels
