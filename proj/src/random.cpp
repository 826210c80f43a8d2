#include "fockforge/random.hpp"

#include <cmath>
#include <numbers>

namespace fockforge {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::numbers::sqrt2;
}

Index CounterRng::uniform_index(Index lo, Index hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<Index>(next_u64() % span);
}

CVector random_vector(CounterRng& rng, Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

CMatrix random_matrix(CounterRng& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMatrix random_hermitian(CounterRng& rng, Index n, double scale) {
  const CMatrix g = random_matrix(rng, n, n);
  return (0.5 * scale) * (g + g.adjoint());
}

CMatrix random_unitary(CounterRng& rng, Index n) {
  const CMatrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_projection(CounterRng& rng, Index n, Index rank) {
  const CMatrix u = random_unitary(rng, n);
  const CMatrix cols = u.leftCols(rank);
  return cols * cols.adjoint();
}

CMatrix random_positive(CounterRng& rng, Index n, double min_eig) {
  const CMatrix g = random_matrix(rng, n, n);
  return g * g.adjoint() / static_cast<double>(n) + min_eig * CMatrix::Identity(n, n);
}

}  // namespace fockforge
