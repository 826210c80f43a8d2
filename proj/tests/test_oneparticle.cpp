#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fockforge/linalg.hpp"
#include "fockforge/oneparticle.hpp"
#include "fockforge/random.hpp"

using namespace fockforge;

namespace {

RVector sorted_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RVector sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return Eigen::Map<RVector>(v.data(), static_cast<Index>(v.size()));
}

LatticeConfig random_fields(CounterRng& rng, LatticeModel model, Index sites, double mass) {
  auto cfg = LatticeConfig::free(model, sites, 0.7, mass);
  for (auto& x : cfg.phi) x = 0.5 * rng.normal();
  for (auto& x : cfg.vec_a) x = 0.5 * rng.normal();
  return cfg;
}

}  // namespace

TEST_CASE("operator flags") {
  CHECK(OperatorMatrix::identity(3).is_unitary());
  CHECK(OperatorMatrix::identity(3).is_grading());
  CHECK(OperatorMatrix::identity(3).is_projection());
  CHECK(OperatorMatrix::zero(2).is_projection());
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  const OperatorMatrix nil(m);
  CHECK_FALSE(nil.is_hermitian());
  CHECK_FALSE(nil.is_projection());
  CHECK_THROWS_AS(OneParticleSpace::make(Index{0}), InvalidArgument);
  CHECK_THROWS_AS(OperatorMatrix(CMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("schrodinger free spectrum is the squared centered difference") {
  // Fourier: the centered difference has eigenvalues sin(2 pi k / L) / a.
  for (Index l : {3, 4, 8}) {
    auto cfg = LatticeConfig::free(LatticeModel::schrodinger1d, l, 0.5, 1.3, 0.0);
    const auto h = build_schrodinger_1d(cfg);
    std::vector<double> expect;
    for (Index k = 0; k < l; ++k) {
      const double s = std::sin(2.0 * std::numbers::pi * k / l) / cfg.spacing;
      expect.push_back(s * s / (2.0 * cfg.mass));
    }
    CHECK((sorted_eigenvalues(h.matrix()) - sorted(expect)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("schrodinger is hermitian and shifts with constant phi") {
  CounterRng rng(11);
  const auto cfg = random_fields(rng, LatticeModel::schrodinger1d, 6, 0.8);
  const auto h = build_schrodinger_1d(cfg);
  CHECK((h.matrix() - h.matrix().adjoint()).norm() <= 1e-14);
  CHECK(h.is_hermitian());
  auto shifted = cfg;
  for (auto& x : shifted.phi) x += 0.37;
  const RVector e0 = sorted_eigenvalues(h.matrix());
  const RVector e1 = sorted_eigenvalues(build_schrodinger_1d(shifted).matrix());
  CHECK((e1 - (e0.array() - cfg.charge * 0.37).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("schrodinger preconditions") {
  auto cfg = LatticeConfig::free(LatticeModel::schrodinger1d, 4, 1.0, 1.0);
  cfg.phi.pop_back();
  CHECK_THROWS(build_schrodinger_1d(cfg));
  auto massless = LatticeConfig::free(LatticeModel::schrodinger1d, 4, 1.0, 0.0);
  CHECK_THROWS_AS(build_schrodinger_1d(massless), InvalidArgument);
  auto bad_spacing = LatticeConfig::free(LatticeModel::schrodinger1d, 4, 1.0, 1.0);
  bad_spacing.spacing = 0.0;
  CHECK_THROWS_AS(build_schrodinger_1d(bad_spacing), InvalidArgument);
}

TEST_CASE("free dirac dispersion") {
  for (double m : {0.0, 1.0}) {
    const Index l = 8;
    const auto cfg = LatticeConfig::free(LatticeModel::dirac1d, l, 1.0, m);
    const auto d = build_dirac_1d(cfg);
    CHECK(d.dim() == 2 * l);
    std::vector<double> expect;
    for (Index k = 0; k < l; ++k) {
      const double s = std::sin(2.0 * std::numbers::pi * k / l);
      expect.push_back(std::sqrt(s * s + m * m));
      expect.push_back(-std::sqrt(s * s + m * m));
    }
    const RVector e = sorted_eigenvalues(d.matrix());
    CHECK((e - sorted(expect)).cwiseAbs().maxCoeff() < 1e-10);
    // E -> -E symmetry of the free spectrum.
    CHECK((e + e.reverse()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dirac constant phi shift and hermiticity") {
  CounterRng rng(5);
  const auto cfg = random_fields(rng, LatticeModel::dirac1d, 5, 0.9);
  const auto d = build_dirac_1d(cfg);
  CHECK((d.matrix() - d.matrix().adjoint()).norm() <= 1e-12);
  auto shifted = cfg;
  for (auto& x : shifted.phi) x -= 1.1;
  const RVector e0 = sorted_eigenvalues(d.matrix());
  const RVector e1 = sorted_eigenvalues(build_dirac_1d(shifted).matrix());
  CHECK((e1 - (e0.array() + cfg.charge * 1.1).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("klein-gordon system") {
  const auto cfg = LatticeConfig::free(LatticeModel::kleingordon1d, 4, 1.0, 1.0);
  const auto kg = build_klein_gordon_1d(cfg);
  std::vector<double> expect;
  for (Index k = 0; k < 4; ++k) {
    const double s = std::sin(2.0 * std::numbers::pi * k / 4.0);
    expect.push_back(s * s + 1.0);
  }
  CHECK((sorted_eigenvalues(kg.b2.matrix()) - sorted(expect)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(kg.j.is_grading());
  CHECK((kg.j.matrix() * kg.j.matrix() - CMatrix::Identity(8, 8)).norm() == 0.0);

  CounterRng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto random = random_fields(rng, LatticeModel::kleingordon1d, 1 + trial, 0.6);
    const auto sys = build_klein_gordon_1d(random);
    const CMatrix& j = sys.j.matrix();
    CHECK((sys.k.matrix().adjoint() - j * sys.k.matrix() * j).norm() <= 1e-12);
    CHECK(is_j_selfadjoint(sys.k, sys.j, 1e-12));
  }
  auto massless = cfg;
  massless.mass = 0.0;
  CHECK_THROWS_AS(build_klein_gordon_1d(massless), InvalidArgument);
}

TEST_CASE("spectral split examples") {
  CMatrix h(2, 2);
  h << -1, 0, 0, 2;
  auto split = spectral_split(OperatorMatrix(h));
  CMatrix expect(2, 2);
  expect << 1, 0, 0, 0;
  CHECK((split.p_minus.matrix() - expect).norm() < 1e-14);
  CHECK(split.negative_count == 1);

  split = spectral_split(OperatorMatrix::identity(3));
  CHECK(split.p_minus.matrix().norm() == 0.0);

  h << 0, 1, 1, 0;
  split = spectral_split(OperatorMatrix(h));
  expect << 0.5, -0.5, -0.5, 0.5;
  CHECK((split.p_minus.matrix() - expect).norm() < 1e-14);

  // Zero modes go to the positive side.
  split = spectral_split(OperatorMatrix::zero(2));
  CHECK(split.negative_count == 0);

  CMatrix nonherm(2, 2);
  nonherm << 0, 1, 0, 0;
  CHECK_THROWS_AS(spectral_split(OperatorMatrix(nonherm)), InvalidArgument);
}

TEST_CASE("spectral split properties on random hermitian matrices") {
  CounterRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + static_cast<Index>(trial % 7);
    const OperatorMatrix h(random_hermitian(rng, n));
    const auto s = spectral_split(h);
    const CMatrix& pm = s.p_minus.matrix();
    const CMatrix& pp = s.p_plus.matrix();
    const CMatrix id = CMatrix::Identity(n, n);
    CHECK((pm * pm - pm).norm() <= 1e-12);
    CHECK((pm - pm.adjoint()).norm() <= 1e-12);
    CHECK((pm * pp).norm() <= 1e-12);
    CHECK((pm + pp - id).norm() <= 1e-12);
    CHECK((pm * h.matrix() - h.matrix() * pm).norm() <= 1e-10);
  }
}

TEST_CASE("hs distance") {
  CMatrix p1 = CMatrix::Zero(2, 2);
  CMatrix p2 = CMatrix::Zero(2, 2);
  p1(0, 0) = 1;
  p2(1, 1) = 1;
  CHECK(hs_distance(OperatorMatrix(p1), OperatorMatrix(p1)) == 0.0);
  CHECK(hs_distance(OperatorMatrix(p1), OperatorMatrix(p2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS(hs_distance(OperatorMatrix(p1), OperatorMatrix::identity(3)));
  CMatrix notproj(2, 2);
  notproj << 2, 0, 0, 0;
  CHECK_THROWS_AS(hs_distance(OperatorMatrix(notproj), OperatorMatrix(p1)), InvalidArgument);

  CounterRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorMatrix a(random_projection(rng, 5, 2));
    const OperatorMatrix b(random_projection(rng, 5, 3));
    const OperatorMatrix c(random_projection(rng, 5, 1));
    CHECK(hs_distance(a, b) == hs_distance(b, a));
    CHECK(hs_distance(a, c) <= hs_distance(a, b) + hs_distance(b, c) + 1e-12);
  }
}

TEST_CASE("J-unitary exponentials") {
  const auto cfg = LatticeConfig::free(LatticeModel::kleingordon1d, 3, 1.0, 1.0);
  const auto kg = build_klein_gordon_1d(cfg);
  const CMatrix u = linalg::expm_diagonalizable(kI * 1e-2 * kg.k.matrix());
  CHECK(is_j_unitary(OperatorMatrix(u), kg.j, 1e-10));
  CHECK(is_j_selfadjoint(OperatorMatrix::identity(6), kg.j, 0.0));
  CHECK_THROWS_AS(is_j_selfadjoint(kg.k, OperatorMatrix(CMatrix(2.0 * CMatrix::Identity(6, 6))), 1e-12),
                  InvalidArgument);
  CHECK_THROWS_AS(is_j_unitary(OperatorMatrix::zero(6), kg.j, 1e-12), InvalidArgument);
}

TEST_CASE("bogoliubov scalar case") {
  const auto r = bogoliubov_transform(OperatorMatrix::identity(1));
  CMatrix t(2, 2);
  t << 1, kI, 1, -kI;
  t /= std::sqrt(2.0);
  CHECK((r.t.matrix() - t).norm() < 1e-14);
  CMatrix diag(2, 2);
  diag << 1, 0, 0, -1;
  CHECK((r.k_hat.matrix() - diag).norm() < 1e-12);
  CHECK(r.f.is_grading());
  CHECK((r.f.matrix() * r.f.matrix() - CMatrix::Identity(2, 2)).norm() == 0.0);
  CHECK((r.f.matrix() - r.f.matrix().adjoint()).norm() == 0.0);
  CHECK(r.sigma == -1);
}

TEST_CASE("bogoliubov spectral mapping and identities") {
  CMatrix b2 = CMatrix::Zero(2, 2);
  b2(0, 0) = 1;
  b2(1, 1) = 4;
  CounterRng rng(2);
  const CMatrix u = random_unitary(rng, 2);
  const auto r = bogoliubov_transform(OperatorMatrix(CMatrix(u * b2 * u.adjoint())));
  Eigen::ComplexEigenSolver<CMatrix> es(r.k_hat.matrix());
  std::vector<double> ev;
  for (Index i = 0; i < 4; ++i) ev.push_back(es.eigenvalues()(i).real());
  const std::vector<double> expect{-2, -1, 1, 2};
  CHECK((sorted(ev) - sorted(expect)).cwiseAbs().maxCoeff() < 1e-10);

  for (int trial = 0; trial < 10; ++trial) {
    const Index l = 1 + trial % 5;
    const auto res = bogoliubov_transform(OperatorMatrix(random_positive(rng, l, 0.2)));
    CHECK(res.diagonalization_residual <= 1e-10);
    CHECK(res.inverse_residual <= 1e-10);
    CHECK(std::abs(res.sigma) == 1);
  }
  CMatrix indefinite = CMatrix::Identity(2, 2);
  indefinite(1, 1) = -1;
  CHECK_THROWS_AS(bogoliubov_transform(OperatorMatrix(indefinite)), InvalidArgument);
}
