#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "fockforge/linalg.hpp"
#include "fockforge/physics.hpp"
#include "fockforge/random.hpp"

using namespace fockforge;

namespace {

OperatorMatrix diag(std::initializer_list<double> values) {
  RVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return OperatorMatrix(CMatrix(v.cast<Complex>().asDiagonal()));
}

ThermoParams thermo(double beta, double mu, Statistics s) {
  ThermoParams p;
  p.beta = beta;
  p.mu = mu;
  p.statistics = s;
  return p;
}

}  // namespace

TEST_CASE("free energy closed forms") {
  const auto zero = OperatorMatrix::zero(1);
  CHECK(free_energy_formula(zero, thermo(1, 0, Statistics::fermion)) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  CHECK(free_energy_formula(OperatorMatrix::identity(1), thermo(1, 0, Statistics::boson)) ==
        doctest::Approx(std::log(1 - std::exp(-1.0))).epsilon(1e-15));
  CHECK(std::log(1 - std::exp(-1.0)) == doctest::Approx(-0.458675).epsilon(1e-6));

  const auto h = diag({-1, 1});
  const double expect = -0.5 * (std::log(1 + std::exp(2.0)) + std::log(1 + std::exp(-2.0)));
  CHECK(std::abs(free_energy_formula(h, thermo(2, 0, Statistics::fermion)) - expect) <= 1e-14);
  const auto both = free_energy(h, thermo(2, 0, Statistics::fermion), FockSpace::fermion(2));
  CHECK(*both.discrepancy <= 1e-10);
  CHECK(std::abs(*both.value_trace - expect) <= 1e-10);
}

TEST_CASE("free energy trace matches the formula") {
  CounterRng rng(1);
  for (int trial = 0; trial < 3; ++trial) {
    const OperatorMatrix h(random_hermitian(rng, 6));
    const auto report = free_energy(h, thermo(0.7, 0.3, Statistics::fermion), FockSpace::fermion(6));
    CHECK(*report.discrepancy <= 1e-10);
    CHECK_FALSE(report.truncation_bound.has_value());
  }
  // A single boson mode at high cap converges geometrically.
  const auto h = diag({1.0});
  const auto report = free_energy(h, thermo(1, 0, Statistics::boson), FockSpace::boson(1, 40));
  CHECK(*report.discrepancy <= 1e-10 + *report.truncation_bound);
  CHECK(*report.truncation_bound < 1e-16);

  const OperatorMatrix pos(random_positive(rng, 2, 0.5));
  const auto two = free_energy(pos, thermo(2, 0.1, Statistics::boson), FockSpace::boson(2, 12));
  CHECK(*two.discrepancy <= 1e-10 + *two.truncation_bound + *two.sector_tail_bound);

  CHECK_THROWS_AS(free_energy_trace(h, thermo(1, 0, Statistics::boson), FockSpace::fermion(1)),
                  InvalidArgument);
}

TEST_CASE("free energy preconditions") {
  const auto h = diag({0.5, 2.0});
  CHECK_THROWS_AS(free_energy_formula(h, thermo(1, 0.5, Statistics::boson)), Divergence);
  CHECK_THROWS_AS(free_energy_formula(h, thermo(1, 1.0, Statistics::boson)), Divergence);
  CHECK_THROWS_AS(free_energy_formula(h, thermo(0, 0, Statistics::fermion)), InvalidArgument);
  CHECK_THROWS_AS(free_energy_formula(h, thermo(1, std::numeric_limits<double>::infinity(),
                                                Statistics::fermion)),
                  InvalidArgument);
}

TEST_CASE("free energy decreases with the chemical potential") {
  CounterRng rng(2);
  const OperatorMatrix h(random_positive(rng, 4, 0.5));
  for (auto s : {Statistics::fermion, Statistics::boson}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double mu = -2.0; mu < 0.45; mu += 0.25) {
      const double value = free_energy_formula(h, thermo(1.3, mu, s));
      CHECK(value < previous);
      previous = value;
    }
  }
}

TEST_CASE("schatten norms") {
  CHECK(schatten_norm(OperatorMatrix::identity(4), 2) == doctest::Approx(2.0));
  CHECK(schatten_norm(diag({3, 4}), 2) == doctest::Approx(5.0));
  CHECK(schatten_norm(OperatorMatrix::zero(3), 4) == 0.0);
  CHECK_THROWS_AS(schatten_norm(OperatorMatrix::identity(2), 3), InvalidArgument);
  CHECK_THROWS_AS(schatten_norm(OperatorMatrix::identity(2), 0), InvalidArgument);

  CounterRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorMatrix a(random_matrix(rng, 4, 4));
    const double s2 = schatten_norm(a, 2);
    const double s4 = schatten_norm(a, 4);
    const double s8 = schatten_norm(a, 8);
    CHECK(s2 == doctest::Approx(a.matrix().norm()).epsilon(1e-12));
    CHECK(s4 <= s2 * (1 + 1e-12));
    CHECK(s8 <= s4 * (1 + 1e-12));
    CHECK(s8 >= linalg::operator_norm(a.matrix()) * (1 - 1e-12));
  }
  // Scaling keeps huge entries finite.
  CHECK(std::isfinite(schatten_norm(diag({1e200, 1e200}), 4)));
}

TEST_CASE("stability") {
  const auto pos = stability_report(diag({0.0, 1.0}));
  CHECK(pos.bounded_below);
  CHECK_FALSE(pos.requires_quasifree);
  const auto neg = stability_report(diag({-1.0, 1.0}));
  CHECK_FALSE(neg.bounded_below);
  CHECK(neg.requires_quasifree);
  CHECK(neg.min_eig == doctest::Approx(-1.0));
  CHECK(neg.max_eig == doctest::Approx(1.0));
}

TEST_CASE("lattice Dirac dispersion") {
  const double p = 2 * std::numbers::pi / 8;
  CHECK(lattice_dirac_energy(p, 1.0, 0.0) == doctest::Approx(std::sin(p)));
  CHECK(continuum_dirac_energy(p, 0.5) == doctest::Approx(std::hypot(p, 0.5)));
  double previous = std::numeric_limits<double>::infinity();
  for (double a = 0.5; a > 0.01; a /= 2) {
    const double err = std::abs(lattice_dirac_energy(p, a, 0.5) - continuum_dirac_energy(p, 0.5));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("analytic and numerical spectra agree for free fields") {
  for (auto model : {LatticeModel::schrodinger1d, LatticeModel::dirac1d, LatticeModel::kleingordon1d}) {
    const auto cfg = LatticeConfig::free(model, 5, 0.7, 0.9);
    const RVector exact = analytic_free_spectrum(cfg);
    const RVector numeric = model_spectrum(cfg);
    REQUIRE(exact.size() == numeric.size());
    CHECK((exact - numeric).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("equivalence sweep") {
  CounterRng rng(4);
  std::vector<LatticeConfig> family;
  for (int i = 0; i < 3; ++i) {
    auto cfg = LatticeConfig::free(LatticeModel::dirac1d, 4, 1.0, 1.0);
    if (i > 0)
      for (auto& x : cfg.phi) x = 0.3 * i * rng.normal();
    family.push_back(cfg);
  }
  family.push_back(family[0]);
  const auto table = equivalence_sweep(family);
  for (Index i = 0; i < 4; ++i) {
    CHECK(table.distance(i, i) == 0.0);
    for (Index j = 0; j < 4; ++j) CHECK(table.distance(i, j) == table.distance(j, i));
  }
  CHECK(table.distance(0, 3) == 0.0);
  CHECK(table.distance(0, 1) > 0.0);
  // Schatten-2 distances obey the triangle inequality.
  CHECK(table.distance(0, 2) <= table.distance(0, 1) + table.distance(1, 2) + 1e-14);

  // A massless free Dirac operator on an even lattice has zero modes.
  family.push_back(LatticeConfig::free(LatticeModel::dirac1d, 4, 1.0, 0.0));
  const auto refused = equivalence_sweep(family);
  CHECK(refused.refused[4]);
  CHECK(std::isnan(refused.distance(0, 4)));
  CHECK_FALSE(refused.reasons[4].empty());

  family.push_back(LatticeConfig::free(LatticeModel::dirac1d, 5, 1.0, 1.0));
  CHECK_THROWS_AS(equivalence_sweep(family), DimensionMismatch);
  CHECK_THROWS_AS(equivalence_sweep({LatticeConfig::free(LatticeModel::schrodinger1d, 4, 1.0, 1.0)}),
                  InvalidArgument);
}
