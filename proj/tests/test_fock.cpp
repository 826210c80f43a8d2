#include "doctest.h"

#include <cstdlib>

#include "fockforge/fock.hpp"
#include "fockforge/random.hpp"

using namespace fockforge;

namespace {

CVector unit(Index n, Index j) { return CVector::Unit(n, j); }

CVector normalized(CounterRng& rng, Index n) { return random_vector(rng, n).normalized(); }

double sparse_norm(const FockOperator& op) { return op.matrix().norm(); }

}  // namespace

TEST_CASE("fock space dimensions") {
  CHECK(FockSpace::fermion(3).dim() == 8);
  CHECK(FockSpace::boson(2, 3).dim() == 16);
  CHECK(FockSpace::fermion(0).dim() == 1);
  CHECK(FockSpace::boson(0, 4).dim() == 1);
  CHECK(make_fock(*OneParticleSpace::make(Index{3}), Statistics::fermion, 7).cap() == 1);
  CHECK_THROWS_AS(FockSpace::boson(2, 0), InvalidArgument);
}

TEST_CASE("budget override") {
  setenv("FOCKFORGE_BUDGET", "64", 1);
  CHECK(nonzero_budget() == 64);
  CHECK_THROWS_AS(FockSpace::fermion(7), BudgetExceeded);
  CHECK(FockSpace::fermion(6).dim() == 64);
  for (const char* bad : {"lots", "-4", "+8", " 8", "8k", "0", ""}) {
    setenv("FOCKFORGE_BUDGET", bad, 1);
    CHECK_THROWS_AS(nonzero_budget(), InvalidArgument);
  }
  unsetenv("FOCKFORGE_BUDGET");
  CHECK(nonzero_budget() == (std::size_t{1} << 24));
}

TEST_CASE("basis ordering is lexicographic with mode 0 least significant") {
  const auto space = FockSpace::boson(3, 2);
  Index previous = -1;
  for (int n2 = 0; n2 <= 2; ++n2)
    for (int n1 = 0; n1 <= 2; ++n1)
      for (int n0 = 0; n0 <= 2; ++n0) {
        const std::vector<int> occ{n0, n1, n2};
        const Index idx = space.index_of(occ);
        CHECK(idx == previous + 1);
        CHECK(space.occupations(idx) == occ);
        CHECK(space.particle_number(idx) == n0 + n1 + n2);
        previous = idx;
      }
  const auto fermions = FockSpace::fermion(4);
  CHECK(fermions.occupations(0b1010) == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("annihilators kill the vacuum") {
  CounterRng rng(1);
  for (const auto& space : {FockSpace::fermion(4), FockSpace::boson(3, 3)}) {
    const CVector f = random_vector(rng, space.modes());
    const auto pair = field_op(space, f);
    CHECK(pair.annihilator.apply(vacuum(space)).norm() == 0.0);
    CHECK(sparse_norm(pair.annihilator - pair.creator.adjoint()) == 0.0);
  }
}

TEST_CASE("CAR on up to eight modes") {
  CounterRng rng(2);
  for (Index n = 1; n <= 8; ++n) {
    const auto space = FockSpace::fermion(n);
    const auto id = FockOperator::identity(space);
    for (int trial = 0; trial < 3; ++trial) {
      const CVector f = random_vector(rng, n);
      const CVector g = random_vector(rng, n);
      const auto pf = field_op(space, f);
      const auto pg = field_op(space, g);
      CHECK(sparse_norm(anticommutator(pf.annihilator, pg.creator) - f.dot(g) * id) <= 1e-12);
      CHECK(sparse_norm(anticommutator(pf.annihilator, pg.annihilator)) <= 1e-12);
      CHECK(sparse_norm(pf.creator * pf.creator) == 0.0);
    }
  }
}

TEST_CASE("truncated CCR holds below the cap") {
  CounterRng rng(3);
  const auto space = FockSpace::boson(3, 4);
  const auto id = FockOperator::identity(space);
  const auto prot = protected_states(space, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const CVector f = random_vector(rng, 3);
    const CVector g = random_vector(rng, 3);
    const auto rel = commutator(field_op(space, f).annihilator, field_op(space, g).creator) - f.dot(g) * id;
    CHECK(restrict_columns(rel, prot).norm() <= 1e-12);
    // At the cap the truncation is visible.
    CHECK(rel.matrix().norm() > 1e-3);
  }
}

TEST_CASE("fields shift the particle number by one") {
  CounterRng rng(4);
  for (const auto& space : {FockSpace::fermion(4), FockSpace::boson(2, 3)}) {
    const auto pair = field_op(space, random_vector(rng, space.modes()));
    for (Index c = 0; c < space.dim(); ++c) {
      for (SparseOp::InnerIterator it(pair.creator.matrix(), c); it; ++it)
        CHECK(space.particle_number(it.row()) == space.particle_number(c) + 1);
      for (SparseOp::InnerIterator it(pair.annihilator.matrix(), c); it; ++it)
        CHECK(space.particle_number(it.row()) == space.particle_number(c) - 1);
    }
  }
}

TEST_CASE("wedge states") {
  CounterRng rng(5);
  const auto space = FockSpace::fermion(4);
  const CVector f = random_vector(rng, 4);
  const CVector g = random_vector(rng, 4);
  const std::vector<CVector> one_f{f};
  const std::vector<CVector> one_g{g};
  CHECK(std::abs(wedge_state(space, one_f).inner(wedge_state(space, one_g)) - f.dot(g)) < 1e-14);

  const std::vector<CVector> fg{f, g};
  const std::vector<CVector> gf{g, f};
  CHECK((wedge_state(space, fg).coeffs + wedge_state(space, gf).coeffs).norm() < 1e-14);

  const std::vector<CVector> ortho{unit(4, 0), unit(4, 2), unit(4, 3)};
  CHECK(std::abs(wedge_state(space, ortho).norm() - 1.0) < 1e-14);

  const auto bosons = FockSpace::boson(2, 1);
  const std::vector<CVector> twice{unit(2, 0), unit(2, 0)};
  CHECK_THROWS_AS(wedge_state(bosons, twice), CapOverflow);
}

TEST_CASE("wedge oracle examples") {
  const std::vector<CVector> two{unit(3, 0), unit(3, 1)};
  const std::vector<CVector> one{unit(3, 0)};
  CHECK(wedge_inner_oracle(two, one, Statistics::fermion) == Complex(0.0));
  const std::vector<CVector> same{unit(3, 1), unit(3, 1)};
  CHECK(wedge_inner_oracle(same, same, Statistics::fermion) == Complex(0.0));
  const std::vector<CVector> e1{unit(3, 0), unit(3, 0)};
  CHECK(wedge_inner_oracle(e1, e1, Statistics::boson) == Complex(2.0));
}

TEST_CASE("wedge inner products match the permutation oracle") {
  CounterRng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const auto stats = trial % 2 ? Statistics::boson : Statistics::fermion;
    const Index n = rng.uniform_index(1, 6);
    const Index max_count = stats == Statistics::fermion ? std::min<Index>(n, 4) : 4;
    const Index count = rng.uniform_index(1, max_count);
    const auto space = make_fock(n, stats, 4);
    std::vector<CVector> fs;
    std::vector<CVector> gs;
    for (Index j = 0; j < count; ++j) {
      fs.push_back(normalized(rng, n));
      gs.push_back(normalized(rng, n));
    }
    const Complex built = wedge_state(space, fs).inner(wedge_state(space, gs));
    CHECK(std::abs(built - wedge_inner_oracle(fs, gs, stats)) <= 1e-10);
  }
}

TEST_CASE("operator algebra") {
  const auto space = FockSpace::fermion(2);
  const auto c0 = annihilation_mode(space, 0);
  const auto c1 = annihilation_mode(space, 1);
  CHECK(sparse_norm(graded_commutator(c0, creation_mode(space, 0)) - FockOperator::identity(space)) == 0.0);
  CHECK(sparse_norm(c0 * c1 + c1 * c0) == 0.0);
  CHECK(operator_norm(creation_mode(space, 1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(c0 + annihilation_mode(FockSpace::fermion(3), 0), DimensionMismatch);
  CHECK_THROWS_AS(field_op(space, CVector::Zero(3)), DimensionMismatch);
}
