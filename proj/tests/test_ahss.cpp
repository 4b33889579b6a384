#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_main.hpp"
#include "tmodel/ahss.hpp"
#include "tmodel/errors.hpp"

using namespace tmodel;
using testutil::Zmod;

namespace {

const Ring ZZ;

ChainMap scalar_map(const ChainComplex& x, long c) {
  std::map<int, Matrix> m;
  for (int n = x.lo(); n <= x.hi(); ++n) m.emplace(n, Matrix::scalar(x.ring(), x.rank(n), c));
  return ChainMap(x, x, m);
}

bool all_zero(const ExactCouple& c) {
  for (const auto& [at, g] : c.e)
    if (!g.is_trivial()) return false;
  return true;
}

}  // namespace

TEST_CASE("zero coefficients give an empty sequence") {
  auto c = build_exact_couple(ChainComplex::moore(ZZ, 2), ChainComplex::zero(ZZ));
  CHECK(all_zero(c));
  auto rep = convergence_check(ChainComplex::moore(ZZ, 2), ChainComplex::zero(ZZ));
  CHECK(rep.all_ok());
  CHECK(abutment_filtration(ChainComplex::moore(ZZ, 2), ChainComplex::zero(ZZ), 0).empty());
}

TEST_CASE("represented functor collapses onto the p = 0 column") {
  std::mt19937_64 rng(41);
  ChainComplex z0 = ChainComplex::concentrated(ZZ, 0);
  for (int trial = 0; trial < 10; ++trial) {
    ChainComplex y = random_complex(rng, ZZ, -2, 2, 3);
    auto ss = run_to_stable(z0, y);
    const ExactCouple& c = ss.couple;
    CHECK(couple_is_exact(c));
    for (const auto& [at, g] : c.e) {
      auto [p, q] = at;
      if (p == 0)
        CHECK(g.isomorphic(homology(y, q)));
      else
        CHECK(g.is_trivial());
    }
    CHECK(ss.stable_page == 2);
    for (int n = -2; n <= 2; ++n) {
      auto gr = associated_graded(z0, y, n);
      for (const auto& [q, g] : gr) CHECK(g.isomorphic(q == n ? homology(y, n) : AbGroup::zero(ZZ)));
      CHECK(derived_hom(z0, y, n).isomorphic(homology(y, n)));
    }
    CHECK(convergence_check(ss).all_ok());
  }
}

TEST_CASE("Moore space against itself") {
  ChainComplex m2 = ChainComplex::moore(ZZ, 2);
  auto ss = run_to_stable(m2, m2);
  const ExactCouple& c = ss.couple;
  CHECK(c.q_lo == 0);
  CHECK(c.q_hi == 0);
  for (const auto& [at, g] : c.e) {
    auto [p, q] = at;
    if (p == 0 || p == -1)
      CHECK(g.isomorphic(Zmod(2)));
    else
      CHECK(g.is_trivial());
  }
  CHECK(e2_identification_check(c));
  CHECK(ss.stable_page == 2);
  auto rep = convergence_check(ss);
  CHECK(rep.all_ok());
  for (int n : {0, -1}) {
    auto f = abutment_filtration(m2, m2, n);
    REQUIRE(f.size() == 2);
    CHECK(f[0].group.isomorphic(Zmod(2)));
    CHECK(f[1].group.is_trivial());
  }
}

TEST_CASE("homology in degrees 0 and 2 stabilizes by r = 4") {
  ChainComplex y(ZZ, 0, {1, 0, 1});
  auto ss = run_to_stable(ChainComplex::moore(ZZ, 2), y);
  CHECK(ss.r_max == 4);
  CHECK(ss.stable_page <= 4);
  CHECK(ss.pages.size() == 3);
  CHECK(convergence_check(ss).all_ok());
}

TEST_CASE("random pairs: exactness, E2 identification, convergence") {
  std::mt19937_64 rng(43);
  for (const Ring& ring : {ZZ, Ring::prime_field(2), Ring::prime_field(3)}) {
    for (int trial = 0; trial < 8; ++trial) {
      ChainComplex x = random_complex(rng, ring, -1, 1, 2);
      ChainComplex y = random_complex(rng, ring, -1, 2, 2);
      auto ss = run_to_stable(x, y);  // derive() throws on d∘d ≠ 0 or a bad page
      CHECK(couple_is_exact(ss.couple));
      CHECK(e2_identification_check(ss.couple));
      auto rep = convergence_check(ss);
      CHECK(rep.lim_ok);
      CHECK(rep.lim1_ok);
      CHECK(rep.colim_ok);
      CHECK(rep.all_iso());
      for (const auto& pg : ss.pages)
        for (const auto& [at, d] : pg.diff) {
          auto [p, q] = at;
          auto it = pg.diff.find({p - pg.r, q + pg.r - 1});
          if (it != pg.diff.end()) CHECK(compose(it->second, d).is_zero());
        }
    }
  }
}

TEST_CASE("ring mismatch") {
  CHECK_THROWS_AS(build_exact_couple(ChainComplex::concentrated(ZZ, 0),
                                     ChainComplex::concentrated(Ring::prime_field(2), 0)),
                  RingMismatch);
}

TEST_CASE("pro-AHSS") {
  ChainComplex z0 = ChainComplex::concentrated(ZZ, 0);
  ChainComplex m2 = ChainComplex::moore(ZZ, 2);
  auto dbl = ComplexTower::repeating(z0, scalar_map(z0, 2));
  auto r = pro_ahss(dbl, m2);
  REQUIRE(r.e2.count({0, 0}));
  REQUIRE(r.e2.at({0, 0}));
  CHECK(r.e2.at({0, 0})->is_trivial());
  REQUIRE(r.abutment.at(0));
  CHECK(r.abutment.at(0)->is_trivial());
  CHECK(r.all_iso());

  // Constant towers reduce to the ordinary sequence.
  std::mt19937_64 rng(47);
  Ring f2 = Ring::prime_field(2);
  for (int trial = 0; trial < 5; ++trial) {
    ChainComplex x0 = random_complex(rng, f2, -1, 1, 2), x1 = random_complex(rng, f2, -1, 1, 2);
    ChainComplex y = random_complex(rng, f2, -1, 1, 2);
    ComplexTower t({x0, x1}, {random_chain_map(rng, x1, x0)}, TailKind::ConstantFrom);
    auto pr = pro_ahss(t, y);
    CHECK(pr.all_iso());
    auto c = build_exact_couple(x1, y);
    for (const auto& [at, g] : c.e) {
      REQUIRE(pr.e2.at(at));
      CHECK(pr.e2.at(at)->isomorphic(g));
    }
    for (const auto& [n, a] : pr.abutment) {
      REQUIRE(a);
      CHECK(a->isomorphic(derived_hom(x1, y, n)));
    }
  }
}
