#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_main.hpp"
#include "tmodel/errors.hpp"
#include "tmodel/pro.hpp"

using namespace tmodel;
using testutil::V;
using testutil::Zmod;

namespace {

const Ring ZZ;

GroupHom mult(const AbGroup& a, long c) {
  return GroupHom(a, a, Matrix::scalar(a.ring(), a.rank(), c));
}

GroupTower times_tower(const AbGroup& a, long c) { return GroupTower::repeating(a, mult(a, c)); }

GroupProMap to_zero(const GroupTower& x) {
  AbGroup z = AbGroup::zero(x.at(0).ring());
  std::vector<GroupHom> comps;
  for (std::size_t t = 0; t <= x.tail_start(); ++t) comps.push_back(GroupHom::zero(x.at(t), z));
  return GroupProMap::level(x, GroupTower::constant(z), comps);
}

GroupProMap identity_pro(const GroupTower& x) {
  std::vector<GroupHom> comps;
  for (std::size_t t = 0; t <= x.tail_start(); ++t) comps.push_back(GroupHom::identity(x.at(t)));
  return GroupProMap::level(x, x, comps);
}

// A random finite group Z^r + torsion with a random endomorphism.
GroupHom random_endo(std::mt19937_64& rng, const Ring& ring) {
  std::uniform_int_distribution<int> nt(0, 2), fr(0, 2), ord(2, 6), e(-3, 3);
  Vec tors;
  int k = nt(rng);
  mpz_class d = 1;
  for (int i = 0; i < k; ++i) {
    d *= ord(rng);
    tors.push_back(d);
  }
  if (ring.is_field()) tors.clear();
  AbGroup a = AbGroup::from_invariants(ring, tors, fr(rng));
  Matrix m(ring, a.rank(), a.rank());
  // Entry (i, j) must kill order(j) in Z/order(i); torsion never maps to free.
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) {
      mpz_class v = e(rng);
      mpz_class oi = a.order(i), oj = a.order(j);
      if (oi != 0 && oj != 0) v *= oi / gcd(oi, oj);
      if (oi == 0 && oj != 0) v = 0;
      m.set(i, j, v);
    }
  return GroupHom(a, a, m);
}

}  // namespace

TEST_CASE("identity level map is a pro-isomorphism") {
  auto x = times_tower(Zmod(0), 2);
  auto r = is_pro_isomorphism(identity_pro(x), 4);
  CHECK(r.verdict == Verdict::True);
  CHECK(!r.witness.empty());
}

TEST_CASE("doubling tower of Z to zero is not a pro-isomorphism") {
  auto r = is_pro_isomorphism(to_zero(times_tower(Zmod(0), 2)), 4);
  CHECK(r.verdict == Verdict::False);
  CHECK(!r.certificate.empty());
}

TEST_CASE("zero-map tower of Z/2 is pro-zero") {
  auto r = is_pro_isomorphism(to_zero(GroupTower::repeating(Zmod(2), mult(Zmod(2), 0))), 4);
  CHECK(r.verdict == Verdict::True);
  // fillers: maps 0 -> X_t with the required composites
  for (const auto& f : r.witness) CHECK(f.s > f.t);
}

TEST_CASE("doubling tower on Z/4 is pro-zero with a deeper filler") {
  auto r = is_pro_isomorphism(to_zero(times_tower(Zmod(4), 2)), 4);
  CHECK(r.verdict == Verdict::True);
  for (const auto& f : r.witness) CHECK(f.s >= f.t + 2);
}

TEST_CASE("lim and lim1") {
  auto a = lim_lim1(times_tower(Zmod(0), 2), 4);
  REQUIRE(a.lim);
  CHECK(a.lim->is_trivial());
  CHECK(a.lim1 == Lim1::NonzeroUncountable);
  CHECK(!a.mittag_leffler);

  auto b = lim_lim1(times_tower(Zmod(4), 2), 4);
  REQUIRE(b.lim);
  CHECK(b.lim->is_trivial());
  CHECK(b.lim1 == Lim1::Zero);
  CHECK(b.mittag_leffler);

  // Z + Z/3 with ×2: the torsion survives, lim¹ is uncountable.
  AbGroup g = AbGroup::from_invariants(ZZ, V({3}), 1);
  auto c = lim_lim1(times_tower(g, 2), 4);
  REQUIRE(c.lim);
  CHECK(c.lim->isomorphic(Zmod(3)));
  CHECK(c.lim1 == Lim1::NonzeroUncountable);

  // diag(1, 2): every power keeps invariant factor 1, so the certificate never fires.
  // (The true lim is Z, from the fixed first coordinate.)
  AbGroup z2 = AbGroup::free(ZZ, 2);
  GroupHom u(z2, z2, Matrix::from_rows(ZZ, {{1, 0}, {0, 2}}));
  auto d = lim_lim1_endo(u, 4);
  CHECK(!d.lim);
  CHECK(d.lim1 == Lim1::NonzeroUncountable);

  // Constant tower: lim is the tail, lim¹ vanishes.
  auto e = lim_lim1(GroupTower::constant(z2), 4);
  REQUIRE(e.lim);
  CHECK(e.lim->isomorphic(z2));
  CHECK(e.lim1 == Lim1::Zero);

  // Iso tail: ×(-1) on Z.
  auto f = lim_lim1(times_tower(Zmod(0), -1), 4);
  REQUIRE(f.lim);
  CHECK(f.lim->isomorphic(Zmod(0)));
  CHECK(f.lim1 == Lim1::Zero);
}

TEST_CASE("colimits") {
  DirectSystem zero2{{Zmod(2)}, {}, TailKind::RepeatFrom, mult(Zmod(2), 0)};
  auto a = colim(zero2);
  REQUIRE(a.value);
  CHECK(a.value->is_trivial());

  DirectSystem dbl{{Zmod(0)}, {}, TailKind::RepeatFrom, mult(Zmod(0), 2)};
  CHECK(!colim(dbl).value);

  DirectSystem c4{{Zmod(4)}, {}, TailKind::RepeatFrom, mult(Zmod(4), 2)};
  auto b = colim(c4);
  REQUIRE(b.value);
  CHECK(b.value->is_trivial());

  // Z + Z/4 with φ(x, y) = (x, 2y): colim Z.
  AbGroup g = AbGroup::from_invariants(ZZ, V({4}), 1);
  GroupHom phi(g, g, Matrix::from_rows(ZZ, {{2, 0}, {0, 1}}));
  auto c = colim_endo(phi);
  REQUIRE(c.value);
  CHECK(c.value->isomorphic(Zmod(0)));

  DirectSystem constant{{Zmod(3)}, {}, TailKind::ConstantFrom, std::nullopt};
  auto d = colim(constant);
  REQUIRE(d.value);
  CHECK(d.value->isomorphic(Zmod(3)));
}

TEST_CASE("pro-hom") {
  auto a = pro_hom(times_tower(Zmod(0), 2), GroupTower::constant(Zmod(2)), 4);
  REQUIRE(a.value);
  CHECK(a.value->is_trivial());

  // Constant towers: ordinary Hom.
  for (long m : {0, 2, 3, 4, 6})
    for (long n : {0, 2, 4, 9}) {
      auto r = pro_hom(GroupTower::constant(Zmod(m)), GroupTower::constant(Zmod(n)), 4);
      REQUIRE(r.value);
      CHECK(r.value->isomorphic(hom_group(Zmod(m), Zmod(n))));
    }

  // Hom(const Z, ×2 tower of Z) = lim of ×2 = 0.
  auto b = pro_hom(GroupTower::constant(Zmod(0)), times_tower(Zmod(0), 2), 4);
  REQUIRE(b.value);
  CHECK(b.value->is_trivial());

  // Hom(×3 tower of Z, const Z/3) = colim of ×3 on Z/3 = 0.
  auto c = pro_hom(times_tower(Zmod(0), 3), GroupTower::constant(Zmod(3)), 4);
  REQUIRE(c.value);
  CHECK(c.value->is_trivial());
}

TEST_CASE("reindexing") {
  auto x = times_tower(Zmod(0), 2);
  auto r = reindex_cofinal(x, 2);
  REQUIRE(r.tower.endo());
  CHECK(r.tower.endo()->matrix() == Matrix::from_rows(ZZ, {{4}}));
  CHECK(validate(r.comparison));
  CHECK(is_pro_isomorphism(r.comparison, 4).verdict == Verdict::True);

  // A tower with a head.
  AbGroup z = Zmod(0);
  GroupTower h({Zmod(6), z, z}, {GroupHom(z, Zmod(6), Matrix::from_rows(ZZ, {{1}})), mult(z, 3)},
               TailKind::RepeatFrom, mult(z, -1));
  for (std::size_t k : {1, 2, 3}) {
    auto rr = reindex_cofinal(h, k);
    CHECK(validate(rr.comparison));
    CHECK(is_pro_isomorphism(rr.comparison, 4).verdict == Verdict::True);
    auto l1 = lim_lim1(h, 4), l2 = lim_lim1(rr.tower, 4);
    CHECK(l1.lim1 == l2.lim1);
    REQUIRE(l1.lim);
    REQUIRE(l2.lim);
    CHECK(l1.lim->isomorphic(*l2.lim));
  }
  CHECK_THROWS_AS(reindex_cofinal(h, 0), IndexOverflow);
}

TEST_CASE("composition of pro-maps") {
  auto x = times_tower(Zmod(0), 2);
  auto r2 = reindex_cofinal(x, 2);
  auto r3 = reindex_cofinal(r2.tower, 3);
  auto c = compose(r3.comparison, r2.comparison);
  CHECK(c.slope == 6);
  CHECK(validate(c));
  CHECK(c.theta(1) == 6);
  CHECK(is_pro_isomorphism(c, 4).verdict == Verdict::True);

  auto id = identity_pro(x);
  auto z = to_zero(x);
  auto zc = compose(z, id);
  CHECK(validate(zc));
  CHECK(is_pro_isomorphism(zc, 4).verdict == Verdict::False);
}

TEST_CASE("constant tails reduce to ordinary isomorphism") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    GroupHom e = random_endo(rng, ZZ);
    auto f = GroupProMap::level(GroupTower::constant(e.source()), GroupTower::constant(e.source()), {e});
    CHECK(validate(f));
    Verdict v = is_pro_isomorphism(f, 3).verdict;
    CHECK(v == (is_isomorphism(e) ? Verdict::True : Verdict::False));
  }
}

TEST_CASE("random tails: reflexivity, reindexing, and verdict against nilpotency") {
  std::mt19937_64 rng(5);
  for (const Ring& ring : {ZZ, Ring::prime_field(2)}) {
    for (int trial = 0; trial < 30; ++trial) {
      GroupHom e = random_endo(rng, ring);
      auto x = GroupTower::repeating(e.source(), e);
      CHECK(is_pro_isomorphism(identity_pro(x), 4).verdict == Verdict::True);
      auto rr = reindex_cofinal(x, 2);
      CHECK(is_pro_isomorphism(rr.comparison, 6).verdict == Verdict::True);
      Verdict v = is_pro_isomorphism(to_zero(x), 8).verdict;
      CHECK(v == (is_nilpotent(e) ? Verdict::True : Verdict::False));
      auto l = lim_lim1(x, 4);
      if (is_nilpotent(e)) {
        REQUIRE(l.lim);
        CHECK(l.lim->is_trivial());
        CHECK(l.lim1 == Lim1::Zero);
      }
      if (ring.is_field()) CHECK(l.lim1 == Lim1::Zero);
    }
  }
}

TEST_CASE("finite towers have vanishing lim1") {
  // Levels Z/8 <- Z/8 with ×2 then constant: eventually constant.
  AbGroup a = Zmod(8);
  GroupTower t({a, a, a}, {mult(a, 2), mult(a, 2)}, TailKind::ConstantFrom);
  auto l = lim_lim1(t, 4);
  CHECK(l.lim1 == Lim1::Zero);
  REQUIRE(l.lim);
  CHECK(l.lim->isomorphic(a));
}

TEST_CASE("nilpotency") {
  CHECK(is_nilpotent(mult(Zmod(8), 2)));
  CHECK(!is_nilpotent(mult(Zmod(8), 3)));
  CHECK(!is_nilpotent(mult(Zmod(0), 2)));
  AbGroup z3 = AbGroup::free(ZZ, 3);
  CHECK(is_nilpotent(GroupHom(z3, z3, Matrix::from_rows(ZZ, {{0, 1, 5}, {0, 0, 1}, {0, 0, 0}}))));
  CHECK(power(mult(Zmod(0), 3), 3).matrix() == Matrix::from_rows(ZZ, {{27}}));
}
