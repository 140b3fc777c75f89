#include <gtest/gtest.h>

#include <random>

#include "fingen/perm_group.hpp"
#include "oracles.hpp"

using namespace fingen;
using oracle::cyc;

namespace {

PermGroup sym(std::size_t n) {
  std::vector<Point> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<Point>(i);
  return PermGroup(n, {cyc(n, {c}), cyc(n, {{0, 1}})});
}

PermGroup klein4() { return PermGroup(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})}); }

// x -> x+1 and x -> -1/x on the projective line over GF(7), infinity = 7.
PermGroup psl27() {
  std::vector<Point> shift(8), inv(8);
  for (Point x = 0; x < 7; ++x) shift[x] = (x + 1) % 7;
  shift[7] = 7;
  inv[0] = 7;
  inv[7] = 0;
  for (Point x = 1; x < 7; ++x)
    for (Point y = 1; y < 7; ++y)
      if ((x * y) % 7 == 6) inv[x] = y;
  return PermGroup(8, {Permutation(shift), Permutation(inv)});
}

}  // namespace

TEST(Compose, Involution) {
  auto t = cyc(3, {{0, 1}});
  EXPECT_TRUE(compose(t, t).is_identity());
}

TEST(Compose, CycleSquare) {
  auto c = cyc(3, {{0, 1, 2}});
  EXPECT_EQ(compose(c, c), cyc(3, {{0, 2, 1}}));
}

TEST(Compose, LeftToRightConvention) {
  auto p = compose(cyc(3, {{0, 1}}), cyc(3, {{1, 2}}));
  EXPECT_EQ(p[0], 2u);
  EXPECT_EQ(p[2], 1u);
  EXPECT_EQ(p[1], 0u);
}

TEST(Compose, DegreeMismatchThrows) { EXPECT_THROW(compose(cyc(3, {{0, 1}}), cyc(4, {{0, 1}})), InvalidArgument); }

TEST(Permutation, RejectsNonBijection) { EXPECT_THROW(Permutation(std::vector<Point>{0, 0, 1}), InvalidArgument); }

TEST(Permutation, InverseProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto p = oracle::random_perm(1 + i % 12, rng);
    EXPECT_TRUE(compose(p, p.inverse()).is_identity());
    EXPECT_TRUE(compose(p.inverse(), p).is_identity());
  }
}

TEST(Permutation, ToString) {
  EXPECT_EQ(Permutation::identity(3).to_string(), "()");
  EXPECT_EQ(cyc(5, {{0, 1, 2}, {3, 4}}).to_string(), "(0 1 2)(3 4)");
}

TEST(GroupOrder, Examples) {
  EXPECT_EQ(sym(4).order(), 24u);
  EXPECT_EQ(PermGroup(5, {cyc(5, {{0, 1, 2, 3, 4}}), cyc(5, {{0, 1}})}).order(), 120u);
  auto g = psl27();
  EXPECT_EQ(g.order(), 168u);
  EXPECT_EQ(oracle::elements(8, g.generators()).size(), 168u);
}

TEST(GroupOrder, MatchesExhaustiveClosure) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 2 + i % 5;
    std::vector<Permutation> gens;
    for (int k = 0; k < 1 + i % 3; ++k) gens.push_back(oracle::random_perm(n, rng));
    PermGroup g(n, gens);
    EXPECT_EQ(g.order(), oracle::elements(n, gens).size());
    EXPECT_EQ(closure(n, g.generators()).order(), g.order());
  }
}

TEST(Contains, Examples) {
  PermGroup a4(4, {cyc(4, {{0, 1, 2}}), cyc(4, {{1, 2, 3}})});
  EXPECT_FALSE(a4.contains(cyc(4, {{0, 1}})));
  EXPECT_TRUE(a4.contains(Permutation::identity(4)));
  PermGroup c6(6, {cyc(6, {{0, 1, 2, 3, 4, 5}})});
  EXPECT_TRUE(c6.contains(cyc(6, {{0, 2, 4}, {1, 3, 5}})));
}

TEST(Contains, MembershipOracleOnSmallGroups) {
  std::mt19937_64 rng(3);
  auto all = oracle::symmetric(6);
  for (int i = 0; i < 12; ++i) {
    std::vector<Permutation> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(oracle::random_perm(6, rng));
    if (i % 3 == 0) gens.pop_back();
    PermGroup g(6, gens);
    auto el = oracle::elements(6, gens);
    if (el.size() > 200) continue;
    for (const auto& p : all) EXPECT_EQ(g.contains(p), el.count(p) == 1);
  }
}

TEST(Closure, Examples) {
  EXPECT_EQ(klein4().order(), 4u);
  EXPECT_EQ(closure(3, {cyc(3, {{0, 1, 2}}), cyc(3, {{0, 1}})}).order(), 6u);
  EXPECT_EQ(closure(3, {}).order(), 1u);
}

TEST(NormalClosure, Examples) {
  auto s4 = sym(4);
  auto k = normal_closure(s4, {cyc(4, {{0, 1}, {2, 3}})});
  EXPECT_TRUE(same_group(k, klein4()));
  EXPECT_TRUE(is_normal(s4, k));
  EXPECT_EQ(normal_closure(s4, {Permutation::identity(4)}).order(), 1u);
  PermGroup a5(5, {cyc(5, {{0, 1, 2}}), cyc(5, {{0, 1, 2, 3, 4}})});
  EXPECT_EQ(normal_closure(a5, {cyc(5, {{0, 1}, {2, 3}})}).order(), 60u);
  EXPECT_THROW(normal_closure(a5, {cyc(5, {{0, 1}})}), InvalidArgument);
}

TEST(Centralizer, Examples) {
  auto s4 = sym(4);
  EXPECT_TRUE(same_group(centralizer_of_subgroup(s4, klein4()), klein4()));
  EXPECT_EQ(centralizer_of_subgroup(s4, closure(4, {})).order(), 24u);
  PermGroup c6(6, {cyc(6, {{0, 1, 2, 3, 4, 5}})});
  PermGroup c3(6, {cyc(6, {{0, 2, 4}, {1, 3, 5}})});
  EXPECT_EQ(centralizer_of_subgroup(c6, c3).order(), 6u);
}

TEST(Centralizer, BruteForce) {
  auto s4 = sym(4);
  auto k = klein4();
  auto c = centralizer_of_subgroup(s4, k);
  for (const auto& g : oracle::elements(4, s4.generators())) {
    bool commutes = true;
    for (const auto& x : oracle::elements(4, k.generators())) commutes = commutes && (g * x == x * g);
    EXPECT_EQ(c.contains(g), commutes);
  }
}

TEST(Quotient, Examples) {
  auto s4 = sym(4);
  auto [q, pi] = quotient(s4, klein4());
  EXPECT_EQ(q.order(), 6u);
  EXPECT_FALSE(is_abelian(q));
  EXPECT_TRUE(pi.is_well_defined());
  EXPECT_TRUE(pi.check_random_relators(100, 1));

  PermGroup c6(6, {cyc(6, {{0, 1, 2, 3, 4, 5}})});
  auto [q1, pi1] = quotient(c6, closure(6, {}));
  EXPECT_EQ(q1.order(), 6u);
  EXPECT_EQ(q1.degree(), 6u);
  PermGroup c2(6, {cyc(6, {{0, 3}, {1, 4}, {2, 5}})});
  EXPECT_EQ(quotient(c6, c2).first.order(), 3u);
  EXPECT_THROW(quotient(s4, closure(4, {cyc(4, {{0, 1}})})), InvalidArgument);
}

TEST(Quotient, OrderLawAndProjection) {
  auto g = psl27();
  auto s4 = sym(4);
  auto a4 = closure(4, {cyc(4, {{0, 1, 2}}), cyc(4, {{1, 2, 3}})});
  for (const auto& n : {klein4(), a4, s4}) {
    auto [q, pi] = quotient(s4, n);
    EXPECT_EQ(s4.order(), n.order() * q.order());
    for (const auto& x : oracle::elements(4, n.generators())) EXPECT_TRUE(pi(x).is_identity());
  }
  auto [q, pi] = quotient(g, closure(8, {}));
  EXPECT_EQ(q.order(), 168u);
}

TEST(Homomorphism, DetectsBadGeneratorMap) {
  PermGroup c3(3, {cyc(3, {{0, 1, 2}})});
  PermGroup c2(2, {cyc(2, {{0, 1}})});
  Homomorphism bad(c3, c2, {cyc(2, {{0, 1}})});
  EXPECT_FALSE(bad.is_well_defined());
  EXPECT_FALSE(bad.check_random_relators(100, 5));
  Homomorphism sign(sym(3), c2, {Permutation::identity(2), cyc(2, {{0, 1}})});
  EXPECT_TRUE(sign.is_well_defined());
  EXPECT_EQ(sign(cyc(3, {{0, 2}})), cyc(2, {{0, 1}}));
  EXPECT_TRUE(sign(cyc(3, {{0, 2, 1}})).is_identity());
}

TEST(Predicates, Examples) {
  EXPECT_TRUE(is_soluble(sym(4)));
  PermGroup a5(5, {cyc(5, {{0, 1, 2}}), cyc(5, {{0, 1, 2, 3, 4}})});
  EXPECT_FALSE(is_soluble(a5));
  PermGroup c8(8, {cyc(8, {{0, 1, 2, 3, 4, 5, 6, 7}})});
  PermGroup c6(6, {cyc(6, {{0, 1, 2, 3, 4, 5}})});
  EXPECT_TRUE(is_cyclic_of_prime_power_order(c8));
  EXPECT_FALSE(is_cyclic_of_prime_power_order(c6));
  EXPECT_TRUE(is_cyclic_of_prime_power_order(closure(3, {})));
  EXPECT_FALSE(is_cyclic_of_prime_power_order(klein4()));
  EXPECT_TRUE(is_pgroup(klein4()));
  EXPECT_FALSE(is_pgroup(c6));
}

TEST(Predicates, DerivedSeriesOfS4) {
  auto ds = derived_series(sym(4));
  ASSERT_EQ(ds.size(), 4u);
  EXPECT_EQ(ds[0].order(), 24u);
  EXPECT_EQ(ds[1].order(), 12u);
  EXPECT_TRUE(same_group(ds[2], klein4()));
  EXPECT_EQ(ds[3].order(), 1u);
  // brute-force commutator closure
  auto el = oracle::elements(4, sym(4).generators());
  std::vector<Permutation> comms;
  for (const auto& a : el)
    for (const auto& b : el) comms.push_back(commutator(a, b));
  EXPECT_EQ(oracle::elements(4, comms).size(), 12u);
}

TEST(Chain, CanonicalCosetRepresentative) {
  auto s4 = sym(4);
  auto k = klein4();
  for (const auto& x : oracle::elements(4, s4.generators()))
    for (const auto& y : oracle::elements(4, k.generators()))
      EXPECT_EQ(k.chain().canonical_right_coset(x), k.chain().canonical_right_coset(y * x));
}
