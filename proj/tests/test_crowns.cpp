#include <gtest/gtest.h>

#include "fingen/crowns.hpp"
#include "oracles.hpp"

using namespace fingen;
using oracle::cyc;

namespace {

PermGroup sym(std::size_t n) {
  std::vector<Point> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<Point>(i);
  return PermGroup(n, {cyc(n, {c}), cyc(n, {{0, 1}})});
}

PermGroup cyclic(std::size_t n) {
  std::vector<Point> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<Point>(i);
  return PermGroup(n, {cyc(n, {c})});
}

PermGroup a5() { return PermGroup(5, {cyc(5, {{0, 1, 2}}), cyc(5, {{0, 1, 2, 3, 4}})}); }
PermGroup c2cube() { return PermGroup(6, {cyc(6, {{0, 1}}), cyc(6, {{2, 3}}), cyc(6, {{4, 5}})}); }
PermGroup s3xc2() { return PermGroup(5, {cyc(5, {{0, 1, 2}}), cyc(5, {{0, 1}}), cyc(5, {{3, 4}})}); }
PermGroup ex2b2() {
  return PermGroup(8, {cyc(8, {{0, 1, 2}}), cyc(8, {{3, 4, 5}}), cyc(8, {{1, 2}, {4, 5}}), cyc(8, {{6, 7}})});
}
PermGroup c3() { return PermGroup(3, {cyc(3, {{0, 1, 2}})}); }

GfpModule module(gfp::Scalar p, std::vector<std::vector<std::vector<gfp::Scalar>>> mats) {
  GfpModule m;
  m.prime = p;
  m.dimension = mats.front().size();
  for (const auto& rows : mats) {
    gfp::Matrix a(0, m.dimension);
    for (const auto& r : rows) a.append_row(r);
    m.action.push_back(a);
  }
  return m;
}

const ChiefFactor& factor_of_order(const ChiefSeries& cs, std::size_t order) {
  for (const auto& f : cs.factors)
    if (f.order() == order) return f;
  throw std::runtime_error("no factor of that order");
}

}  // namespace

TEST(MonolithicOf, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(sym(4)));
    auto cs = s.chief_series();
    auto l = monolithic_of(s, cs.factors[0]);
    EXPECT_EQ(l.order(), 24u);
    EXPECT_EQ(l.degree(), 4u);
    Structure ls(FiniteGroup::from_perm_group(l));
    EXPECT_TRUE(ls.monolithic_primitive());
    EXPECT_EQ(ls.socle().count(), 4u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(cyclic(6)));
    auto cs = s.chief_series();
    auto l = monolithic_of(s, factor_of_order(cs, 2));
    EXPECT_EQ(l.order(), 2u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(s3xc2()));
    auto cs = s.chief_series();
    auto l = monolithic_of(s, factor_of_order(cs, 3));
    EXPECT_EQ(l.order(), 6u);
    EXPECT_EQ(l.degree(), 3u);
    EXPECT_FALSE(is_abelian(l));
  }
  {
    Structure s(FiniteGroup::from_perm_group(a5()));
    auto cs = s.chief_series();
    auto l = monolithic_of(s, cs.factors[0]);
    EXPECT_EQ(l.order(), 60u);
  }
}

TEST(MonolithicOf, RejectsFrattiniFactor) {
  Structure s(FiniteGroup::from_perm_group(cyclic(4)));
  auto cs = s.chief_series();
  EXPECT_THROW(monolithic_of(s, cs.factors[0]), InvalidArgument);
}

TEST(CrownPower, OrderLaw) {
  auto s3 = sym(3);
  for (std::size_t k = 1; k <= 4; ++k) {
    auto l = crown_power(s3, c3(), k);
    std::uint64_t expected = 6;
    for (std::size_t i = 1; i < k; ++i) expected *= 3;
    EXPECT_EQ(l.order(), expected);
    EXPECT_EQ(l.degree(), 3 * k);
  }
  EXPECT_EQ(crown_power(s3, c3(), 2).order(), 18u);
  auto x = crown_power(s3, c3(), 2);
  EXPECT_EQ(oracle::elements(x.degree(), x.generators()).size(), 18u);
  EXPECT_EQ(crown_power(a5(), a5(), 2).order(), 3600u);
}

TEST(CrownPower, RejectsNonSocle) {
  PermGroup triv(3, {});
  EXPECT_THROW(crown_power(sym(3), triv, 2), InvalidArgument);
  EXPECT_THROW(crown_power(sym(3), PermGroup(3, {cyc(3, {{0, 1}})}), 2), InvalidArgument);
}

TEST(Eulerian, Examples) {
  Structure c2(FiniteGroup::from_perm_group(cyclic(2)));
  for (std::size_t m = 1; m <= 5; ++m) EXPECT_EQ(eulerian_mobius(c2, m), (1 << m) - 1);
  Structure s3(FiniteGroup::from_perm_group(sym(3)));
  EXPECT_EQ(eulerian_mobius(s3, 2), 18);
  EXPECT_EQ(eulerian_brute(s3.group(), 2), 18u);
  EXPECT_EQ(oracle::generating_tuples(3, oracle::elements(3, sym(3).generators()), 2), 18u);
  Structure a(FiniteGroup::from_perm_group(a5()));
  EXPECT_EQ(eulerian_mobius(a, 2), 2280);
  EXPECT_EQ(eulerian_brute(a.group(), 2), 2280u);
}

TEST(Eulerian, MobiusMatchesBruteForce) {
  for (const auto& g : {sym(3), sym(4), cyclic(6), c2cube(), s3xc2(), ex2b2(), a5()}) {
    if (g.order() > 60) continue;
    Structure s(FiniteGroup::from_perm_group(g));
    for (std::size_t m = 1; m <= 2; ++m)
      EXPECT_EQ(static_cast<std::uint64_t>(eulerian_mobius(s, m)), eulerian_brute(s.group(), m));
  }
}

TEST(AutOrder, Examples) {
  EXPECT_EQ(aut_order(FiniteGroup::from_perm_group(cyclic(2))), 1u);
  EXPECT_EQ(aut_order(FiniteGroup::from_perm_group(sym(3))), 6u);
  EXPECT_EQ(aut_order(FiniteGroup::from_perm_group(a5())), 120u);
  EXPECT_EQ(aut_order(FiniteGroup::from_perm_group(c2cube())), 168u);
  EXPECT_EQ(aut_order(FiniteGroup::from_perm_group(sym(4))), 24u);
}

TEST(CrownCheck, A5Threshold) {
  Structure a(FiniteGroup::from_perm_group(a5()));
  auto c = crown_generation_check(a, 2, 19);
  EXPECT_EQ(c.phi, 2280);
  EXPECT_EQ(c.aut, 120u);
  EXPECT_EQ(c.threshold, 19u);
  EXPECT_TRUE(c.predicted);
  EXPECT_FALSE(crown_generation_check(a, 2, 20).predicted);
  EXPECT_TRUE(crown_generation_check(a, 2, 1).predicted);
  Structure s3(FiniteGroup::from_perm_group(sym(3)));
  EXPECT_THROW(crown_generation_check(s3, 2, 1), InvalidArgument);
}

TEST(CrownCheck, A5SquaredIsTwoGenerated) {
  auto g = crown_power(a5(), a5(), 2);
  EXPECT_EQ(g.degree(), 10u);
  Structure s(FiniteGroup::from_perm_group(g));
  EXPECT_EQ(GenSearch(s).d(), 2u);
}

TEST(H1, Examples) {
  auto c2 = FiniteGroup::from_perm_group(cyclic(2));
  EXPECT_EQ(h1_dimension(c2, module(3, {{{2}}})), 0u);
  EXPECT_EQ(h1_dimension(c2, module(2, {{{1}}})), 1u);
  auto c3g = FiniteGroup::from_perm_group(c3());
  EXPECT_EQ(h1_dimension(c3g, module(2, {{{1}}})), 0u);
  EXPECT_EQ(h1_dimension(c3g, module(3, {{{1}}})), 1u);
}

TEST(H1, RejectsBadModules) {
  auto c3g = FiniteGroup::from_perm_group(c3());
  auto bad = module(3, {{{2}}});  // order-2 matrix for an order-3 generator
  EXPECT_THROW(validate(c3g, bad), InvalidArgument);
  Limits lim;
  lim.cohomology_cap = 2;
  EXPECT_THROW(h1_dimension(c3g, module(3, {{{1}}}), lim), CapExceeded);
}

TEST(Irreducible, Examples) {
  // GF(2)^2 with C3 acting by an order-3 matrix: irreducible
  EXPECT_TRUE(is_irreducible(module(2, {{{0, 1}, {1, 1}}})));
  // GF(3)^2 with a unipotent matrix: reducible
  EXPECT_FALSE(is_irreducible(module(3, {{{1, 1}, {0, 1}}})));
  EXPECT_FALSE(is_irreducible(module(2, {{{1, 0}, {0, 1}}})));
}

TEST(ModuleInvariants, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(sym(3)));
    auto cs = s.chief_series();
    auto inv = module_invariants(s, cs, factor_of_order(cs, 3));
    EXPECT_EQ(inv.r, 1u);
    EXPECT_EQ(inv.t, 0u);
    EXPECT_EQ(inv.delta, 1u);
    EXPECT_EQ(inv.s, 1u);
    EXPECT_EQ(inv.h, 2u);
  }
  {
    auto g = crown_power(sym(3), c3(), 2);
    Structure s(FiniteGroup::from_perm_group(g));
    auto cs = s.chief_series();
    auto inv = module_invariants(s, cs, factor_of_order(cs, 3));
    EXPECT_EQ(inv.delta, 2u);
    EXPECT_EQ(inv.r, 1u);
    EXPECT_EQ(inv.t, 0u);
    EXPECT_EQ(inv.s, 2u);
    EXPECT_EQ(inv.h, 3u);
    EXPECT_EQ(GenSearch(s).d(), 3u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(c2cube()));
    auto cs = s.chief_series();
    auto inv = module_invariants(s, cs, cs.factors[0]);
    EXPECT_EQ(inv.h, 3u);
    EXPECT_EQ(inv.delta, 3u);
  }
}

TEST(ModuleInvariants, IdentitiesAndGeneratorFormula) {
  std::vector<PermGroup> groups{sym(3),        sym(4),   cyclic(6),  c2cube(), s3xc2(), ex2b2(),
                                cyclic(4),     cyclic(12), crown_power(sym(3), c3(), 3),
                                PermGroup(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 2}})})};
  for (const auto& g : groups) {
    Structure s(FiniteGroup::from_perm_group(g));
    auto cs = s.chief_series();
    for (const auto& f : cs.factors) {
      if (!f.abelian || f.frattini) continue;
      auto inv = module_invariants(s, cs, f);
      EXPECT_EQ(inv.s, inv.t + inv.delta);
      EXPECT_LT(inv.t, inv.r);
      EXPECT_LE(inv.h, inv.delta + 1);
    }
    EXPECT_EQ(generating_h(s, cs), GenSearch(s).d());
  }
}
