#include <gtest/gtest.h>

#include "fingen/genset.hpp"
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
PermGroup d8() { return PermGroup(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{0, 2}})}); }
PermGroup ex2b2() {
  return PermGroup(8, {cyc(8, {{0, 1, 2}}), cyc(8, {{3, 4, 5}}), cyc(8, {{1, 2}, {4, 5}}), cyc(8, {{6, 7}})});
}

// Largest irredundant generating set, by plain subset enumeration.
std::size_t brute_m(const PermGroup& g) {
  auto el = oracle::elements(g.degree(), g.generators());
  std::vector<Permutation> v(el.begin(), el.end());
  std::size_t best = 0;
  std::vector<Permutation> pick;
  auto independent = [&](const std::vector<Permutation>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<Permutation> rest;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) rest.push_back(s[j]);
      if (oracle::elements(g.degree(), rest).count(s[i])) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (oracle::elements(g.degree(), pick).size() == el.size()) best = std::max(best, pick.size());
    for (std::size_t i = from; i < v.size(); ++i) {
      pick.push_back(v[i]);
      if (independent(pick)) self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 1);
  return best;
}

std::size_t brute_d(const PermGroup& g) {
  auto el = oracle::elements(g.degree(), g.generators());
  std::vector<Permutation> v(el.begin(), el.end());
  for (std::size_t k = 0;; ++k) {
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      std::vector<Permutation> t;
      for (auto i : idx) t.push_back(v[i]);
      if (oracle::elements(g.degree(), t).size() == el.size()) return k;
      std::size_t p = 0;
      while (p < k && ++idx[p] == v.size()) idx[p++] = 0;
      if (p == k) break;
    }
  }
}

}  // namespace

TEST(Independence, Examples) {
  PermGroup s3 = sym(3);
  EXPECT_TRUE(is_independent_generating(s3, {cyc(3, {{0, 1}}), cyc(3, {{0, 1, 2}})}));
  EXPECT_FALSE(is_independent_generating(s3, {cyc(3, {{0, 1}}), cyc(3, {{0, 2}}), cyc(3, {{0, 1, 2}})}));
  PermGroup c2 = cyclic(2);
  std::vector<std::uint64_t> w;
  EXPECT_TRUE(is_independent_generating(c2, {cyc(2, {{0, 1}})}, &w));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], 1u);
  EXPECT_THROW(is_independent_generating(PermGroup(3, {cyc(3, {{0, 1, 2}})}), {cyc(3, {{0, 1}})}), InvalidArgument);
}

TEST(MinimalGenerators, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(cyclic(6)));
    EXPECT_EQ(GenSearch(s).d(), 1u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(sym(4)));
    EXPECT_EQ(GenSearch(s).d(), 2u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(c2cube()));
    EXPECT_EQ(GenSearch(s).d(), 3u);
  }
}

TEST(MinimalGenerators, AgreesWithBruteForce) {
  for (const auto& g : {sym(3), sym(4), cyclic(6), c2cube(), s3xc2(), d8(), cyclic(1)}) {
    Structure s(FiniteGroup::from_perm_group(g));
    EXPECT_EQ(GenSearch(s).d(), brute_d(g));
  }
}

TEST(MaximalIndependent, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(a5()));
    GenSearch gs(s);
    auto w = gs.m();
    EXPECT_EQ(w.size(), 3u);
    EXPECT_TRUE(is_independent_generating(a5(), gs.to_permutations(w)));
  }
  {
    Structure s(FiniteGroup::from_perm_group(s3xc2()));
    EXPECT_EQ(GenSearch(s).m().size(), 3u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(c2cube()));
    EXPECT_EQ(GenSearch(s).m().size(), 3u);
  }
}

TEST(MaximalIndependent, AgreesWithBruteForce) {
  for (const auto& g : {sym(3), sym(4), cyclic(6), c2cube(), s3xc2(), d8(), cyclic(12)}) {
    Structure s(FiniteGroup::from_perm_group(g));
    GenSearch gs(s);
    std::size_t expected = brute_m(g);
    EXPECT_EQ(gs.search_max().size(), expected);
    EXPECT_EQ(gs.m().size(), expected);
  }
}

TEST(MaximalIndependent, WitnessRecordsDeletionOrders) {
  Structure s(FiniteGroup::from_perm_group(sym(4)));
  GenSearch gs(s);
  auto w = gs.m();
  ASSERT_EQ(w.witness.size(), w.size());
  std::vector<std::size_t> check;
  EXPECT_TRUE(is_independent_generating(s.group(), w.elements, &check));
  EXPECT_EQ(check, w.witness);
  for (auto c : w.witness) EXPECT_LT(c, 24u);
}

TEST(MaximalIndependent, PrimePowerRestrictionAgrees) {
  for (const auto& g : {sym(3), sym(4), s3xc2(), d8(), cyclic(12), ex2b2()}) {
    Structure s(FiniteGroup::from_perm_group(g));
    GensetOptions on;
    on.prime_power_candidates = true;
    on.soluble_fast_path = false;
    GensetOptions off;
    off.soluble_fast_path = false;
    EXPECT_EQ(GenSearch(s, on).m().size(), GenSearch(s, off).m().size());
  }
}

TEST(Spectrum, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(sym(4)));
    auto p = GenSearch(s).spectrum();
    EXPECT_EQ(p.d, 2u);
    EXPECT_EQ(p.m, 3u);
    EXPECT_EQ(p.spectrum.size(), 2u);
    for (const auto& [k, w] : p.spectrum) {
      EXPECT_EQ(w.size(), k);
      EXPECT_TRUE(is_independent_generating(s.group(), w.elements));
    }
  }
  {
    Structure s(FiniteGroup::from_perm_group(c2cube()));
    auto p = GenSearch(s).spectrum();
    ASSERT_EQ(p.spectrum.size(), 1u);
    EXPECT_EQ(p.spectrum.begin()->first, 3u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(ex2b2()));
    auto p = GenSearch(s).spectrum();
    EXPECT_EQ(p.d, 3u);
    EXPECT_EQ(p.m, 4u);
    ASSERT_EQ(p.spectrum.size(), 2u);
    for (const auto& [k, w] : p.spectrum) EXPECT_TRUE(is_independent_generating(s.group(), w.elements));
  }
}

TEST(Spectrum, SubsetHeredity) {
  Structure s(FiniteGroup::from_perm_group(ex2b2()));
  auto p = GenSearch(s).spectrum();
  const auto& g = s.group();
  for (const auto& [k, w] : p.spectrum) {
    const auto& el = w.elements;
    for (std::size_t mask = 1; mask < (std::size_t{1} << el.size()); ++mask) {
      std::vector<Elem> sub;
      for (std::size_t i = 0; i < el.size(); ++i)
        if (mask >> i & 1) sub.push_back(el[i]);
      for (std::size_t i = 0; i < sub.size(); ++i) {
        std::vector<Elem> rest;
        for (std::size_t j = 0; j < sub.size(); ++j)
          if (j != i) rest.push_back(sub[j]);
        EXPECT_FALSE(g.closure(rest).test(sub[i]));
      }
    }
  }
}

TEST(Bounds, Examples) {
  {
    Structure s(FiniteGroup::from_perm_group(sym(4)));
    auto b = GenSearch(s).bounds();
    EXPECT_EQ(b.a, 3u);
    EXPECT_EQ(b.b, 0u);
    EXPECT_EQ(b.lower, 3u);
    EXPECT_EQ(b.upper, 4u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(a5()));
    auto b = GenSearch(s).bounds();
    EXPECT_EQ(b.a, 1u);
    EXPECT_EQ(b.b, 1u);
    EXPECT_EQ(b.lower, 2u);
    EXPECT_EQ(b.upper, 4u);
  }
  {
    Structure s(FiniteGroup::from_perm_group(cyclic(8)));
    auto b = GenSearch(s).bounds();
    EXPECT_EQ(b.a, 1u);
    EXPECT_EQ(b.b, 0u);
    EXPECT_EQ(b.lower, 1u);
    EXPECT_EQ(b.upper, 3u);
  }
}

TEST(Determinism, RepeatedRunsAgree) {
  Structure s1(FiniteGroup::from_perm_group(sym(4)));
  Structure s2(FiniteGroup::from_perm_group(sym(4)));
  auto p1 = GenSearch(s1).spectrum();
  auto p2 = GenSearch(s2).spectrum();
  for (const auto& [k, w] : p1.spectrum) EXPECT_EQ(w.elements, p2.spectrum.at(k).elements);
}

TEST(TimeBudget, ExpiryIsAnError) {
  Limits lim;
  lim.time_budget_seconds = -1.0;
  Structure s(FiniteGroup::from_perm_group(a5()), lim);
  EXPECT_THROW(GenSearch(s).m(), CapExceeded);
}
