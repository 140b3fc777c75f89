#pragma once

#include <string>
#include <vector>

#include "genset.hpp"
#include "structure.hpp"

namespace fingen {

enum class Theorem { MdEqual, Nonsoluble, SolubleCases };

inline const char* theorem_tag(Theorem t) {
  switch (t) {
    case Theorem::MdEqual: return "MD_EQUAL";
    case Theorem::Nonsoluble: return "NONSOLUBLE_MONOLITHIC";
    case Theorem::SolubleCases: return "SOLUBLE_CASES";
  }
  return "?";
}

/// One structural branch that G was found to satisfy. For the soluble
/// cases, `t` copies of V (order v_order) under H (order h_order); for the
/// d = m bullets, `t` is the number of isomorphic simple summands.
struct CaseMatch {
  int number = 0;
  std::size_t t = 0;
  std::size_t v_order = 0;
  std::size_t h_order = 0;
  bool h_abelian = false;
  std::string detail;
};

struct TheoremVerdict {
  Theorem theorem = Theorem::MdEqual;
  bool applicable = false;
  int case_number = 0;   // lowest matching branch, 0 if none
  bool ok = true;        // false only for an applicable group breaking the claim
  std::string reason;
  std::vector<CaseMatch> matches;
  std::vector<std::string> evidence;
};

/// d and m of the group under test, computed once by the caller.
struct DM {
  std::size_t d = 0;
  std::size_t m = 0;
};

inline DM compute_dm(Structure& st) {
  GenSearch gs(st);
  DM r;
  r.d = gs.d();
  r.m = gs.m().size();
  return r;
}

namespace detail {

/// The prime p when H is a non-trivial elementary abelian p-group, else 0.
inline unsigned elementary_abelian_prime(const FiniteGroup& g, const ElementSet& h) {
  if (h.count() <= 1 || !g.is_abelian_set(h)) return 0;
  unsigned p = 0;
  for (Elem x : h.elements()) {
    if (x == 0) continue;
    unsigned o = g.order_of(x);
    if (!is_prime(o) || (p != 0 && o != p)) return 0;
    p = o;
  }
  return p;
}

inline bool cyclic_of_prime_power_order(const FiniteGroup& q) {
  if (q.size() == 1) return true;
  if (!is_prime_power(q.size())) return false;
  for (Elem x = 0; x < q.size(); ++x)
    if (q.order_of(x) == q.size()) return true;
  return false;
}

inline bool is_cyclic(const FiniteGroup& q) {
  for (Elem x = 0; x < q.size(); ++x)
    if (q.order_of(x) == q.size()) return true;
  return false;
}

inline bool is_abelian_group(const FiniteGroup& q) { return q.is_abelian_set(q.whole()); }

/// Chief factors of G inside the normal subgroup N, bottom up.
inline std::vector<ChiefFactor> factors_inside(Structure& st, const ElementSet& n) {
  std::vector<ChiefFactor> out;
  ElementSet y = st.group().trivial();
  while (!(y == n)) {
    bool found = false;
    for (const auto& x : st.minimal_normal_above(y))
      if (x.subset_of(n)) {
        out.push_back(st.make_factor(x, y));
        y = x;
        found = true;
        break;
      }
    if (!found) throw Error("no chief factor inside a normal subgroup");
  }
  return out;
}

/// N = V^t, a complemented elementary abelian normal subgroup whose chief
/// factors are pairwise G-isomorphic (the single module V).
struct PowerSplit {
  ElementSet n;
  std::size_t t = 0;
  std::size_t v_order = 0;
  bool faithful = false;   // G acts on V with kernel exactly N
};

inline std::vector<PowerSplit> power_splits(Structure& st) {
  const auto& g = st.group();
  std::vector<PowerSplit> out;
  for (const auto& n : st.normal_subgroups()) {
    if (n.count() == g.size() || elementary_abelian_prime(g, n) == 0) continue;
    if (!st.has_complement(n, g.trivial())) continue;
    auto fs = factors_inside(st, n);
    bool isotypic = true;
    for (std::size_t i = 1; i < fs.size() && isotypic; ++i) isotypic = st.gequivalent_abelian(fs[0], fs[i]);
    if (!isotypic) continue;
    PowerSplit s;
    s.n = n;
    s.t = fs.size();
    s.v_order = fs[0].order();
    s.faithful = st.centralizer_of_factor(fs[0].upper, fs[0].lower) == n;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string num(std::size_t v) { return std::to_string(v); }

}  // namespace detail

/// d = m: G soluble, and either elementary abelian or P Q with Q a cyclic
/// q-group acting faithfully on P = (m-1) copies of one simple Q-module.
/// Assumes nothing; non-applicability is reported, never thrown.
inline TheoremVerdict verify_md_equal(Structure& st, const DM& dm) {
  TheoremVerdict v;
  v.theorem = Theorem::MdEqual;
  const auto& g = st.group();
  if (st.frattini().count() != 1) {
    v.reason = "Frattini subgroup is not trivial";
    return v;
  }
  if (dm.d != dm.m) {
    v.reason = "d = " + detail::num(dm.d) + " differs from m = " + detail::num(dm.m);
    return v;
  }
  v.applicable = true;
  if (!st.is_soluble()) {
    v.ok = false;
    v.reason = "group is not soluble";
    return v;
  }
  if (unsigned p = detail::elementary_abelian_prime(g, g.whole()); p != 0 || g.size() == 1) {
    CaseMatch c;
    c.number = 1;
    c.t = big_omega(g.size());
    c.v_order = p;
    c.detail = g.size() == 1 ? "trivial group" : "elementary abelian of order " + detail::num(g.size());
    v.matches.push_back(c);
  }
  auto primes = factorize(g.size());
  if (primes.size() == 2) {
    for (const auto& [p, e] : primes) {
      const std::size_t pn = ipow(p, static_cast<unsigned>(e));
      for (const auto& n : st.normal_subgroups()) {
        if (n.count() != pn || detail::elementary_abelian_prime(g, n) != p) continue;
        FiniteGroup q = g.quotient(n);
        if (!detail::is_cyclic(q) || q.size() == 1) continue;
        if (!(st.centralizer_of_factor(n, g.trivial()) == n)) continue;  // faithful
        auto fs = detail::factors_inside(st, n);
        bool isotypic = true;
        for (std::size_t i = 1; i < fs.size() && isotypic; ++i) isotypic = st.gequivalent_abelian(fs[0], fs[i]);
        if (!isotypic) continue;
        CaseMatch c;
        c.number = 2;
        c.t = fs.size();
        c.v_order = fs[0].order();
        c.h_order = q.size();
        c.h_abelian = true;
        c.detail = "P of order " + detail::num(pn) + " = " + detail::num(c.t) + " copies of a simple module of order " +
                   detail::num(c.v_order) + ", Q cyclic of order " + detail::num(q.size());
        if (c.t == dm.m - 1) v.matches.push_back(c);
        else v.evidence.push_back("summand count " + detail::num(c.t) + " differs from m-1 = " + detail::num(dm.m - 1));
      }
    }
  }
  for (const auto& c : v.matches) v.evidence.push_back("bullet " + std::to_string(c.number) + ": " + c.detail);
  if (v.matches.empty()) {
    v.ok = false;
    v.reason = "neither bullet matches";
  } else {
    v.case_number = v.matches.front().number;
  }
  return v;
}

/// Frat = 1, m = d + 1, G insoluble: d = 2, G monolithic primitive and
/// G/soc(G) cyclic of prime power order.
inline TheoremVerdict verify_nonsoluble(Structure& st, const DM& dm) {
  TheoremVerdict v;
  v.theorem = Theorem::Nonsoluble;
  const auto& g = st.group();
  if (st.frattini().count() != 1) {
    v.reason = "Frattini subgroup is not trivial";
    return v;
  }
  if (dm.m != dm.d + 1) {
    v.reason = "m - d is not 1";
    return v;
  }
  if (st.is_soluble()) {
    v.reason = "group is soluble";
    return v;
  }
  v.applicable = true;
  bool d2 = dm.d == 2;
  bool mono = st.monolithic_primitive();
  ElementSet soc = st.socle();
  FiniteGroup top = g.quotient(soc);
  bool cyc = detail::cyclic_of_prime_power_order(top);
  v.evidence.push_back("d = " + detail::num(dm.d));
  v.evidence.push_back(std::string("monolithic primitive: ") + (mono ? "yes" : "no"));
  v.evidence.push_back("socle order " + detail::num(soc.count()) + ", G/soc order " + detail::num(top.size()) +
                       (cyc ? " (cyclic of prime power order)" : " (not cyclic of prime power order)"));
  v.ok = d2 && mono && cyc;
  if (v.ok) {
    v.case_number = 1;
    CaseMatch c;
    c.number = 1;
    c.v_order = soc.count();
    c.h_order = top.size();
    c.h_abelian = true;
    c.detail = "monolithic with G/soc cyclic of order " + detail::num(top.size());
    v.matches.push_back(c);
  } else {
    v.reason = !d2 ? "d is not 2" : !mono ? "not monolithic primitive" : "G/soc is not cyclic of prime power order";
  }
  return v;
}

/// Frat = 1, m = d + 1, G soluble: every one of the three branches is
/// tested; all matches are kept and the lowest is reported.
inline TheoremVerdict verify_soluble_cases(Structure& st, const DM& dm) {
  TheoremVerdict v;
  v.theorem = Theorem::SolubleCases;
  const auto& g = st.group();
  if (st.frattini().count() != 1) {
    v.reason = "Frattini subgroup is not trivial";
    return v;
  }
  if (dm.m != dm.d + 1) {
    v.reason = "m - d is not 1";
    return v;
  }
  if (!st.is_soluble()) {
    v.reason = "group is not soluble";
    return v;
  }
  v.applicable = true;
  const Limits& lim = st.limits();

  // (1) V x| P, P a non-cyclic p-group, V an irreducible module of order prime to p
  for (const auto& n : st.minimal_normal_subgroups()) {
    unsigned q = detail::elementary_abelian_prime(g, n);
    if (q == 0) continue;
    const std::size_t rest = g.size() / n.count();
    if (rest == 1 || !is_prime_power(rest) || rest % q == 0) continue;
    FiniteGroup p = g.quotient(n);
    if (detail::is_cyclic(p)) continue;
    Structure ps(p, lim);
    std::size_t dp = GenSearch(ps).d();
    if (dp != dm.d) {
      v.evidence.push_back("case 1 shape with d(P) = " + detail::num(dp) + " != d");
      continue;
    }
    CaseMatch c;
    c.number = 1;
    c.t = 1;
    c.v_order = n.count();
    c.h_order = rest;
    c.h_abelian = detail::is_abelian_group(p);
    c.detail = "V of order " + detail::num(n.count()) + ", P of order " + detail::num(rest) + ", d(P) = " + detail::num(dp);
    v.matches.push_back(c);
    break;
  }

  // (2) V^t x| H, V faithful irreducible, m(H) = 2, t = 1 or H abelian, d = t + 1
  for (const auto& s : detail::power_splits(st)) {
    if (!s.faithful) continue;
    FiniteGroup h = g.quotient(s.n);
    Structure hs(h, lim);
    std::size_t mh = GenSearch(hs).m().size();
    bool habel = detail::is_abelian_group(h);
    std::string shape = "V of order " + detail::num(s.v_order) + ", t = " + detail::num(s.t) + ", H of order " +
                        detail::num(h.size()) + ", m(H) = " + detail::num(mh);
    if (mh != 2 || !(s.t == 1 || habel) || dm.d != s.t + 1) {
      v.evidence.push_back("case 2 shape rejected: " + shape);
      continue;
    }
    CaseMatch c;
    c.number = 2;
    c.t = s.t;
    c.v_order = s.v_order;
    c.h_order = h.size();
    c.h_abelian = habel;
    c.detail = shape + (habel ? ", H abelian" : "");
    v.matches.push_back(c);
    break;
  }

  // (3) N1 <= N2 with N1 abelian minimal normal, N2/N1 <= Frat(G/N1) and
  // G/N2 = V^t x| H, H non-trivial cyclic of prime power order, d = t + 1
  for (const auto& n1 : st.minimal_normal_subgroups()) {
    if (!g.is_abelian_set(n1)) continue;
    std::vector<ElementSet> tops{st.frattini_above(n1)};
    if (!(tops[0] == n1)) tops.push_back(n1);
    bool done = false;
    for (const auto& n2 : tops) {
      FiniteGroup q = g.quotient(n2);
      Structure qs(q, lim);
      // t = 0 (G/N2 = H itself) is the only reading that covers cyclic
      // groups of order pq
      auto splits = detail::power_splits(qs);
      detail::PowerSplit none;
      none.n = q.trivial();
      splits.push_back(none);
      for (const auto& s : splits) {
        FiniteGroup h = q.quotient(s.n);
        if (h.size() == 1 || !detail::cyclic_of_prime_power_order(h) || dm.d != s.t + 1) continue;
        CaseMatch c;
        c.number = 3;
        c.t = s.t;
        c.v_order = s.v_order;
        c.h_order = h.size();
        c.h_abelian = true;
        c.detail = "N1 of order " + detail::num(n1.count()) + ", N2 of order " + detail::num(n2.count()) +
                   (s.t == 0 ? std::string(", t = 0 (G/N2 = H)")
                             : ", V of order " + detail::num(s.v_order) + ", t = " + detail::num(s.t)) +
                   ", H cyclic of order " + detail::num(h.size());
        v.matches.push_back(c);
        done = true;
        break;
      }
      if (done) break;
    }
    if (done) break;
  }

  for (const auto& c : v.matches) v.evidence.push_back("case " + std::to_string(c.number) + ": " + c.detail);
  if (v.matches.empty()) {
    v.ok = false;
    v.reason = "no case matches";
  } else {
    v.case_number = v.matches.front().number;
  }
  return v;
}

inline TheoremVerdict verify_md_equal(Structure& st) { return verify_md_equal(st, compute_dm(st)); }
inline TheoremVerdict verify_nonsoluble(Structure& st) { return verify_nonsoluble(st, compute_dm(st)); }
inline TheoremVerdict verify_soluble_cases(Structure& st) { return verify_soluble_cases(st, compute_dm(st)); }

/// All three verifiers; at most one is applicable.
inline std::vector<TheoremVerdict> verify_all(Structure& st, const DM& dm) {
  return {verify_md_equal(st, dm), verify_nonsoluble(st, dm), verify_soluble_cases(st, dm)};
}

}  // namespace fingen
