#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "genset.hpp"
#include "gfp.hpp"
#include "perm_group.hpp"
#include "structure.hpp"

namespace fingen {

/// A G-module over GF(p): one invertible matrix per group generator, acting
/// on row vectors from the right.
struct GfpModule {
  gfp::Scalar prime = 2;
  std::size_t dimension = 0;
  std::vector<gfp::Matrix> action;
  ElementSet kernel;  // C_G(M), filled by validate()
};

struct ModuleInvariants {
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t t = 0;
  std::size_t delta = 0;
  std::size_t h = 0;
  std::size_t end_dim = 0;
};

namespace detail {

/// rho(x) for every element, propagated along the Cayley graph; throws if
/// some edge disagrees (the matrices do not satisfy the relations).
inline std::vector<gfp::Matrix> representation(const FiniteGroup& g, const GfpModule& m) {
  const auto& gens = g.generators();
  if (m.action.size() != gens.size()) throw InvalidArgument("module needs one matrix per group generator");
  for (const auto& a : m.action)
    if (a.rows() != m.dimension || a.cols() != m.dimension) throw InvalidArgument("module matrix has wrong shape");
  std::vector<std::optional<gfp::Matrix>> rho(g.size());
  rho[0] = gfp::Matrix::identity(m.dimension);
  std::vector<Elem> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Elem x = queue[i];
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Elem y = g.mul(x, gens[s]);
      auto r = gfp::multiply(*rho[x], m.action[s], m.prime);
      if (!rho[y]) {
        rho[y] = std::move(r);
        queue.push_back(y);
      } else if (!(*rho[y] == r)) {
        throw InvalidArgument("module matrices do not satisfy the group relations");
      }
    }
  }
  std::vector<gfp::Matrix> out;
  for (auto& r : rho) out.push_back(std::move(*r));
  return out;
}

}  // namespace detail

/// Checks the relations, invertibility and fills the kernel C_G(M).
inline void validate(const FiniteGroup& g, GfpModule& m) {
  if (!is_prime(m.prime)) throw InvalidArgument("module characteristic must be prime");
  for (const auto& a : m.action)
    if (!gfp::is_invertible(a, m.prime)) throw InvalidArgument("module matrix is not invertible");
  auto rho = detail::representation(g, m);
  m.kernel = ElementSet(g.size());
  for (Elem x = 0; x < g.size(); ++x)
    if (rho[x].is_identity()) m.kernel.set(x);
}

/// The module carried by an abelian chief factor.
inline GfpModule module_of(Structure& s, const ChiefFactor& f) {
  if (!f.abelian) throw InvalidArgument("non-abelian chief factor carries no GF(p) module");
  GfpModule m;
  m.prime = f.prime;
  m.dimension = f.dimension;
  m.action = f.action;
  validate(s.group(), m);
  return m;
}

inline bool is_trivial_module(const GfpModule& m) {
  for (const auto& a : m.action)
    if (!a.is_identity()) return false;
  return true;
}

/// No proper non-zero invariant subspace: the submodule spun up from
/// every non-zero vector (up to scalars) must be everything.
inline bool is_irreducible(const GfpModule& m) {
  const std::size_t n = m.dimension;
  if (n == 0) return false;
  const std::size_t total = ipow(m.prime, static_cast<unsigned>(n));
  if (total > (std::size_t{1} << 16)) throw CapExceeded("irreducibility test for a module of size " + std::to_string(total));
  for (std::size_t c = 1; c < total; ++c) {
    auto v = gfp::decode(c, n, m.prime);
    std::size_t lead = 0;
    while (v[lead] == 0) ++lead;
    if (v[lead] != 1) continue;  // one vector per line
    gfp::Matrix span(0, n);
    span.append_row(v);
    std::size_t rank = 1;
    std::vector<gfp::Vector> queue{v};
    for (std::size_t i = 0; i < queue.size() && rank < n; ++i)
      for (const auto& a : m.action) {
        auto w = gfp::apply(queue[i], a, m.prime);
        gfp::Matrix trial = span;
        trial.append_row(w);
        if (gfp::rank(trial, m.prime) > rank) {
          span = std::move(trial);
          ++rank;
          queue.push_back(w);
        }
      }
    if (rank < n) return false;
  }
  return true;
}

/// dim over GF(p) of End_G(M).
inline std::size_t end_dimension(const GfpModule& m) {
  if (m.action.empty()) return m.dimension * m.dimension;
  return gfp::intertwiners(m.action, m.action, m.prime).size();
}

/// dim H^1(G, M) = dim Z^1 - dim B^1. Derivations satisfy
/// d(x s) = d(x) rho(s) + d(s); they are fixed by their values on the
/// generators, propagated along a spanning tree of the Cayley graph, and
/// every non-tree edge gives linear constraints.
inline std::size_t h1_dimension(const FiniteGroup& g, const GfpModule& m, const Limits& limits = {}) {
  if (g.size() > limits.cohomology_cap)
    throw CapExceeded("H^1 for a group of order " + std::to_string(g.size()));
  const auto& gens = g.generators();
  const std::size_t n = m.dimension, k = gens.size(), p = m.prime;
  if (m.action.size() != k) throw InvalidArgument("module needs one matrix per group generator");
  const std::size_t unknowns = n * k;
  // d(x) = U * coeff[x], U the row of unknowns, coeff[x] is unknowns x n
  std::vector<std::optional<gfp::Matrix>> coeff(g.size());
  coeff[0] = gfp::Matrix(unknowns, n);
  auto step = [&](const gfp::Matrix& c, std::size_t s) {
    auto r = gfp::multiply(c, m.action[s], m.prime);
    for (std::size_t i = 0; i < n; ++i) r(s * n + i, i) = static_cast<gfp::Scalar>((r(s * n + i, i) + 1) % p);
    return r;
  };
  gfp::Matrix system(0, unknowns);
  std::vector<Elem> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    Elem x = queue[q];
    for (std::size_t s = 0; s < k; ++s) {
      Elem y = g.mul(x, gens[s]);
      auto c = step(*coeff[x], s);
      if (!coeff[y]) {
        coeff[y] = std::move(c);
        queue.push_back(y);
        continue;
      }
      for (std::size_t col = 0; col < n; ++col) {
        gfp::Vector row(unknowns);
        bool nonzero = false;
        for (std::size_t u = 0; u < unknowns; ++u) {
          row[u] = static_cast<gfp::Scalar>((c(u, col) + p - (*coeff[y])(u, col)) % p);
          nonzero = nonzero || row[u] != 0;
        }
        if (nonzero) system.append_row(row);
      }
    }
  }
  const std::size_t z1 = unknowns - gfp::rank(system, m.prime);
  // fixed points: m (rho(g) - 1) = 0 for every generator
  gfp::Matrix fix(0, n);
  for (const auto& a : m.action)
    for (std::size_t col = 0; col < n; ++col) {
      gfp::Vector row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = static_cast<gfp::Scalar>((a(i, col) + (i == col ? p - 1 : 0)) % p);
      fix.append_row(row);
    }
  const std::size_t fixed = n - gfp::rank(fix, m.prime);
  const std::size_t b1 = n - fixed;
  return z1 - b1;
}

/// r, s, t, delta and h for the module of a non-Frattini abelian factor.
inline ModuleInvariants module_invariants(Structure& st, const ChiefSeries& series, const ChiefFactor& f) {
  if (!f.abelian) throw InvalidArgument("module invariants need an abelian chief factor");
  if (f.frattini) throw InvalidArgument("module invariants need a non-Frattini chief factor");
  const auto& g = st.group();
  GfpModule m = module_of(st, f);
  if (!is_irreducible(m)) throw InvalidArgument("chief factor module is not irreducible");
  ModuleInvariants inv;
  if (m.action.empty()) {
    inv.end_dim = 1;
  } else {
    auto ends = gfp::intertwiners(m.action, m.action, m.prime);
    inv.end_dim = ends.size();
    for (const auto& e : ends)
      if (!gfp::is_invertible(e, m.prime)) throw Error("End_G(M) is not a division ring");
  }
  if (m.dimension % inv.end_dim != 0) throw Error("End_G(M) dimension does not divide dim M");
  inv.r = m.dimension / inv.end_dim;
  const std::size_t h1 = h1_dimension(g, m, st.limits());
  auto q = g.quotient(m.kernel);
  const std::size_t h1q = h1_dimension(q, m, st.limits());
  if (h1 % inv.end_dim != 0 || h1q % inv.end_dim != 0) throw Error("H^1 dimension is not a multiple of dim End_G(M)");
  inv.s = h1 / inv.end_dim;
  inv.t = h1q / inv.end_dim;
  inv.delta = st.delta(series, f);
  if (is_trivial_module(m)) {
    inv.h = inv.delta;
  } else {
    long long s = static_cast<long long>(inv.s), r = static_cast<long long>(inv.r);
    inv.h = static_cast<std::size_t>(floor_div(s - 1, r) + 2);
  }
  return inv;
}

/// For a soluble group: max of h over the non-Frattini abelian factors
/// (0 for the trivial group). `argmax` receives the index of the factor.
inline std::size_t generating_h(Structure& st, const ChiefSeries& series, std::size_t* argmax = nullptr) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < series.factors.size(); ++i) {
    const auto& f = series.factors[i];
    if (!f.abelian || f.frattini) continue;
    auto inv = module_invariants(st, series, f);
    if (inv.h > best) {
      best = inv.h;
      if (argmax) *argmax = i;
    }
  }
  return best;
}

/// L_G(A) for a non-Frattini chief factor A = X/Y.
inline PermGroup monolithic_of(Structure& st, const ChiefFactor& f) {
  if (f.frattini) throw InvalidArgument("monolithic_of needs a non-Frattini chief factor");
  const auto& g = st.group();
  if (f.abelian) {
    const std::size_t n = f.dimension, p = f.prime;
    const std::size_t points = ipow(p, static_cast<unsigned>(n));
    std::vector<Permutation> gens;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Point> img(points);
      for (std::size_t c = 0; c < points; ++c) {
        auto v = gfp::decode(c, n, static_cast<gfp::Scalar>(p));
        v[i] = static_cast<gfp::Scalar>((v[i] + 1) % p);
        img[c] = static_cast<Point>(gfp::encode(v, static_cast<gfp::Scalar>(p)));
      }
      gens.emplace_back(std::move(img));
    }
    for (const auto& a : f.action) {
      if (a.is_identity()) continue;
      std::vector<Point> img(points);
      for (std::size_t c = 0; c < points; ++c) {
        auto v = gfp::apply(gfp::decode(c, n, static_cast<gfp::Scalar>(p)), a, static_cast<gfp::Scalar>(p));
        img[c] = static_cast<Point>(gfp::encode(v, static_cast<gfp::Scalar>(p)));
      }
      gens.emplace_back(std::move(img));
    }
    PermGroup l(points, std::move(gens));
    const std::size_t expected = points * g.size() / st.centralizer_of_factor(f.upper, f.lower).count();
    if (l.order() != expected) throw Error("affine group has unexpected order");
    return l;
  }
  auto pg = g.to_perm_group();
  auto kernel = st.centralizer_of_factor(f.upper, f.lower);
  if (kernel.count() == 1) return pg;
  PermGroup k;
  if (g.has_permutations()) {
    k = g.perm_subgroup(kernel);
  } else {
    // same right-regular action as to_perm_group()
    std::vector<Permutation> kg;
    for (Elem x : g.generators_of(kernel)) {
      std::vector<Point> img(g.size());
      for (Elem y = 0; y < g.size(); ++y) img[y] = g.mul(y, x);
      kg.emplace_back(std::move(img));
    }
    k = PermGroup(g.size(), std::move(kg));
  }
  return quotient(pg, k, st.limits()).first;
}

/// L_k inside L^k: diagonal copies of L's generators and A's generators in
/// each of the first k-1 coordinates.
inline PermGroup crown_power(const PermGroup& l, const PermGroup& a, std::size_t k, const Limits& limits = {}) {
  if (k == 0) throw InvalidArgument("crown power needs k >= 1");
  if (a.degree() != l.degree() || !is_subgroup(a, l) || !is_normal(l, a))
    throw InvalidArgument("crown power: A must be a normal subgroup of L");
  if (l.order() <= limits.table_cap) {
    Structure st(FiniteGroup::from_perm_group(l, limits), limits);
    auto mins = st.minimal_normal_subgroups();
    if (mins.size() != 1 || mins[0].count() != a.order())
      throw InvalidArgument("crown power: A is not the socle of a monolithic L");
  }
  const std::size_t n = l.degree(), deg = n * k;
  auto plant = [&](const Permutation& x, std::size_t from, std::size_t to) {
    std::vector<Point> img(deg);
    for (std::size_t i = 0; i < deg; ++i) img[i] = static_cast<Point>(i);
    for (std::size_t c = from; c < to; ++c)
      for (std::size_t i = 0; i < n; ++i) img[c * n + i] = static_cast<Point>(c * n + x[static_cast<Point>(i)]);
    return Permutation(std::move(img));
  };
  std::vector<Permutation> gens;
  for (const auto& x : l.generators()) gens.push_back(plant(x, 0, k));
  for (std::size_t c = 0; c + 1 < k; ++c)
    for (const auto& x : a.generators()) gens.push_back(plant(x, c, c + 1));
  PermGroup out(deg, std::move(gens));
  std::uint64_t expected = l.order();
  for (std::size_t i = 1; i < k; ++i) expected *= a.order();
  if (out.order() != expected) throw Error("crown power has unexpected order");
  return out;
}

/// phi_X(m) = sum over subgroups H of mu(H, X) |H|^m.
inline std::int64_t eulerian_mobius(Structure& st, std::size_t m) {
  const auto& lat = st.lattice();
  __int128 sum = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    __int128 term = lat.mobius[i];
    for (std::size_t j = 0; j < m; ++j) term *= static_cast<__int128>(lat.orders[i]);
    sum += term;
    if (sum > std::numeric_limits<std::int64_t>::max() || sum < std::numeric_limits<std::int64_t>::min())
      throw CapExceeded("Eulerian function overflows 64 bits");
  }
  return static_cast<std::int64_t>(sum);
}

/// phi_X(m) by counting generating m-tuples directly.
inline std::uint64_t eulerian_brute(const FiniteGroup& g, std::size_t m, const Limits& limits = {}) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= g.size();
    if (total > limits.brute_cap) throw CapExceeded("brute-force tuple enumeration");
  }
  if (m == 0) return g.size() == 1 ? 1 : 0;
  std::vector<Elem> t(m, 0);
  std::uint64_t count = 0;
  while (true) {
    if (g.closure(t).count() == g.size()) ++count;
    std::size_t p = 0;
    while (p < m && ++t[p] == g.size()) t[p++] = 0;
    if (p == m) break;
  }
  return count;
}

/// |Aut(S)|: images of a fixed generating tuple, each candidate checked as a
/// bijective homomorphism on the whole multiplication table.
inline std::uint64_t aut_order(const FiniteGroup& g, std::size_t cap = 500) {
  if (g.size() > cap) throw CapExceeded("automorphism count for a group of order " + std::to_string(g.size()));
  if (g.size() == 1) return 1;
  // a generating pair if there is one, else the greedy generating list
  std::vector<Elem> gens;
  for (Elem x = 1; x < g.size() && gens.empty(); ++x)
    for (Elem y = x; y < g.size(); ++y) {
      Elem pair[2] = {x, y};
      if (g.closure(pair).count() == g.size()) {
        gens = x == y ? std::vector<Elem>{x} : std::vector<Elem>{x, y};
        break;
      }
    }
  if (gens.empty()) gens = g.generators_of(g.whole());
  // spanning tree words for every element in terms of gens
  std::vector<Elem> parent(g.size(), 0), via(g.size(), 0), order{0};
  std::vector<bool> seen(g.size(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Elem y = g.mul(order[i], gens[s]);
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = order[i];
        via[y] = static_cast<Elem>(s);
        order.push_back(y);
      }
    }
  std::uint64_t count = 0;
  std::vector<Elem> img(gens.size(), 0), phi(g.size());
  std::vector<bool> hit(g.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == gens.size()) {
      phi[0] = 0;
      for (std::size_t j = 1; j < order.size(); ++j) phi[order[j]] = g.mul(phi[parent[order[j]]], img[via[order[j]]]);
      std::fill(hit.begin(), hit.end(), false);
      for (Elem x = 0; x < g.size(); ++x) {
        if (hit[phi[x]]) return;
        hit[phi[x]] = true;
      }
      for (Elem a = 0; a < g.size(); ++a)
        for (Elem b = 0; b < g.size(); ++b)
          if (phi[g.mul(a, b)] != g.mul(phi[a], phi[b])) return;
      ++count;
      return;
    }
    for (Elem x = 0; x < g.size(); ++x) {
      if (g.order_of(x) != g.order_of(gens[i])) continue;
      img[i] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return count;
}

struct CrownCheck {
  std::int64_t phi = 0;        // phi_A(m)
  std::uint64_t aut = 0;       // |Aut A|
  std::uint64_t threshold = 0; // floor(phi / |Aut A|)
  bool predicted = false;      // d(A^k) <= m
};

/// d(A^k) <= m iff k <= phi_A(m) / |Aut A|, for A non-abelian simple
/// (the case L = A of the crown criterion).
inline CrownCheck crown_generation_check(Structure& a, std::size_t m, std::size_t k) {
  const auto& g = a.group();
  if (g.size() == 1 || g.is_abelian_set(g.whole())) throw InvalidArgument("crown check needs a non-abelian group");
  auto mins = a.minimal_normal_subgroups();
  if (mins.size() != 1 || mins[0].count() != g.size()) throw InvalidArgument("crown check needs a simple group");
  CrownCheck c;
  c.phi = eulerian_mobius(a, m);
  c.aut = aut_order(g);
  c.threshold = static_cast<std::uint64_t>(c.phi) / c.aut;
  c.predicted = k <= c.threshold;
  return c;
}

}  // namespace fingen
