#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "crowns.hpp"
#include "expr.hpp"
#include "perm_group.hpp"

namespace fingen {

namespace build {

inline Permutation block(const Permutation& x, std::size_t offset, std::size_t degree) {
  std::vector<Point> img(degree);
  std::iota(img.begin(), img.end(), Point{0});
  for (std::size_t i = 0; i < x.degree(); ++i) img[offset + i] = static_cast<Point>(offset + x[static_cast<Point>(i)]);
  return Permutation(std::move(img));
}

inline Permutation cycle_perm(std::size_t degree, std::vector<Point> cycle) {
  return Permutation::from_cycles(degree, {std::move(cycle)});
}

inline std::vector<Point> range(Point from, Point to) {
  std::vector<Point> v;
  for (Point p = from; p < to; ++p) v.push_back(p);
  return v;
}

inline void check_order(std::uint64_t order, const Limits& limits, const std::string& what) {
  if (order > limits.max_order)
    throw CapExceeded(what + " has order " + std::to_string(order) + " above the cap " +
                      std::to_string(limits.max_order));
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const Limits& limits, const std::string& what) {
  if (b != 0 && a > limits.max_order / b) throw CapExceeded(what + " exceeds the order cap");
  std::uint64_t r = a * b;
  check_order(r, limits, what);
  return r;
}

inline PermGroup cyclic(std::size_t n) {
  if (n == 0) throw InvalidArgument("C0 is not a group");
  if (n == 1) return PermGroup(1, {});
  return PermGroup(n, {cycle_perm(n, range(0, static_cast<Point>(n)))});
}

inline PermGroup symmetric(std::size_t n) {
  if (n == 0) throw InvalidArgument("S0 is not supported");
  if (n == 1) return PermGroup(1, {});
  if (n == 2) return PermGroup(2, {cycle_perm(2, {0, 1})});
  return PermGroup(n, {cycle_perm(n, range(0, static_cast<Point>(n))), cycle_perm(n, {0, 1})});
}

inline PermGroup alternating(std::size_t n) {
  if (n == 0) throw InvalidArgument("A0 is not supported");
  if (n < 3) return PermGroup(n, {});
  if (n == 3) return PermGroup(3, {cycle_perm(3, {0, 1, 2})});
  auto second = n % 2 ? range(0, static_cast<Point>(n)) : range(1, static_cast<Point>(n));
  return PermGroup(n, {cycle_perm(n, {0, 1, 2}), cycle_perm(n, second)});
}

inline PermGroup dihedral(std::size_t n) {
  if (n < 3) throw InvalidArgument("Dih n needs n >= 3");
  std::vector<Point> refl(n);
  for (std::size_t i = 0; i < n; ++i) refl[i] = static_cast<Point>((n - i) % n);
  return PermGroup(n, {cycle_perm(n, range(0, static_cast<Point>(n))), Permutation(refl)});
}

inline PermGroup klein_four() {
  return PermGroup(4, {Permutation::from_cycles(4, {{0, 1}, {2, 3}}), Permutation::from_cycles(4, {{0, 2}, {1, 3}})});
}

/// PSL(2,q) or PGL(2,q) on the projective line {0,...,q-1, inf = q}.
inline PermGroup projective(std::size_t q, bool general) {
  if (q < 2 || q > 23 || !is_prime(q)) throw InvalidArgument("PSL2/PGL2 need a prime q <= 23");
  const Point inf = static_cast<Point>(q);
  auto inv = [&](std::size_t x) {
    for (std::size_t y = 1; y < q; ++y)
      if (x * y % q == 1) return y;
    return std::size_t{0};
  };
  std::vector<Point> shift(q + 1), flip(q + 1);
  for (std::size_t x = 0; x < q; ++x) {
    shift[x] = static_cast<Point>((x + 1) % q);
    flip[x] = x == 0 ? inf : static_cast<Point>((q - inv(x)) % q);
  }
  shift[q] = inf;
  flip[q] = 0;
  std::vector<Permutation> gens{Permutation(shift), Permutation(flip)};
  if (general) {
    std::size_t zeta = 1;
    for (std::size_t z = 2; z < q; ++z) {
      std::size_t p = z, ord = 1;
      while (p != 1) {
        p = p * z % q;
        ++ord;
      }
      if (ord == q - 1) {
        zeta = z;
        break;
      }
    }
    std::vector<Point> scale(q + 1);
    for (std::size_t x = 0; x < q; ++x) scale[x] = static_cast<Point>(x * zeta % q);
    scale[q] = inf;
    gens.emplace_back(scale);
  }
  return PermGroup(q + 1, std::move(gens));
}

inline PermGroup direct_product(const std::vector<PermGroup>& factors, const Limits& limits = {}) {
  std::size_t degree = 0;
  std::uint64_t order = 1;
  for (const auto& f : factors) {
    degree += f.degree();
    order = checked_mul(order, f.order(), limits, "direct product");
  }
  std::vector<Permutation> gens;
  std::size_t offset = 0;
  for (const auto& f : factors) {
    for (const auto& x : f.generators()) gens.push_back(block(x, offset, degree));
    offset += f.degree();
  }
  return PermGroup(degree, std::move(gens));
}

/// X wr C_n on n blocks of X's points.
inline PermGroup wreath_cyclic(const PermGroup& x, std::size_t n, const Limits& limits = {}) {
  if (n == 0) throw InvalidArgument("wreath product needs n >= 1");
  std::uint64_t order = n;
  for (std::size_t i = 0; i < n; ++i) order = checked_mul(order, x.order(), limits, "wreath product");
  const std::size_t d = x.degree(), degree = d * n;
  std::vector<Permutation> gens;
  for (const auto& g : x.generators()) gens.push_back(block(g, 0, degree));
  if (n > 1) {
    std::vector<Point> sigma(degree);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < d; ++i) sigma[b * d + i] = static_cast<Point>((b + 1) % n * d + i);
    gens.emplace_back(sigma);
  }
  PermGroup out(degree, std::move(gens));
  if (out.order() != order) throw Error("wreath product has unexpected order");
  return out;
}

/// Generator images of each acting generator define automorphisms of N.
inline void check_automorphisms(const PermGroup& n, const std::vector<std::vector<Permutation>>& images) {
  for (std::size_t j = 0; j < images.size(); ++j) {
    const auto& im = images[j];
    if (im.size() != n.generators().size())
      throw InvalidArgument("action of g" + std::to_string(j + 1) + " lists " + std::to_string(im.size()) +
                            " images, the normal factor has " + std::to_string(n.generators().size()) +
                            " generators");
    for (const auto& y : im)
      if (!n.contains(y)) throw InvalidArgument("action image " + y.to_string() + " lies outside the normal factor");
    if (!Homomorphism(n, n, im).is_well_defined())
      throw InvalidArgument("action of g" + std::to_string(j + 1) + " is not a homomorphism of the normal factor");
    if (PermGroup(n.degree(), im).order() != n.order())
      throw InvalidArgument("action of g" + std::to_string(j + 1) + " is not bijective");
  }
}

/// pi with n_i * pi = pi * alpha(n_i) for every generator, found orbit by
/// orbit with backtracking over the choice of image orbit and base image.
inline std::optional<Permutation> intertwiner(const PermGroup& n, const std::vector<Permutation>& alpha) {
  const std::size_t deg = n.degree();
  const auto& gens = n.generators();
  std::vector<std::vector<Point>> orbits;
  std::vector<std::size_t> orbit_of(deg, SIZE_MAX);
  std::vector<Point> parent(deg);
  std::vector<std::size_t> via(deg);
  for (Point s = 0; s < deg; ++s) {
    if (orbit_of[s] != SIZE_MAX) continue;
    std::vector<Point> orb{s};
    orbit_of[s] = orbits.size();
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Point y = gens[i][orb[k]];
        if (orbit_of[y] == SIZE_MAX) {
          orbit_of[y] = orbits.size();
          parent[y] = orb[k];
          via[y] = i;
          orb.push_back(y);
        }
      }
    orbits.push_back(std::move(orb));
  }
  std::vector<Point> pi(deg, 0);
  std::vector<bool> used(orbits.size(), false);
  std::size_t steps = 0;
  auto assign = [&](std::size_t o, Point y) {
    const auto& orb = orbits[o];
    pi[orb[0]] = y;
    for (std::size_t k = 1; k < orb.size(); ++k) pi[orb[k]] = alpha[via[orb[k]]][pi[parent[orb[k]]]];
    std::vector<bool> hit(deg, false);
    for (Point x : orb) {
      if (orbit_of[pi[x]] != orbit_of[y] || hit[pi[x]]) return false;
      hit[pi[x]] = true;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (pi[gens[i][x]] != alpha[i][pi[x]]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t o) -> bool {
    if (o == orbits.size()) return true;
    if (++steps > 100'000) return false;
    for (std::size_t t = 0; t < orbits.size(); ++t) {
      if (used[t] || orbits[t].size() != orbits[o].size()) continue;
      for (Point y : orbits[t]) {
        if (!assign(o, y)) continue;
        used[t] = true;
        if (self(self, o + 1)) return true;
        used[t] = false;
      }
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return Permutation(std::move(pi));
}

/// N x| H where acting generator h_j sends the generators of N to images[j].
/// Prefers N's own points (an intertwining permutation per generator of H);
/// otherwise N acts regularly on its elements.
inline PermGroup semidirect(const PermGroup& n, const PermGroup& h, const std::vector<std::vector<Permutation>>& images,
                            const Limits& limits = {}) {
  if (images.size() != h.generators().size())
    throw InvalidArgument("action lists " + std::to_string(images.size()) + " generators, the acting group has " +
                          std::to_string(h.generators().size()));
  check_automorphisms(n, images);
  const std::uint64_t order = checked_mul(n.order(), h.order(), limits, "semidirect product");
  const std::size_t hd = h.degree();

  auto assemble = [&](std::size_t nd, const std::vector<Permutation>& ngens, const std::vector<Permutation>& acts) {
    const std::size_t degree = nd + hd;
    std::vector<Permutation> gens, complement;
    for (const auto& x : ngens) gens.push_back(block(x, 0, degree));
    for (std::size_t j = 0; j < acts.size(); ++j) {
      std::vector<Point> img(degree);
      for (std::size_t i = 0; i < nd; ++i) img[i] = acts[j][static_cast<Point>(i)];
      const auto& hj = h.generators()[j];
      for (std::size_t i = 0; i < hd; ++i) img[nd + i] = static_cast<Point>(nd + hj[static_cast<Point>(i)]);
      complement.emplace_back(img);
      gens.emplace_back(std::move(img));
    }
    bool ok = PermGroup(degree, complement).order() == h.order();
    PermGroup g(degree, std::move(gens));
    ok = ok && g.order() == order;
    return std::make_pair(ok, g);
  };

  std::vector<Permutation> pis;
  for (const auto& im : images) {
    auto pi = intertwiner(n, im);
    if (!pi) break;
    pis.push_back(*pi);
  }
  if (pis.size() == images.size()) {
    auto [ok, g] = assemble(n.degree(), n.generators(), pis);
    if (ok) return g;
  }

  auto elems = n.elements(limits.element_cap);
  std::unordered_map<Permutation, Point, PermutationHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<Point>(i));
  std::vector<Permutation> regular;
  for (const auto& s : n.generators()) {
    std::vector<Point> img(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) img[i] = index.at(elems[i] * s);
    regular.emplace_back(std::move(img));
  }
  std::vector<Permutation> acts;
  for (const auto& im : images) {
    Homomorphism alpha(n, n, im);
    std::vector<Point> img(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) img[i] = index.at(alpha(elems[i]));
    acts.emplace_back(std::move(img));
  }
  auto [ok, g] = assemble(elems.size(), regular, acts);
  if (!ok) throw InvalidArgument("action does not define a homomorphism into the automorphism group");
  return g;
}

/// Images of N's generators under conjugation by s (in a common overgroup).
inline std::vector<Permutation> conjugation_action(const PermGroup& n, const Permutation& s) {
  std::vector<Permutation> out;
  for (const auto& x : n.generators()) out.push_back(x.conjugate(s));
  return out;
}

inline PermGroup ex1(std::size_t t, const Limits& limits = {}) {
  std::vector<PermGroup> f{symmetric(3)};
  for (std::size_t i = 0; i < t; ++i) f.push_back(cyclic(2));
  return direct_product(f, limits);
}

/// (C3^t x| C2) x C2, the first C2 inverting every C3.
inline PermGroup ex2b(std::size_t t, const Limits& limits = {}) {
  if (t == 0) throw InvalidArgument("EX2B needs t >= 1");
  std::uint64_t order = 4;
  for (std::size_t i = 0; i < t; ++i) order = checked_mul(order, 3, limits, "EX2B");
  const std::size_t degree = 3 * t + 2;
  std::vector<Permutation> gens;
  std::vector<std::vector<Point>> inv;
  for (std::size_t i = 0; i < t; ++i) {
    Point b = static_cast<Point>(3 * i);
    gens.push_back(cycle_perm(degree, {b, b + 1, b + 2}));
    inv.push_back({b + 1, b + 2});
  }
  gens.push_back(Permutation::from_cycles(degree, inv));
  gens.push_back(cycle_perm(degree, {static_cast<Point>(3 * t), static_cast<Point>(3 * t + 1)}));
  return PermGroup(degree, std::move(gens));
}

/// K x| (S3 x C2^(t-1)), K the Klein group of S4. By default S3 acts
/// through its sign by the transposition (0 1) and so does every extra C2;
/// with `trivial`, S3 acts as the point stabiliser in S4 and the extra C2s
/// act trivially, giving S4 x C2^(t-1).
inline PermGroup ex3(std::size_t t, bool trivial, const Limits& limits = {}) {
  if (t == 0) throw InvalidArgument("EX3 needs t >= 1");
  PermGroup k = klein_four();
  std::vector<PermGroup> hf{symmetric(3)};
  for (std::size_t i = 1; i < t; ++i) hf.push_back(cyclic(2));
  PermGroup h = direct_product(hf, limits);
  const Permutation tau = cycle_perm(4, {0, 1});
  const Permutation rot = cycle_perm(4, {0, 1, 2});
  const Permutation id = Permutation::identity(4);
  std::vector<std::vector<Permutation>> images;
  images.push_back(conjugation_action(k, trivial ? rot : id));
  images.push_back(conjugation_action(k, tau));
  for (std::size_t i = 1; i < t; ++i) images.push_back(conjugation_action(k, trivial ? id : tau));
  return semidirect(k, h, images, limits);
}

/// Blocks of PGL2(7) on 8 points each, n = 2^t of them: generated by
/// PSL2(7) in every block and gamma = (a,1,...,1) followed by the block cycle,
/// a the diagonal map x -> 3x.
struct WreathFamily {
  PermGroup group;
  PermGroup socle;      // PSL2(7)^n
  Permutation gamma;
  std::size_t blocks = 0;
};

inline WreathFamily wreath_family(std::size_t t, const Limits& limits = {}) {
  if (t == 0 || t > 4) throw InvalidArgument("WREATH needs 1 <= t <= 4");
  const std::size_t n = std::size_t{1} << t;
  std::uint64_t order = 2 * n;
  for (std::size_t i = 0; i < n; ++i) order = checked_mul(order, 168, limits, "WREATH");
  PermGroup pgl = projective(7, true);
  const auto& s = pgl.generators();
  const Permutation& a = s[2];
  const std::size_t degree = 8 * n;
  std::vector<Permutation> ngens;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t i = 0; i < 2; ++i) ngens.push_back(block(s[i], 8 * b, degree));
  std::vector<Point> img(degree);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t x = 0; x < 8; ++x)
      img[b * 8 + x] = static_cast<Point>((b + 1) % n * 8 + (b == 0 ? a[static_cast<Point>(x)] : x));
  WreathFamily w;
  w.blocks = n;
  w.gamma = Permutation(std::move(img));
  w.socle = PermGroup(degree, ngens);
  ngens.push_back(w.gamma);
  w.group = PermGroup(degree, std::move(ngens));
  if (w.group.order() != order) throw Error("WREATH family has unexpected order");
  return w;
}

struct WreathChecks {
  std::uint64_t order = 0;
  std::uint64_t socle_order = 0;
  std::uint64_t quotient_order = 0;
  bool quotient_cyclic = false;
  bool gamma_power_in_aut_base = false;    // gamma^n in (Aut S)^n
  bool gamma_power_outside_socle = false;  // gamma^n not in S^n
  std::size_t classes = 0;
  std::size_t minimal_normal = 0;          // distinct minimal normal subgroups
  bool socle_is_unique_minimal = false;
};

/// Structural facts about WREATH(t) at the permutation level. Minimal
/// normal subgroups come from normal closures of conjugacy class
/// representatives, so the sweep enumerates the whole group.
inline WreathChecks wreath_checks(std::size_t t, const Limits& limits = {}) {
  auto w = wreath_family(t, limits);
  WreathChecks c;
  c.order = w.group.order();
  c.socle_order = w.socle.order();
  if (!is_normal(w.group, w.socle)) throw Error("WREATH socle is not normal");
  auto q = quotient(w.group, w.socle, limits).first;
  c.quotient_order = q.order();
  c.quotient_cyclic = false;
  for (const auto& x : q.generators())
    if (x.order() == q.order()) c.quotient_cyclic = true;
  if (q.order() == 1) c.quotient_cyclic = true;

  Permutation gn = w.gamma.pow(static_cast<long long>(w.blocks));
  PermGroup pgl = projective(7, true);
  bool in_base = true;
  for (std::size_t b = 0; b < w.blocks && in_base; ++b) {
    std::vector<Point> local(8);
    for (std::size_t x = 0; x < 8; ++x) {
      Point y = gn[static_cast<Point>(8 * b + x)];
      if (y / 8 != b) {
        in_base = false;
        break;
      }
      local[x] = y % 8;
    }
    if (in_base) in_base = pgl.contains(Permutation(local));
  }
  c.gamma_power_in_aut_base = in_base;
  c.gamma_power_outside_socle = !w.socle.contains(gn);

  auto elems = w.group.elements(limits.element_cap);
  std::unordered_map<Permutation, std::size_t, PermutationHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  std::vector<bool> seen(elems.size(), false);
  std::vector<Permutation> reps;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (seen[i]) continue;
    seen[i] = true;
    reps.push_back(elems[i]);
    std::vector<std::size_t> cls{i};
    for (std::size_t k = 0; k < cls.size(); ++k)
      for (const auto& g : w.group.generators()) {
        std::size_t j = index.at(elems[cls[k]].conjugate(g));
        if (!seen[j]) {
          seen[j] = true;
          cls.push_back(j);
        }
      }
  }
  c.classes = reps.size();
  std::vector<PermGroup> closures;
  for (const auto& r : reps) {
    if (r.is_identity()) continue;
    PermGroup m = normal_closure(w.group, {r});
    bool dup = false;
    for (const auto& x : closures)
      if (x.order() == m.order() && is_subgroup(m, x)) dup = true;
    if (!dup) closures.push_back(std::move(m));
  }
  std::vector<const PermGroup*> minimal;
  for (const auto& x : closures) {
    bool is_min = true;
    for (const auto& y : closures)
      if (y.order() < x.order() && is_subgroup(y, x)) is_min = false;
    if (is_min) minimal.push_back(&x);
  }
  c.minimal_normal = minimal.size();
  c.socle_is_unique_minimal = minimal.size() == 1 && same_group(*minimal[0], w.socle);
  return c;
}

inline Permutation evaluate_word(const Word& w, const std::vector<Permutation>& gens, std::size_t degree) {
  switch (w.kind) {
    case Word::Kind::Generator:
      if (w.generator > gens.size())
        throw InvalidArgument("g" + std::to_string(w.generator) + " does not exist; the group has " +
                              std::to_string(gens.size()) + " generators");
      return gens[w.generator - 1];
    case Word::Kind::Cycles: {
      std::vector<std::vector<Point>> cycles;
      for (const auto& c : w.cycles) {
        std::vector<Point> z;
        for (auto p : c) {
          if (p > degree) throw InvalidArgument("point " + std::to_string(p) + " exceeds degree " + std::to_string(degree));
          z.push_back(static_cast<Point>(p - 1));
        }
        cycles.push_back(std::move(z));
      }
      // products of non-disjoint cycles are allowed
      Permutation out = Permutation::identity(degree);
      for (const auto& c : cycles) out *= Permutation::from_cycles(degree, {c});
      return out;
    }
    case Word::Kind::Product: {
      Permutation out = Permutation::identity(degree);
      for (const auto& f : w.factors) out *= evaluate_word(f, gens, degree);
      return out;
    }
    case Word::Kind::Power:
      return evaluate_word(w.factors.front(), gens, degree).pow(w.exponent);
  }
  return Permutation::identity(degree);
}

}  // namespace build

namespace detail {

inline std::string at(const Expr& e) { return std::to_string(e.line) + ":" + std::to_string(e.column) + ": "; }

inline std::vector<Permutation> evaluate_words(const Expr& e, const std::vector<Word>& ws, const PermGroup& g) {
  std::vector<Permutation> out;
  for (const auto& w : ws) {
    Permutation p = build::evaluate_word(w, g.generators(), g.degree());
    if (!g.contains(p)) throw InvalidArgument(at(e) + "word " + w.to_string() + " is not in the group");
    out.push_back(std::move(p));
  }
  return out;
}

inline PermGroup evaluate(const Expr& e, const Limits& limits) {
  using K = Expr::Kind;
  auto n = [&](long long v, long long lo, const char* what) {
    if (v < lo) throw InvalidArgument(at(e) + what + " must be at least " + std::to_string(lo));
    if (static_cast<std::uint64_t>(v) > limits.max_order)
      throw CapExceeded(at(e) + what + " " + std::to_string(v) + " exceeds the order cap");
    return static_cast<std::size_t>(v);
  };
  PermGroup g;
  try {
    switch (e.kind) {
      case K::Atom:
        if (e.name == "C") g = build::cyclic(n(e.param, 1, "cyclic order"));
        else if (e.name == "S") g = build::symmetric(n(e.param, 1, "symmetric degree"));
        else if (e.name == "A") g = build::alternating(n(e.param, 1, "alternating degree"));
        else if (e.name == "Dih") g = build::dihedral(n(e.param, 3, "dihedral degree"));
        else if (e.name == "K4") g = build::klein_four();
        else if (e.name == "PSL2" || e.name == "PGL2") g = build::projective(n(e.param, 2, "field size"), e.name == "PGL2");
        else throw InvalidArgument(at(e) + "unknown group " + e.name);
        break;
      case K::Direct: {
        std::vector<PermGroup> f;
        for (const auto& c : e.children) f.push_back(evaluate(*c, limits));
        g = build::direct_product(f, limits);
        break;
      }
      case K::Wreath:
        g = build::wreath_cyclic(evaluate(*e.children[0], limits), n(e.param, 1, "wreath width"), limits);
        break;
      case K::Semidirect: {
        PermGroup nn = evaluate(*e.children[0], limits);
        PermGroup h = evaluate(*e.children[1], limits);
        std::vector<std::vector<Permutation>> images;
        for (const auto& ws : e.action) {
          std::vector<Permutation> im;
          for (const auto& w : ws) im.push_back(build::evaluate_word(w, nn.generators(), nn.degree()));
          images.push_back(std::move(im));
        }
        g = build::semidirect(nn, h, images, limits);
        break;
      }
      case K::Quotient: {
        PermGroup base = evaluate(*e.children[0], limits);
        g = quotient(base, normal_closure(base, evaluate_words(e, e.words, base)), limits).first;
        break;
      }
      case K::Subgroup: {
        PermGroup base = evaluate(*e.children[0], limits);
        g = PermGroup(base.degree(), evaluate_words(e, e.words, base));
        break;
      }
      case K::Crown: {
        PermGroup l = evaluate(*e.children[0], limits);
        std::size_t k = n(e.param, 1, "crown power");
        Structure st(FiniteGroup::from_perm_group(l, limits), limits);
        PermGroup a = st.group().perm_subgroup(st.socle());
        std::uint64_t order = l.order();
        for (std::size_t i = 1; i < k; ++i) order = build::checked_mul(order, a.order(), limits, "crown power");
        g = crown_power(l, a, k, limits);
        break;
      }
      case K::Family:
        if (e.name == "EX1") g = build::ex1(n(e.param, 0, "t"), limits);
        else if (e.name == "EX2A") g = build::symmetric(4);
        else if (e.name == "EX2B") g = build::ex2b(n(e.param, 1, "t"), limits);
        else if (e.name == "EX3")
          g = build::ex3(n(e.param, 1, "t"), std::find(e.flags.begin(), e.flags.end(), "trivial") != e.flags.end(),
                         limits);
        else if (e.name == "WREATH") g = build::wreath_family(n(e.param, 1, "t"), limits).group;
        else throw InvalidArgument(at(e) + "unknown family " + e.name);
        break;
    }
  } catch (const CapExceeded& ex) {
    std::string msg = ex.what();
    if (msg.find(':') == std::string::npos || !std::isdigit(static_cast<unsigned char>(msg[0]))) throw CapExceeded(at(e) + msg);
    throw;
  } catch (const InvalidArgument& ex) {
    std::string msg = ex.what();
    if (msg.empty() || !std::isdigit(static_cast<unsigned char>(msg[0]))) throw InvalidArgument(at(e) + msg);
    throw;
  }
  build::check_order(g.order(), limits, at(e) + e.to_string());
  return g;
}

}  // namespace detail

/// Evaluates an expression to a permutation group. Errors carry the
/// line:column of the offending sub-expression.
inline PermGroup evaluate(const Expr& e, const Limits& limits = {}) { return detail::evaluate(e, limits); }

inline PermGroup build_group(std::string_view text, const Limits& limits = {}) { return evaluate(*parse(text), limits); }

}  // namespace fingen
