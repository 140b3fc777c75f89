#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "gfp.hpp"

namespace fingen {

/// Every subgroup of a group, sorted by (order, sorted element list), with
/// inclusion data and the Moebius function mu(H, G).
struct SubgroupLattice {
  std::vector<ElementSet> subgroups;
  std::vector<std::vector<Elem>> generators;
  std::vector<std::size_t> orders;
  std::vector<long long> mobius;
  std::vector<std::size_t> maximal;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;

  std::size_t size() const noexcept { return subgroups.size(); }
  std::optional<std::size_t> find(const ElementSet& h) const {
    auto it = index.find(h);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/// One factor X/Y of a chief series.
struct ChiefFactor {
  ElementSet lower;  // Y
  ElementSet upper;  // X
  bool abelian = false;
  bool frattini = false;
  // abelian factors: |X/Y| = prime^dimension, one action matrix per group
  // generator (right action by conjugation on row vectors)
  unsigned prime = 0;
  std::size_t dimension = 0;
  std::vector<Elem> basis;
  std::vector<gfp::Matrix> action;
  // non-abelian factors: X/Y = S^copies
  std::size_t simple_order = 0;
  std::size_t copies = 0;

  std::size_t order() const { return upper.count() / lower.count(); }
};

struct ChiefSeries {
  std::vector<ChiefFactor> factors;  // bottom to top

  /// Non-Frattini factor count.
  std::size_t a() const {
    return static_cast<std::size_t>(std::count_if(factors.begin(), factors.end(), [](const auto& f) { return !f.frattini; }));
  }
  /// Non-abelian factor count.
  std::size_t b() const {
    return static_cast<std::size_t>(std::count_if(factors.begin(), factors.end(), [](const auto& f) { return !f.abelian; }));
  }
};

enum class TieBreak { Least, Greatest };

/// Structural data of one finite group, computed on demand and cached.
class Structure {
 public:
  explicit Structure(FiniteGroup g, Limits limits = {}) : g_(std::move(g)), limits_(limits) {}

  const FiniteGroup& group() const noexcept { return g_; }
  const Limits& limits() const noexcept { return limits_; }

  const SubgroupLattice& lattice() {
    if (!lattice_) lattice_ = build_lattice();
    return *lattice_;
  }

  std::vector<ElementSet> maximal_subgroups() {
    std::vector<ElementSet> out;
    for (auto i : lattice().maximal) out.push_back(lattice().subgroups[i]);
    return out;
  }

  /// Intersection of all maximal subgroups.
  ElementSet frattini() {
    ElementSet f = g_.whole();
    for (auto i : lattice().maximal) f = f & lattice().subgroups[i];
    return f;
  }

  /// Frat(G/Y) pulled back to G: the intersection of the maximal subgroups
  /// of G that contain Y.
  ElementSet frattini_above(const ElementSet& y) {
    ElementSet f = g_.whole();
    for (auto i : lattice().maximal)
      if (y.subset_of(lattice().subgroups[i])) f = f & lattice().subgroups[i];
    return f;
  }

  /// Every normal subgroup, sorted by (order, element list).
  const std::vector<ElementSet>& normal_subgroups() {
    if (normals_) return *normals_;
    std::vector<ElementSet> found;
    std::unordered_map<ElementSet, bool, ElementSetHash> seen;
    auto add = [&](ElementSet s) {
      if (seen.emplace(s, true).second) found.push_back(std::move(s));
    };
    add(g_.trivial());
    for (const auto& cls : g_.conjugacy_classes()) {
      Elem rep = cls.front();
      add(g_.normal_closure(std::span<const Elem>(&rep, 1)));
    }
    for (std::size_t i = 0; i < found.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        if (found[i].subset_of(found[j]) || found[j].subset_of(found[i])) continue;
        add(product_of_normals(found[i], found[j]));
      }
    sort_sets(found);
    normals_ = std::move(found);
    return *normals_;
  }

  /// Minimal normal subgroups of G/Y pulled back to G (Y normal). A minimal
  /// normal M/Y is the normal closure of Y and any element of M outside Y,
  /// so class representatives suffice.
  std::vector<ElementSet> minimal_normal_above(const ElementSet& y) {
    std::vector<ElementSet> cands;
    std::unordered_map<ElementSet, bool, ElementSetHash> seen;
    auto ygens = g_.generators_of(y);
    for (const auto& cls : g_.conjugacy_classes()) {
      if (y.test(cls.front())) continue;
      std::vector<Elem> gens = ygens;
      gens.push_back(cls.front());
      auto m = g_.normal_closure(gens);
      if (seen.emplace(m, true).second) cands.push_back(std::move(m));
    }
    std::vector<ElementSet> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < cands.size() && minimal; ++j)
        if (j != i && cands[j].subset_of(cands[i]) && !(cands[j] == cands[i])) minimal = false;
      if (minimal) out.push_back(cands[i]);
    }
    sort_sets(out);
    return out;
  }

  std::vector<ElementSet> minimal_normal_subgroups() { return minimal_normal_above(g_.trivial()); }

  ElementSet socle() {
    ElementSet s = g_.trivial();
    for (const auto& m : minimal_normal_subgroups()) s = product_of_normals(s, m);
    return s;
  }

  bool monolithic_primitive() {
    if (g_.size() == 1) return false;
    return minimal_normal_subgroups().size() == 1 && frattini().count() == 1;
  }

  bool is_soluble() {
    ElementSet cur = g_.whole();
    while (cur.count() > 1) {
      ElementSet next = derived(cur);
      if (next == cur) return false;
      cur = next;
    }
    return true;
  }

  /// Derived subgroup of a normal subgroup H (again normal in G).
  ElementSet derived(const ElementSet& h) {
    auto gens = g_.generators_of(h);
    std::vector<Elem> comms;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(g_.commutator(gens[i], gens[j]));
    return g_.normal_closure(comms);
  }

  /// {g : [x, g] in Y for all x in X}, i.e. the kernel of G acting on X/Y.
  ElementSet centralizer_of_factor(const ElementSet& x, const ElementSet& y) {
    auto xgens = g_.generators_of(x);
    ElementSet c(g_.size());
    for (Elem g = 0; g < g_.size(); ++g) {
      bool central = true;
      for (Elem a : xgens)
        if (!y.test(g_.commutator(a, g))) {
          central = false;
          break;
        }
      if (central) c.set(g);
    }
    return c;
  }

  /// X/Y lies in Frat(G/Y).
  bool is_frattini_factor(const ElementSet& x, const ElementSet& y) { return x.subset_of(frattini_above(y)); }

  /// Some U with U X = G and U meet X = Y (scan of the lattice).
  bool has_complement(const ElementSet& x, const ElementSet& y) {
    const auto& lat = lattice();
    const std::size_t need = g_.size() * y.count() / x.count();
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (lat.orders[i] != need) continue;
      if (!y.subset_of(lat.subgroups[i])) continue;
      if ((lat.subgroups[i] & x) == y) return true;
    }
    return false;
  }

  ChiefSeries chief_series(TieBreak tie = TieBreak::Least) {
    ChiefSeries series;
    ElementSet y = g_.trivial();
    while (y.count() < g_.size()) {
      auto mins = minimal_normal_above(y);
      if (mins.empty()) throw Error("chief series: no minimal normal subgroup above a proper normal subgroup");
      ElementSet x = tie == TieBreak::Least ? mins.front() : mins.back();
      series.factors.push_back(make_factor(x, y));
      y = x;
    }
    return series;
  }

  ChiefFactor make_factor(const ElementSet& x, const ElementSet& y) {
    ChiefFactor f;
    f.lower = y;
    f.upper = x;
    auto xgens = g_.generators_of(x);
    f.abelian = true;
    for (std::size_t i = 0; i < xgens.size() && f.abelian; ++i)
      for (std::size_t j = i + 1; j < xgens.size() && f.abelian; ++j)
        if (!y.test(g_.commutator(xgens[i], xgens[j]))) f.abelian = false;
    const std::size_t ord = x.count() / y.count();
    if (f.abelian) {
      f.prime = static_cast<unsigned>(prime_of(ord));
      if (f.prime == 0) throw Error("abelian chief factor of non-prime-power order");
      f.dimension = big_omega(ord);
      fill_action(f);
      f.frattini = is_frattini_factor(x, y);
    } else {
      fill_nonabelian(f);
      f.frattini = false;
    }
    return f;
  }

  /// Coordinates of each element of X in the basis of X/Y, encoded base p;
  /// elements outside X map to -1.
  std::vector<std::int64_t> coordinates(const ChiefFactor& f) {
    std::vector<std::int64_t> code(g_.size(), -1);
    auto yel = f.lower.elements();
    const std::size_t total = ipow(f.prime, static_cast<unsigned>(f.dimension));
    for (std::size_t c = 0; c < total; ++c) {
      auto v = gfp::decode(c, f.dimension, f.prime);
      Elem w = 0;
      for (std::size_t i = 0; i < f.dimension; ++i) w = g_.mul(w, g_.pow(f.basis[i], v[i]));
      for (Elem yy : yel) code[g_.mul(w, yy)] = static_cast<std::int64_t>(c);
    }
    return code;
  }

  /// Matrix of the conjugation action of g on an abelian factor.
  gfp::Matrix action_matrix(const ChiefFactor& f, const std::vector<std::int64_t>& code, Elem g) {
    gfp::Matrix m(f.dimension, f.dimension);
    for (std::size_t i = 0; i < f.dimension; ++i) {
      auto v = gfp::decode(static_cast<std::size_t>(code[g_.conj(f.basis[i], g)]), f.dimension, f.prime);
      for (std::size_t j = 0; j < f.dimension; ++j) m(i, j) = v[j];
    }
    return m;
  }

  /// Abelian factors are G-equivalent iff G-isomorphic: same prime and
  /// dimension, same kernel, and an invertible intertwiner.
  bool gequivalent_abelian(const ChiefFactor& f1, const ChiefFactor& f2) {
    if (!f1.abelian || !f2.abelian) throw InvalidArgument("gequivalent_abelian needs abelian factors");
    if (f1.prime != f2.prime || f1.dimension != f2.dimension) return false;
    if (!(centralizer_of_factor(f1.upper, f1.lower) == centralizer_of_factor(f2.upper, f2.lower))) return false;
    if (f1.action.empty()) return true;  // trivial group acting
    auto space = gfp::intertwiners(f1.action, f2.action, f1.prime);
    return has_invertible(space, f1.prime);
  }

  /// Non-Frattini factors of `series` G-equivalent to the abelian factor f.
  std::size_t delta(const ChiefSeries& series, const ChiefFactor& f) {
    std::size_t d = 0;
    for (const auto& other : series.factors)
      if (other.abelian && !other.frattini && gequivalent_abelian(other, f)) ++d;
    return d;
  }

  /// Intertwiner search: a basis element first, then all combinations
  /// while p^dim stays small; beyond that an irreducible module is assumed
  /// (every non-zero intertwiner is then invertible).
  static bool has_invertible(const std::vector<gfp::Matrix>& space, gfp::Scalar p) {
    if (space.empty()) return false;
    for (const auto& t : space)
      if (gfp::is_invertible(t, p)) return true;
    const std::size_t dim = space.size();
    if (dim > 12 || ipow(p, static_cast<unsigned>(dim)) > 4096) return true;
    const std::size_t total = ipow(p, static_cast<unsigned>(dim));
    for (std::size_t c = 1; c < total; ++c) {
      auto coeff = gfp::decode(c, dim, p);
      gfp::Matrix t(space[0].rows(), space[0].cols());
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t r = 0; r < t.rows(); ++r)
          for (std::size_t s = 0; s < t.cols(); ++s)
            t(r, s) = static_cast<gfp::Scalar>((t(r, s) + std::uint64_t{coeff[k]} * space[k](r, s)) % p);
      if (gfp::is_invertible(t, p)) return true;
    }
    return false;
  }

  ElementSet product_of_normals(const ElementSet& a, const ElementSet& b) {
    ElementSet r(g_.size());
    auto ea = a.elements();
    auto eb = b.elements();
    for (Elem x : ea)
      for (Elem y : eb) r.set(g_.mul(x, y));
    return r;
  }

 private:
  static void sort_sets(std::vector<ElementSet>& v) {
    std::sort(v.begin(), v.end(), [](const ElementSet& a, const ElementSet& b) {
      auto ca = a.count(), cb = b.count();
      if (ca != cb) return ca < cb;
      return lex_less(a, b);
    });
  }

  SubgroupLattice build_lattice() {
    if (g_.size() > limits_.lattice_cap)
      throw CapExceeded("subgroup lattice of a group of order " + std::to_string(g_.size()));
    Deadline deadline(limits_.time_budget_seconds);
    const std::size_t max_subgroups = 200'000;
    std::vector<ElementSet> subs;
    std::vector<std::vector<Elem>> gens;
    std::unordered_map<ElementSet, std::size_t, ElementSetHash> seen;
    auto add = [&](ElementSet s, std::vector<Elem> gl) {
      if (seen.emplace(s, subs.size()).second) {
        subs.push_back(std::move(s));
        gens.push_back(std::move(gl));
        if (subs.size() > max_subgroups) throw CapExceeded("too many subgroups");
      }
    };
    add(g_.trivial(), {});
    for (Elem x = 1; x < g_.size(); ++x) {
      Elem e = x;
      add(g_.closure(std::span<const Elem>(&e, 1)), {x});
    }
    // join every known subgroup with one more element until nothing new
    // appears; <H, x> only depends on the double coset H x H
    for (std::size_t i = 0; i < subs.size(); ++i) {
      deadline.check("subgroup lattice");
      const ElementSet h = subs[i];
      const std::vector<Elem> hg = gens[i];
      const auto hel = h.elements();
      ElementSet done = h;
      for (Elem x = 1; x < g_.size(); ++x) {
        if (done.test(x)) continue;
        for (Elem a : hel)
          for (Elem b : hel) done.set(g_.mul(g_.mul(a, x), b));
        std::vector<Elem> ng = hg;
        ng.push_back(x);
        add(g_.extend(h, hg, std::span<const Elem>(&x, 1)), std::move(ng));
      }
    }

    std::vector<std::size_t> order(subs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::size_t> counts(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) counts[i] = subs[i].count();
    std::vector<std::vector<Elem>> elists(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) elists[i] = subs[i].elements();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (counts[a] != counts[b]) return counts[a] < counts[b];
      return elists[a] < elists[b];
    });

    SubgroupLattice lat;
    for (auto i : order) {
      lat.index.emplace(subs[i], lat.subgroups.size());
      lat.subgroups.push_back(subs[i]);
      lat.generators.push_back(gens[i]);
      lat.orders.push_back(counts[i]);
    }
    const std::size_t n = lat.size();
    // strict supergroups of each subgroup
    std::vector<std::vector<std::size_t>> above(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (lat.orders[j] > lat.orders[i] && lat.orders[j] % lat.orders[i] == 0 &&
            lat.subgroups[i].subset_of(lat.subgroups[j]))
          above[i].push_back(j);
    lat.mobius.assign(n, 0);
    lat.mobius[n - 1] = 1;
    for (std::size_t i = n - 1; i-- > 0;) {
      long long s = 0;
      for (auto j : above[i]) s += lat.mobius[j];
      lat.mobius[i] = -s;
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (above[i].size() == 1) lat.maximal.push_back(i);  // only G itself lies above
    return lat;
  }

  void fill_action(ChiefFactor& f) {
    ElementSet span = f.lower;
    std::vector<Elem> span_gens = g_.generators_of(f.lower);
    for (Elem x : f.upper.elements()) {
      if (span.test(x)) continue;
      f.basis.push_back(x);
      span = g_.extend(span, span_gens, std::span<const Elem>(&x, 1));
      span_gens.push_back(x);
      if (f.basis.size() == f.dimension) break;
    }
    auto code = coordinates(f);
    for (Elem g : g_.generators()) f.action.push_back(action_matrix(f, code, g));
  }

  // X/Y = S^k: a minimal normal subgroup of X/Y itself is one copy of S.
  void fill_nonabelian(ChiefFactor& f) {
    auto xgens = g_.generators_of(f.upper);
    auto ygens = g_.generators_of(f.lower);
    std::size_t best = f.upper.count();
    for (Elem g : f.upper.elements()) {
      if (f.lower.test(g)) continue;
      ElementSet s = f.lower;
      s.set(g);
      std::vector<Elem> queue = s.elements();
      for (std::size_t i = 0; i < queue.size(); ++i) {
        auto push = [&](Elem z) {
          if (!s.test(z)) {
            s.set(z);
            queue.push_back(z);
          }
        };
        for (Elem h : xgens) push(g_.conj(queue[i], h));
        for (std::size_t j = 0; j <= i; ++j) {
          push(g_.mul(queue[i], queue[j]));
          push(g_.mul(queue[j], queue[i]));
        }
      }
      best = std::min(best, s.count());
    }
    f.simple_order = best / f.lower.count();
    std::size_t total = f.upper.count() / f.lower.count();
    f.copies = 0;
    while (total > 1) {
      total /= f.simple_order;
      ++f.copies;
    }
  }

  FiniteGroup g_;
  Limits limits_;
  std::optional<SubgroupLattice> lattice_;
  std::optional<std::vector<ElementSet>> normals_;
};

}  // namespace fingen
