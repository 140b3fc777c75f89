#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "perm_group.hpp"
#include "structure.hpp"

namespace fingen {

/// An irredundant generating set with, for each member s, |<S \ {s}>|.
struct IndependentSet {
  std::vector<Elem> elements;
  std::vector<std::size_t> witness;

  std::size_t size() const noexcept { return elements.size(); }
};

struct GenProfile {
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  std::map<std::size_t, IndependentSet> spectrum;
};

struct Bounds {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t lower = 0;
  std::size_t upper = 0;
};

struct GensetOptions {
  bool prime_power_candidates = false;  // restrict the m search to prime-power-order elements
  bool soluble_fast_path = true;        // m = a for soluble groups
};

/// Independence on the Cayley-table group. Fills `witness` when given.
inline bool is_independent_generating(const FiniteGroup& g, std::span<const Elem> s,
                                      std::vector<std::size_t>* witness = nullptr) {
  for (Elem x : s)
    if (x >= g.size()) throw InvalidArgument("element outside the group");
  if (g.closure(s).count() != g.size()) return false;
  std::vector<std::size_t> w;
  bool ok = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<Elem> rest;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) rest.push_back(s[j]);
    std::size_t c = g.closure(rest).count();
    w.push_back(c);
    if (c == g.size()) ok = false;
  }
  if (witness) *witness = std::move(w);
  return ok;
}

/// Independence on permutations, through stabilizer chains.
inline bool is_independent_generating(const PermGroup& g, const std::vector<Permutation>& s,
                                      std::vector<std::uint64_t>* witness = nullptr) {
  for (const auto& x : s)
    if (!g.contains(x)) throw InvalidArgument("element outside the group");
  const std::uint64_t n = g.order();
  if (closure(g.degree(), s).order() != n) return false;
  std::vector<std::uint64_t> w;
  bool ok = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<Permutation> rest;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) rest.push_back(s[j]);
    std::uint64_t c = closure(g.degree(), rest).order();
    w.push_back(c);
    if (c == n) ok = false;
  }
  if (witness) *witness = std::move(w);
  return ok;
}

/// d(G), m(G), witnesses and bounds for one group.
class GenSearch {
 public:
  explicit GenSearch(Structure& s, GensetOptions options = {})
      : s_(s), g_(s.group()), options_(options), deadline_(s.limits().time_budget_seconds) {
    rank_.resize(g_.size());
    std::vector<Elem> el(g_.size());
    for (Elem x = 0; x < g_.size(); ++x) el[x] = x;
    // total order: element order, then permutation images
    std::sort(el.begin(), el.end(), [&](Elem a, Elem b) {
      if (g_.order_of(a) != g_.order_of(b)) return g_.order_of(a) < g_.order_of(b);
      if (g_.has_permutations()) return g_.permutation(a) < g_.permutation(b);
      return a < b;
    });
    ordered_ = el;
    for (std::size_t i = 0; i < el.size(); ++i) rank_[el[i]] = i;
  }

  /// Elements in the fixed total order.
  const std::vector<Elem>& ordered_elements() const noexcept { return ordered_; }

  Bounds bounds() {
    auto cs = s_.chief_series();
    Bounds b;
    b.a = cs.a();
    b.b = cs.b();
    b.lower = b.a + b.b;
    b.upper = big_omega(g_.size());
    return b;
  }

  /// Lower bound for d from the abelianization and cyclicity.
  std::size_t d_lower_bound() {
    if (g_.size() == 1) return 0;
    std::size_t lb = 1;
    std::vector<Elem> comms;
    const auto& gens = g_.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(g_.commutator(gens[i], gens[j]));
    const std::size_t ab = g_.size() / g_.normal_closure(comms).count();
    for (auto [p, e] : factorize(ab)) {
      std::vector<Elem> rel = comms;
      for (Elem x : gens) rel.push_back(g_.pow(x, static_cast<long long>(p)));
      std::size_t q = g_.size() / g_.normal_closure(rel).count();
      lb = std::max<std::size_t>(lb, big_omega(q));
    }
    bool cyclic = false;
    for (Elem x = 0; x < g_.size() && !cyclic; ++x) cyclic = g_.order_of(x) == g_.size();
    if (!cyclic) lb = std::max<std::size_t>(lb, 2);
    return lb;
  }

  /// Exact d(G): randomized upward probe, then an exhaustive proof that
  /// no shorter generating tuple exists.
  std::size_t d() {
    if (d_) return *d_;
    if (g_.size() == 1) return *(d_ = 0);
    restart();
    const std::size_t lb = d_lower_bound();
    std::mt19937_64 rng(s_.limits().seed);
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(g_.size() - 1));
    std::size_t k = lb;
    while (true) {
      bool found = false;
      for (std::size_t trial = 0; trial < 400 * k && !found; ++trial) {
        std::vector<Elem> t(k);
        for (auto& x : t) x = pick(rng);
        found = g_.closure(t).count() == g_.size();
      }
      if (found || exists_generating_tuple(k)) break;
      ++k;
    }
    while (k > lb && exists_generating_tuple(k - 1)) --k;
    return *(d_ = k);
  }

  /// Whether some k elements generate G, by exhaustive search over the
  /// subgroups reachable with k generators (first one a class
  /// representative).
  bool exists_generating_tuple(std::size_t k) {
    if (g_.size() == 1) return true;
    if (k == 0) return false;
    std::vector<ElementSet> level;
    std::vector<std::vector<Elem>> gens;
    std::unordered_map<ElementSet, bool, ElementSetHash> seen;
    for (const auto& cls : g_.conjugacy_classes()) {
      Elem c = cls.front();
      auto h = g_.closure(std::span<const Elem>(&c, 1));
      if (h.count() == g_.size()) return true;
      if (seen.emplace(h, true).second) {
        level.push_back(std::move(h));
        gens.push_back({c});
      }
    }
    for (std::size_t j = 1; j < k; ++j) {
      std::vector<ElementSet> next;
      std::vector<std::vector<Elem>> next_gens;
      seen.clear();
      for (std::size_t i = 0; i < level.size(); ++i) {
        deadline_.check("d(G) exhaustive search");
        const auto& h = level[i];
        const auto hel = h.elements();
        ElementSet done = h;
        for (Elem y = 1; y < g_.size(); ++y) {
          if (done.test(y)) continue;
          for (Elem a : hel)
            for (Elem b : hel) done.set(g_.mul(g_.mul(a, y), b));
          auto j2 = g_.extend(h, gens[i], std::span<const Elem>(&y, 1));
          if (j2.count() == g_.size()) return true;
          if (seen.emplace(j2, true).second) {
            next.push_back(std::move(j2));
            auto ng = gens[i];
            ng.push_back(y);
            next_gens.push_back(std::move(ng));
          }
        }
      }
      level = std::move(next);
      gens = std::move(next_gens);
    }
    return false;
  }

  /// Exact m(G) with a witness.
  IndependentSet m() {
    if (m_) return *m_;
    if (g_.size() == 1) return *(m_ = IndependentSet{});
    if (options_.soluble_fast_path && s_.is_soluble()) {
      std::size_t a = s_.chief_series().a();
      auto w = exact(a);
      if (!w) throw Error("no independent generating set of size a for a soluble group");
      return *(m_ = *w);
    }
    return *(m_ = search_max());
  }

  /// m(G) by the general search, ignoring any fast path.
  IndependentSet search_max() {
    restart();
    Dfs dfs(*this, 0);
    dfs.run();
    return dfs.best;
  }

  /// An independent generating set of exactly k elements, if one exists.
  std::optional<IndependentSet> exact(std::size_t k) {
    if (k == 0) {
      if (g_.size() == 1) return IndependentSet{};
      return std::nullopt;
    }
    restart();
    Dfs dfs(*this, k);
    dfs.run();
    if (dfs.best.size() == k) return dfs.best;
    return std::nullopt;
  }

  /// Witnesses for every k in [d, m].
  GenProfile spectrum() {
    GenProfile p;
    p.d = d();
    auto top = m();
    p.m = top.size();
    auto cs = s_.chief_series();
    p.a = cs.a();
    p.b = cs.b();
    for (std::size_t k = p.d; k <= p.m; ++k) {
      auto w = k == p.m ? std::optional<IndependentSet>(top) : exact(k);
      if (!w) throw Error("Tarski spectrum has a gap at k = " + std::to_string(k));
      p.spectrum[k] = *w;
    }
    return p;
  }

  std::vector<Permutation> to_permutations(const IndependentSet& s) const {
    std::vector<Permutation> out;
    for (Elem x : s.elements) out.push_back(g_.permutation(x));
    return out;
  }

 private:
  void restart() { deadline_ = Deadline(s_.limits().time_budget_seconds); }

  // Depth-first search over independent sets. The first element is a
  // conjugacy class representative (conjugation preserves independence);
  // the rest increase in the total order. target == 0 maximizes, otherwise
  // the search stops at the first generating set of exactly `target`.
  struct Dfs {
    GenSearch& s;
    const FiniteGroup& g;
    std::size_t target;
    IndependentSet best;
    std::size_t upper;
    bool done = false;
    std::vector<Elem> cands;

    Dfs(GenSearch& owner, std::size_t k) : s(owner), g(owner.g_), target(k), upper(big_omega(owner.g_.size())) {
      for (Elem x : s.ordered_) {
        if (x == 0) continue;
        if (s.options_.prime_power_candidates && !is_prime_power(g.order_of(x))) continue;
        cands.push_back(x);
      }
    }

    void run() {
      if (target > upper) return;
      std::vector<Elem> reps;
      for (const auto& cls : g.conjugacy_classes()) {
        Elem c = cls.front();
        if (c == 0) continue;
        if (s.options_.prime_power_candidates && !is_prime_power(g.order_of(c))) continue;
        reps.push_back(c);
      }
      std::sort(reps.begin(), reps.end(), [&](Elem a, Elem b) { return s.rank_[a] < s.rank_[b]; });
      for (Elem c : reps) {
        if (done) return;
        std::vector<Elem> set{c};
        std::vector<ElementSet> without{g.trivial()};
        std::vector<std::vector<Elem>> without_gens{{}};
        ElementSet span = g.closure(std::span<const Elem>(&c, 1));
        recurse(set, span, without, without_gens, 0);
      }
    }

    std::size_t best_size() const { return best.elements.size(); }

    void record(const std::vector<Elem>& set, const std::vector<ElementSet>& without) {
      best.elements = set;
      best.witness.clear();
      for (const auto& w : without) best.witness.push_back(w.count());
    }

    void recurse(std::vector<Elem>& set, const ElementSet& span, std::vector<ElementSet>& without,
                 std::vector<std::vector<Elem>>& without_gens, std::size_t from) {
      s.deadline_.check("independent generating set search");
      const std::size_t n = set.size();
      if (span.count() == g.size()) {
        if (target == 0) {
          if (n > best_size()) {
            record(set, without);
            if (n == upper) done = true;
          }
        } else if (n == target) {
          record(set, without);
          done = true;
        }
        return;
      }
      const std::size_t room = big_omega(g.size() / span.count());
      if (target == 0) {
        if (n + room <= best_size()) return;
      } else {
        if (n + room < target || n >= target) return;
      }
      const std::vector<Elem> span_gens = set;
      for (std::size_t i = from; i < cands.size() && !done; ++i) {
        Elem x = cands[i];
        if (span.test(x)) continue;
        // adding x must keep every old member outside the span of the others
        std::vector<ElementSet> nw;
        std::vector<std::vector<Elem>> nwg;
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
          auto c = g.extend(without[j], without_gens[j], std::span<const Elem>(&x, 1));
          if (c.test(set[j])) ok = false;
          nw.push_back(std::move(c));
          auto gg = without_gens[j];
          gg.push_back(x);
          nwg.push_back(std::move(gg));
        }
        if (!ok) continue;
        nw.push_back(span);
        nwg.push_back(span_gens);
        auto nspan = g.extend(span, span_gens, std::span<const Elem>(&x, 1));
        set.push_back(x);
        recurse(set, nspan, nw, nwg, i + 1);
        set.pop_back();
      }
    }
  };

  Structure& s_;
  const FiniteGroup& g_;
  GensetOptions options_;
  Deadline deadline_;
  std::vector<std::size_t> rank_;
  std::vector<Elem> ordered_;
  std::optional<std::size_t> d_;
  std::optional<IndependentSet> m_;
};

}  // namespace fingen
