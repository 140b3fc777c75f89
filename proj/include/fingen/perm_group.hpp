#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "permutation.hpp"

namespace fingen {

/// Base and strong generating set built by deterministic Schreier-Sims.
///
/// Each new base point is the smallest point moved by the generator that
/// forced it. Transversals are stored explicitly, so memory is
/// O(degree * sum of orbit lengths).
class StabilizerChain {
 public:
  struct Level {
    Point base = 0;
    std::vector<Permutation> generators;
    std::vector<std::int32_t> slot;  // slot[x] = index of x in orbit, or -1
    std::vector<Point> orbit;
    std::vector<Permutation> transversal;  // transversal[k] maps base to orbit[k]
    std::vector<Permutation> inverse_transversal;
  };

  StabilizerChain() = default;

  StabilizerChain(std::size_t degree, std::span<const Permutation> generators) : degree_(degree) {
    std::vector<Permutation> gens;
    for (const auto& g : generators) {
      if (g.degree() != degree) throw InvalidArgument("generator degree mismatch");
      if (!g.is_identity()) gens.push_back(g);
    }
    for (const auto& g : gens) {
      bool fixes_base = true;
      for (const auto& lv : levels_)
        if (g[lv.base] != lv.base) fixes_base = false;
      if (fixes_base) add_level(*g.smallest_moved_point());
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      for (const auto& g : gens) {
        bool fixes = true;
        for (std::size_t j = 0; j < i && fixes; ++j) fixes = g[levels_[j].base] == levels_[j].base;
        if (fixes) levels_[i].generators.push_back(g);
      }
      rebuild_orbit(i);
    }
    run();
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Level>& levels() const noexcept { return levels_; }

  std::vector<Point> base() const {
    std::vector<Point> b;
    for (const auto& lv : levels_) b.push_back(lv.base);
    return b;
  }

  /// Group order; throws CapExceeded if it does not fit in 64 bits.
  std::uint64_t order() const {
    std::uint64_t r = 1;
    for (const auto& lv : levels_) {
      if (r > std::numeric_limits<std::uint64_t>::max() / lv.orbit.size())
        throw CapExceeded("group order overflows 64 bits");
      r *= lv.orbit.size();
    }
    return r;
  }

  /// Sifts g from level `start`; returns the residue and the level where
  /// sifting stopped (levels().size() when every level was passed).
  std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t start = 0) const {
    for (std::size_t l = start; l < levels_.size(); ++l) {
      const auto& lv = levels_[l];
      std::int32_t s = lv.slot[g[lv.base]];
      if (s < 0) return {std::move(g), l};
      g = g * lv.inverse_transversal[s];
    }
    return {std::move(g), levels_.size()};
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) return false;
    auto [res, lvl] = sift(g);
    return lvl == levels_.size() && res.is_identity();
  }

  /// Canonical representative of the right coset N*y, where N is the group
  /// of this chain: the coset element whose images of the base points are
  /// lexicographically least.
  Permutation canonical_right_coset(Permutation y) const {
    for (const auto& lv : levels_) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < lv.orbit.size(); ++k)
        if (y[lv.orbit[k]] < y[lv.orbit[best]]) best = k;
      y = lv.transversal[best] * y;
    }
    return y;
  }

  /// All elements; the caller is responsible for checking the order first.
  std::vector<Permutation> elements() const {
    std::vector<Permutation> current{Permutation::identity(degree_)};
    for (std::size_t l = levels_.size(); l-- > 0;) {
      std::vector<Permutation> next;
      next.reserve(current.size() * levels_[l].orbit.size());
      for (const auto& x : current)
        for (const auto& t : levels_[l].transversal) next.push_back(x * t);
      current = std::move(next);
    }
    return current;
  }

 private:
  void add_level(Point base) {
    Level lv;
    lv.base = base;
    levels_.push_back(std::move(lv));
    rebuild_orbit(levels_.size() - 1);
  }

  void rebuild_orbit(std::size_t i) {
    auto& lv = levels_[i];
    lv.slot.assign(degree_, -1);
    lv.orbit = {lv.base};
    lv.transversal = {Permutation::identity(degree_)};
    lv.slot[lv.base] = 0;
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      for (const auto& s : lv.generators) {
        Point img = s[lv.orbit[k]];
        if (lv.slot[img] >= 0) continue;
        lv.slot[img] = static_cast<std::int32_t>(lv.orbit.size());
        lv.orbit.push_back(img);
        lv.transversal.push_back(lv.transversal[k] * s);
      }
    }
    lv.inverse_transversal.clear();
    for (const auto& t : lv.transversal) lv.inverse_transversal.push_back(t.inverse());
  }

  // Holt's SCHREIERSIMS: process levels bottom-up, restarting at the level
  // where a non-trivial sifted Schreier generator had to be inserted.
  void run() {
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
    while (i >= 0) {
      bool restarted = false;
      auto& lv = levels_[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < lv.orbit.size() && !restarted; ++k) {
        for (std::size_t si = 0; si < lv.generators.size() && !restarted; ++si) {
          const auto& s = lv.generators[si];
          Point img = s[lv.orbit[k]];
          Permutation schreier = lv.transversal[k] * s * lv.inverse_transversal[lv.slot[img]];
          auto [res, j] = sift(std::move(schreier), static_cast<std::size_t>(i) + 1);
          if (res.is_identity()) continue;
          if (j == levels_.size()) add_level(*res.smallest_moved_point());
          for (std::size_t l = static_cast<std::size_t>(i) + 1; l <= j; ++l) {
            levels_[l].generators.push_back(res);
            rebuild_orbit(l);
          }
          i = static_cast<std::ptrdiff_t>(j);
          restarted = true;
        }
      }
      if (!restarted) --i;
    }
  }

  std::size_t degree_ = 0;
  std::vector<Level> levels_;
};

/// A permutation group given by generators; the stabilizer chain is built
/// once on first use and shared between copies.
class PermGroup {
 public:
  PermGroup() : PermGroup(0, {}) {}

  PermGroup(std::size_t degree, std::vector<Permutation> generators)
      : degree_(degree), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
    for (const auto& g : generators_)
      if (g.degree() != degree_) throw InvalidArgument("generator degree differs from group degree");
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }

  const StabilizerChain& chain() const {
    std::call_once(cache_->once, [this] { cache_->chain.emplace(degree_, generators_); });
    return *cache_->chain;
  }

  std::uint64_t order() const { return chain().order(); }
  bool is_trivial() const { return order() == 1; }

  bool contains(const Permutation& g) const { return g.degree() == degree_ && chain().contains(g); }

  Permutation identity() const { return Permutation::identity(degree_); }

  /// Every element, refusing above `cap`.
  std::vector<Permutation> elements(std::size_t cap) const {
    if (order() > cap) throw CapExceeded("element enumeration of a group of order " + std::to_string(order()));
    return chain().elements();
  }

  /// Degree plus hash of the sorted generator images.
  std::string fingerprint() const {
    std::vector<Permutation> sorted = generators_;
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t h = 1469598103934665603ULL ^ degree_;
    for (const auto& g : sorted) {
      for (Point p : g.images()) {
        h ^= p + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
      }
      h ^= 0xff;
      h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::to_string(degree_) + ":" + buf;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::optional<StabilizerChain> chain;
  };

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::shared_ptr<Cache> cache_;
};

inline PermGroup closure(std::size_t degree, std::vector<Permutation> generators) {
  return PermGroup(degree, std::move(generators));
}

inline bool is_subgroup(const PermGroup& h, const PermGroup& g) {
  if (h.degree() != g.degree()) return false;
  for (const auto& x : h.generators())
    if (!g.contains(x)) return false;
  return true;
}

inline bool same_group(const PermGroup& a, const PermGroup& b) {
  return is_subgroup(a, b) && a.order() == b.order();
}

inline bool is_normal(const PermGroup& g, const PermGroup& n) {
  if (!is_subgroup(n, g)) return false;
  for (const auto& x : n.generators())
    for (const auto& s : g.generators())
      if (!n.contains(x.conjugate(s))) return false;
  return true;
}

inline bool is_abelian(const PermGroup& g) {
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (gens[i] * gens[j] != gens[j] * gens[i]) return false;
  return true;
}

/// Smallest normal subgroup of G containing S.
inline PermGroup normal_closure(const PermGroup& g, const std::vector<Permutation>& s) {
  std::vector<Permutation> gens;
  for (const auto& x : s) {
    if (!g.contains(x)) throw InvalidArgument("normal_closure: element " + x.to_string() + " is not in the group");
    if (!x.is_identity()) gens.push_back(x);
  }
  PermGroup n(g.degree(), gens);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (const auto& t : g.generators()) {
      Permutation c = gens[k].conjugate(t);
      if (!n.contains(c)) {
        gens.push_back(std::move(c));
        n = PermGroup(g.degree(), gens);
      }
    }
  }
  return n;
}

/// C_G(A) by a sweep over the elements of G.
inline PermGroup centralizer_of_subgroup(const PermGroup& g, const PermGroup& a, const Limits& limits = {}) {
  std::vector<Permutation> gens;
  PermGroup c(g.degree(), {});
  for (const auto& x : g.elements(limits.element_cap)) {
    bool commutes = true;
    for (const auto& y : a.generators())
      if (x * y != y * x) {
        commutes = false;
        break;
      }
    if (commutes && !c.contains(x)) {
      gens.push_back(x);
      c = PermGroup(g.degree(), gens);
    }
  }
  return c;
}

inline Permutation commutator(const Permutation& a, const Permutation& b) {
  return a.inverse() * b.inverse() * a * b;
}

inline PermGroup derived_subgroup(const PermGroup& g) {
  std::vector<Permutation> comms;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(commutator(gens[i], gens[j]));
  return normal_closure(g, comms);
}

/// G = G^(0) > G^(1) > ... until the series becomes stationary.
inline std::vector<PermGroup> derived_series(const PermGroup& g) {
  std::vector<PermGroup> series{g};
  while (true) {
    PermGroup next = derived_subgroup(series.back());
    if (next.order() == series.back().order()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline bool is_soluble(const PermGroup& g) { return derived_series(g).back().order() == 1; }

inline bool is_pgroup(const PermGroup& g) { return is_prime_power(g.order()); }

/// Cyclic of prime power order (the trivial group qualifies). In a cyclic
/// p-group the subgroups form a chain, so one of any generating set
/// already generates.
inline bool is_cyclic_of_prime_power_order(const PermGroup& g) {
  std::uint64_t n = g.order();
  if (n == 1) return true;
  if (!is_prime_power(n)) return false;
  for (const auto& x : g.generators())
    if (x.order() == n) return true;
  return false;
}

/// A map defined on generators, together with its source and target.
///
/// Images of arbitrary elements are found by sifting through the graph
/// group {(x, phi(x))} acting on the disjoint union of both point sets.
class Homomorphism {
 public:
  Homomorphism() = default;
  Homomorphism(PermGroup source, PermGroup target, std::vector<Permutation> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.generators().size())
      throw InvalidArgument("homomorphism needs one image per source generator");
    for (const auto& y : images_)
      if (y.degree() != target_.degree()) throw InvalidArgument("image degree mismatch");
    std::vector<Permutation> pairs;
    for (std::size_t i = 0; i < images_.size(); ++i) pairs.push_back(join(source_.generators()[i], images_[i]));
    graph_ = PermGroup(source_.degree() + target_.degree(), std::move(pairs));
  }

  const PermGroup& source() const noexcept { return source_; }
  const PermGroup& target() const noexcept { return target_; }
  const std::vector<Permutation>& images() const noexcept { return images_; }

  /// The generator map extends to a homomorphism iff the graph group
  /// projects isomorphically onto the source.
  bool is_well_defined() const { return graph_.order() == source_.order(); }

  Permutation operator()(const Permutation& x) const {
    if (!source_.contains(x)) throw InvalidArgument("element outside the homomorphism source");
    auto [res, lvl] = graph_.chain().sift(join(x, Permutation::identity(target_.degree())));
    std::vector<Point> img(target_.degree());
    const std::size_t off = source_.degree();
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = res[static_cast<Point>(off + i)] - static_cast<Point>(off);
    for (std::size_t i = 0; i < off; ++i)
      if (res[static_cast<Point>(i)] != i) throw InvalidArgument("generator map is not a homomorphism");
    return Permutation(std::move(img)).inverse();
  }

  /// Spot-check: random words w raised to their order are relators of the
  /// source; their images must be trivial.
  bool check_random_relators(std::size_t count, std::uint64_t seed) const {
    const auto& gens = source_.generators();
    if (gens.empty()) return true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    for (std::size_t t = 0; t < count; ++t) {
      Permutation w = source_.identity();
      Permutation v = target_.identity();
      for (std::size_t k = len(rng); k > 0; --k) {
        std::size_t i = pick(rng);
        w *= gens[i];
        v *= images_[i];
      }
      if (!v.pow(static_cast<long long>(w.order())).is_identity()) return false;
    }
    return true;
  }

 private:
  static Permutation join(const Permutation& a, const Permutation& b) {
    std::vector<Point> img(a.degree() + b.degree());
    for (std::size_t i = 0; i < a.degree(); ++i) img[i] = a[static_cast<Point>(i)];
    for (std::size_t i = 0; i < b.degree(); ++i)
      img[a.degree() + i] = static_cast<Point>(a.degree()) + b[static_cast<Point>(i)];
    return Permutation(std::move(img));
  }

  PermGroup source_;
  PermGroup target_;
  std::vector<Permutation> images_;
  PermGroup graph_;
};

/// G/N as the action on right cosets of N, found breadth-first from N
/// itself; each coset is represented by its first-found element.
inline std::pair<PermGroup, Homomorphism> quotient(const PermGroup& g, const PermGroup& n,
                                                   const Limits& limits = {}) {
  if (!is_normal(g, n)) throw InvalidArgument("quotient: subgroup is not normal");
  const auto& chain = n.chain();
  std::uint64_t index = g.order() / n.order();
  if (index > limits.element_cap) throw CapExceeded("quotient of index " + std::to_string(index));

  std::unordered_map<Permutation, std::size_t, PermutationHash> ids;
  std::vector<Permutation> reps{g.identity()};
  ids.emplace(chain.canonical_right_coset(g.identity()), 0);
  const auto& gens = g.generators();
  std::vector<std::vector<Point>> action(gens.size());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Permutation y = reps[k] * gens[s];
      auto [it, fresh] = ids.emplace(chain.canonical_right_coset(y), reps.size());
      if (fresh) reps.push_back(std::move(y));
      action[s].push_back(static_cast<Point>(it->second));
    }
  }
  std::vector<Permutation> images;
  for (auto& a : action) images.emplace_back(std::move(a));
  PermGroup q(reps.size(), images);
  return {q, Homomorphism(g, q, std::move(images))};
}

}  // namespace fingen
