#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "perm_group.hpp"

namespace fingen {

/// Index of an element inside a FiniteGroup; 0 is always the identity.
using Elem = std::uint32_t;

/// A set of group elements as a bitset over element indices.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const noexcept { return n_; }
  bool test(Elem x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1U; }
  void set(Elem x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const ElementSet& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  ElementSet operator&(const ElementSet& o) const {
    ElementSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  ElementSet operator|(const ElementSet& o) const {
    ElementSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
    return r;
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(static_cast<Elem>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : words_) {
      h ^= w;
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  /// Lexicographic comparison of the sorted element lists.
  friend bool lex_less(const ElementSet& a, const ElementSet& b) {
    auto ea = a.elements();
    auto eb = b.elements();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

/// A finite group held as a full Cayley table.
///
/// Elements are numbered in breadth-first order from the identity along
/// right multiplication by the generators, so numbering is deterministic.
/// When the group came from permutations, those are kept for display and
/// ordering.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  static FiniteGroup from_perm_group(const PermGroup& g, const Limits& limits = {}) {
    std::uint64_t order = g.order();
    if (order > limits.table_cap || order > 65535)
      throw CapExceeded("Cayley table for a group of order " + std::to_string(order));
    std::vector<Permutation> gens;
    for (const auto& s : g.generators()) gens.push_back(s);
    const std::size_t n = static_cast<std::size_t>(order);
    const std::size_t k = gens.size();

    FiniteGroup fg;
    fg.n_ = n;
    fg.degree_ = g.degree();
    fg.perms_.reserve(n);
    fg.perms_.push_back(g.identity());
    std::unordered_map<Permutation, Elem, PermutationHash> index;
    index.emplace(g.identity(), 0);
    std::vector<std::uint32_t> right(n * k);
    std::vector<Elem> parent(n, 0);
    std::vector<std::uint32_t> via(n, 0);
    for (std::size_t i = 0; i < fg.perms_.size(); ++i) {
      for (std::size_t s = 0; s < k; ++s) {
        Permutation y = fg.perms_[i] * gens[s];
        auto [it, fresh] = index.emplace(y, static_cast<Elem>(fg.perms_.size()));
        if (fresh) {
          parent[fg.perms_.size()] = static_cast<Elem>(i);
          via[fg.perms_.size()] = static_cast<std::uint32_t>(s);
          fg.perms_.push_back(std::move(y));
        }
        right[i * k + s] = it->second;
      }
    }
    if (fg.perms_.size() != n) throw Error("element enumeration disagrees with chain order");
    fg.fill_table(right, parent, via, k);
    for (const auto& s : gens) fg.generators_.push_back(index.at(s));
    fg.finish();
    return fg;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  bool has_permutations() const noexcept { return !perms_.empty(); }
  const Permutation& permutation(Elem x) const { return perms_.at(x); }
  const std::vector<Elem>& generators() const noexcept { return generators_; }

  Elem mul(Elem a, Elem b) const noexcept { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const noexcept { return inverse_[a]; }
  std::uint32_t order_of(Elem a) const noexcept { return orders_[a]; }
  Elem conj(Elem x, Elem g) const noexcept { return mul(mul(inv(g), x), g); }
  Elem pow(Elem x, long long e) const noexcept {
    std::uint32_t o = orders_[x];
    long long r = ((e % o) + o) % o;
    Elem acc = 0;
    for (long long i = 0; i < r; ++i) acc = mul(acc, x);
    return acc;
  }
  Elem commutator(Elem a, Elem b) const noexcept { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  ElementSet whole() const {
    ElementSet s(n_);
    for (Elem x = 0; x < n_; ++x) s.set(x);
    return s;
  }

  ElementSet trivial() const {
    ElementSet s(n_);
    s.set(0);
    return s;
  }

  ElementSet closure(std::span<const Elem> gens) const { return extend(trivial(), {}, gens); }

  /// <H, extra>, given H and a generating list for it.
  ElementSet extend(const ElementSet& h, std::span<const Elem> h_gens, std::span<const Elem> extra) const {
    std::vector<Elem> gens(h_gens.begin(), h_gens.end());
    for (Elem e : extra)
      if (e != 0) gens.push_back(e);
    ElementSet s = h;
    std::vector<Elem> queue = h.elements();
    if (queue.empty()) {
      s.set(0);
      queue.push_back(0);
    }
    // Elements of H are already closed under H's generators; only new
    // generators need to be applied to them.
    const std::size_t old = queue.size();
    const std::size_t first_new_gen = h_gens.size();
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t start = i < old ? first_new_gen : 0;
      for (std::size_t j = start; j < gens.size(); ++j) {
        Elem y = mul(queue[i], gens[j]);
        if (!s.test(y)) {
          s.set(y);
          queue.push_back(y);
        }
      }
    }
    return s;
  }

  /// Smallest normal subgroup containing the given elements.
  ElementSet normal_closure(std::span<const Elem> elems) const {
    std::vector<Elem> gens;
    ElementSet s = trivial();
    std::vector<Elem> queue{0};
    auto add = [&](Elem y) {
      if (!s.test(y)) {
        s.set(y);
        queue.push_back(y);
      }
    };
    for (Elem e : elems) add(e);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Elem x = queue[i];
      for (Elem g : generators_) add(conj(x, g));
      for (std::size_t j = 0; j <= i; ++j) {
        add(mul(x, queue[j]));
        add(mul(queue[j], x));
      }
    }
    return s;
  }

  /// Greedy generating list: walk the elements in index order and keep
  /// those not already in the span of the kept ones.
  std::vector<Elem> generators_of(const ElementSet& h) const {
    std::vector<Elem> gens;
    ElementSet span = trivial();
    for (Elem x : h.elements()) {
      if (span.test(x)) continue;
      span = extend(span, gens, std::span<const Elem>(&x, 1));
      gens.push_back(x);
      if (span == h) break;
    }
    return gens;
  }

  bool is_subgroup(const ElementSet& h) const {
    if (!h.test(0)) return false;
    for (Elem a : h.elements())
      for (Elem b : h.elements())
        if (!h.test(mul(a, b))) return false;
    return true;
  }

  bool is_normal(const ElementSet& h) const {
    for (Elem x : h.elements())
      for (Elem g : generators_)
        if (!h.test(conj(x, g))) return false;
    return true;
  }

  bool is_abelian_set(const ElementSet& h) const {
    auto el = h.elements();
    for (Elem a : el)
      for (Elem b : el)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Conjugacy classes ordered by smallest member; each class is sorted.
  const std::vector<std::vector<Elem>>& conjugacy_classes() const {
    if (classes_) return *classes_;
    std::vector<std::vector<Elem>> out;
    std::vector<bool> seen(n_, false);
    for (Elem x = 0; x < n_; ++x) {
      if (seen[x]) continue;
      std::vector<Elem> cls{x};
      seen[x] = true;
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (Elem g : generators_) {
          Elem y = conj(cls[i], g);
          if (!seen[y]) {
            seen[y] = true;
            cls.push_back(y);
          }
        }
      std::sort(cls.begin(), cls.end());
      out.push_back(std::move(cls));
    }
    classes_ = std::make_shared<std::vector<std::vector<Elem>>>(std::move(out));
    return *classes_;
  }

  /// G/N for normal N. Cosets are numbered by their smallest element, so
  /// the identity coset is 0. `projection` (if given) receives the coset
  /// index of every element of G.
  FiniteGroup quotient(const ElementSet& normal, std::vector<Elem>* projection = nullptr) const {
    std::vector<Elem> coset(n_, static_cast<Elem>(-1));
    std::vector<Elem> reps;
    auto nel = normal.elements();
    for (Elem x = 0; x < n_; ++x) {
      if (coset[x] != static_cast<Elem>(-1)) continue;
      Elem id = static_cast<Elem>(reps.size());
      reps.push_back(x);
      for (Elem y : nel) coset[mul(y, x)] = id;
    }
    FiniteGroup q;
    q.n_ = reps.size();
    q.table_.resize(q.n_ * q.n_);
    for (std::size_t a = 0; a < q.n_; ++a)
      for (std::size_t b = 0; b < q.n_; ++b)
        q.table_[a * q.n_ + b] = static_cast<std::uint16_t>(coset[mul(reps[a], reps[b])]);
    for (Elem g : generators_) q.generators_.push_back(coset[g]);
    q.finish();
    if (projection) *projection = std::move(coset);
    return q;
  }

  /// The subgroup H as a group in its own right, generated by `gens`.
  /// `embedding` (if given) receives, for each element of the new group,
  /// its index in this group.
  FiniteGroup subgroup(const ElementSet& h, std::span<const Elem> gens, std::vector<Elem>* embedding = nullptr) const {
    auto el = h.elements();
    std::vector<Elem> local(n_, static_cast<Elem>(-1));
    for (std::size_t i = 0; i < el.size(); ++i) local[el[i]] = static_cast<Elem>(i);
    FiniteGroup sub;
    sub.n_ = el.size();
    sub.degree_ = degree_;
    sub.table_.resize(sub.n_ * sub.n_);
    for (std::size_t a = 0; a < sub.n_; ++a)
      for (std::size_t b = 0; b < sub.n_; ++b)
        sub.table_[a * sub.n_ + b] = static_cast<std::uint16_t>(local[mul(el[a], el[b])]);
    for (Elem g : gens) sub.generators_.push_back(local[g]);
    if (has_permutations())
      for (Elem x : el) sub.perms_.push_back(perms_[x]);
    sub.finish();
    if (embedding) *embedding = std::move(el);
    return sub;
  }

  /// Right regular representation on the element indices.
  PermGroup regular_representation() const {
    std::vector<Permutation> gens;
    for (Elem g : generators_) {
      std::vector<Point> img(n_);
      for (Elem x = 0; x < n_; ++x) img[x] = mul(x, g);
      gens.emplace_back(std::move(img));
    }
    return PermGroup(n_, std::move(gens));
  }

  /// The group as permutations: the original action if known, else the
  /// regular representation.
  PermGroup to_perm_group() const {
    if (!has_permutations()) return regular_representation();
    std::vector<Permutation> gens;
    for (Elem g : generators_) gens.push_back(perms_[g]);
    return PermGroup(degree_, std::move(gens));
  }

  PermGroup perm_subgroup(const ElementSet& h) const {
    if (!has_permutations()) throw InvalidArgument("group has no permutation representation");
    std::vector<Permutation> gens;
    for (Elem x : generators_of(h)) gens.push_back(perms_[x]);
    return PermGroup(degree_, std::move(gens));
  }

  std::optional<Elem> index_of(const Permutation& p) const {
    for (Elem x = 0; x < perms_.size(); ++x)
      if (perms_[x] == p) return x;
    return std::nullopt;
  }

 private:
  // table[i][j] for j in BFS order: e_j = e_parent(j) * gen(j), hence
  // e_i * e_j = (e_i * e_parent(j)) * gen(j).
  void fill_table(const std::vector<std::uint32_t>& right, const std::vector<Elem>& parent,
                  const std::vector<std::uint32_t>& via, std::size_t k) {
    table_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      table_[i * n_] = static_cast<std::uint16_t>(i);
      for (std::size_t j = 1; j < n_; ++j) {
        Elem left = table_[i * n_ + parent[j]];
        table_[i * n_ + j] = static_cast<std::uint16_t>(right[left * k + via[j]]);
      }
    }
  }

  void finish() {
    inverse_.assign(n_, 0);
    orders_.assign(n_, 1);
    for (Elem a = 0; a < n_; ++a) {
      for (Elem b = 0; b < n_; ++b)
        if (mul(a, b) == 0) {
          inverse_[a] = b;
          break;
        }
      Elem x = a;
      std::uint32_t o = 1;
      while (x != 0) {
        x = mul(x, a);
        ++o;
      }
      orders_[a] = o;
    }
  }

  std::size_t n_ = 0;
  std::size_t degree_ = 0;
  std::vector<std::uint16_t> table_;
  std::vector<Elem> inverse_;
  std::vector<std::uint32_t> orders_;
  std::vector<Elem> generators_;
  std::vector<Permutation> perms_;
  mutable std::shared_ptr<std::vector<std::vector<Elem>>> classes_;
};

}  // namespace fingen
