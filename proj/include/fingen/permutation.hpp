#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fingen {

using Point = std::uint32_t;

/// A bijection on {0, ..., degree-1}, stored as its image array.
///
/// Products compose left to right: (a * b)(x) = b(a(x)), i.e. apply a first.
/// Every module relies on this convention; conjugation is x^g = g^-1 * x * g.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point p : images_) {
      if (p >= images_.size() || seen[p]) throw InvalidArgument("image array is not a bijection");
      seen[p] = true;
    }
  }

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Builds a permutation from disjoint cycles of 0-based points.
  static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles) {
    std::vector<Point> img(degree);
    std::iota(img.begin(), img.end(), Point{0});
    std::vector<bool> used(degree, false);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= degree) throw InvalidArgument("cycle point " + std::to_string(c[i]) + " outside degree");
        if (used[c[i]]) throw InvalidArgument("cycles are not disjoint");
        used[c[i]] = true;
        img[c[i]] = c[(i + 1) % c.size()];
      }
    }
    return Permutation(std::move(img));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator[](Point x) const noexcept { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept {
    for (Point i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  std::optional<Point> smallest_moved_point() const noexcept {
    for (Point i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return i;
    return std::nullopt;
  }

  Permutation inverse() const {
    Permutation r;
    r.images_.resize(images_.size());
    for (Point i = 0; i < images_.size(); ++i) r.images_[images_[i]] = i;
    return r;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw InvalidArgument("degree mismatch in composition");
    Permutation r;
    r.images_.resize(a.images_.size());
    for (std::size_t i = 0; i < a.images_.size(); ++i) r.images_[i] = b.images_[a.images_[i]];
    return r;
  }

  Permutation& operator*=(const Permutation& b) { return *this = *this * b; }

  Permutation pow(long long k) const {
    Permutation base = k < 0 ? inverse() : *this;
    unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
    Permutation r(degree());
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  /// g^-1 * this * g.
  Permutation conjugate(const Permutation& g) const { return g.inverse() * *this * g; }

  std::vector<std::vector<Point>> cycles() const {
    std::vector<std::vector<Point>> out;
    std::vector<bool> seen(degree(), false);
    for (Point i = 0; i < degree(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      std::vector<Point> c;
      for (Point j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::uint64_t order() const {
    std::uint64_t r = 1;
    for (const auto& c : cycles()) r = std::lcm(r, static_cast<std::uint64_t>(c.size()));
    return r;
  }

  /// 0-based disjoint cycle notation; "()" for the identity.
  std::string to_string() const {
    auto cs = cycles();
    if (cs.empty()) return "()";
    std::ostringstream os;
    for (const auto& c : cs) {
      os << '(';
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
      os << ')';
    }
    return os.str();
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Point p : images_) {
      h ^= p;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) return a.degree() <=> b.degree();
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

inline Permutation compose(const Permutation& a, const Permutation& b) { return a * b; }

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept { return p.hash(); }
};

}  // namespace fingen
