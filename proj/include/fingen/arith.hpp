#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace fingen {

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Number of prime divisors counted with multiplicity.
inline unsigned big_omega(std::uint64_t n) {
  unsigned total = 0;
  for (auto [p, e] : factorize(n)) total += e;
  return total;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

/// True for 1 and for p^k, k >= 1.
inline bool is_prime_power(std::uint64_t n) { return n == 1 || factorize(n).size() == 1; }

/// Prime of a prime power > 1, else 0.
inline std::uint64_t prime_of(std::uint64_t n) {
  auto f = factorize(n);
  return f.size() == 1 ? f.front().first : 0;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

/// Floor division that rounds toward negative infinity.
inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace fingen
