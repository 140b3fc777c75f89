#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fingen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input to an operation (degree mismatch, element outside a group, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size cap or the time budget was exceeded. Results are never
/// approximated; the caller gets this instead.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Size caps and budget shared by all invariant computations.
struct Limits {
  std::size_t element_cap = 200'000;      // full element sweeps
  std::size_t table_cap = 4'096;          // Cayley-table groups
  std::size_t lattice_cap = 2'000;        // |G| for subgroup lattices
  std::size_t cohomology_cap = 500;       // |G| for H^1 linear systems
  std::uint64_t max_order = 10'000'000;   // group construction
  std::uint64_t brute_cap = 20'000'000;   // brute-force tuple enumeration
  double time_budget_seconds = 300.0;
  std::uint64_t seed = 0x5eed'f1e1'd5ULL;
};

/// Wall-clock deadline for one invariant call.
class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))) {}

  void check(const char* what) const {
    if (std::chrono::steady_clock::now() > end_) {
      throw CapExceeded(std::string("time budget exceeded in ") + what);
    }
  }

 private:
  std::chrono::steady_clock::time_point end_;
};

}  // namespace fingen
