#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fingen::gfp {

using Scalar = std::uint32_t;
using Vector = std::vector<Scalar>;

inline Scalar inverse(Scalar a, Scalar p) {
  // Fermat; p is a small prime
  std::uint64_t r = 1, b = a % p;
  for (std::uint64_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<Scalar>(r);
}

/// Dense row-major matrix over GF(p). Vectors are rows and matrices act on
/// the right (v -> v*M), matching right actions of groups.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * cols_ + c]; }

  Vector row(std::size_t r) const { return Vector(a_.begin() + static_cast<std::ptrdiff_t>(r * cols_), a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)); }

  void append_row(const Vector& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw InvalidArgument("row length mismatch");
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? 1U : 0U)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> a_;
};

inline Matrix multiply(const Matrix& x, const Matrix& y, Scalar p) {
  if (x.cols() != y.rows()) throw InvalidArgument("matrix shape mismatch");
  Matrix r(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      std::uint64_t a = x(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) = static_cast<Scalar>((r(i, j) + a * y(k, j)) % p);
    }
  return r;
}

inline Vector apply(const Vector& v, const Matrix& m, Scalar p) {
  Vector r(m.cols(), 0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::uint64_t a = v[k];
    if (!a) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] = static_cast<Scalar>((r[j] + a * m(k, j)) % p);
  }
  return r;
}

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& m, Scalar p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
    Scalar iv = inverse(m(r, c), p);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = static_cast<Scalar>(std::uint64_t{m(r, j)} * iv % p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      std::uint64_t f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) = static_cast<Scalar>((m(i, j) + (p - f) * m(r, j)) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix m, Scalar p) { return rref(m, p).size(); }

/// Basis of {x : M x^T = 0}, i.e. the right null space of M.
inline std::vector<Vector> nullspace(Matrix m, Scalar p) {
  auto pivots = rref(m, p);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = static_cast<Scalar>((p - m(i, free)) % p);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<Matrix> invert(const Matrix& m, Scalar p) {
  const std::size_t n = m.rows();
  if (n != m.cols()) return std::nullopt;
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug, p);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

inline bool is_invertible(const Matrix& m, Scalar p) { return m.rows() == m.cols() && rank(m, p) == m.rows(); }

/// Encodes a vector as an integer in base p (coordinate 0 least significant).
inline std::size_t encode(const Vector& v, Scalar p) {
  std::size_t code = 0;
  for (std::size_t i = v.size(); i-- > 0;) code = code * p + v[i];
  return code;
}

inline Vector decode(std::size_t code, std::size_t dim, Scalar p) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = static_cast<Scalar>(code % p);
    code /= p;
  }
  return v;
}

/// Basis of the space of T (n1 x n2) with A_i T = T B_i for all i, each
/// returned as a matrix.
inline std::vector<Matrix> intertwiners(const std::vector<Matrix>& a, const std::vector<Matrix>& b, Scalar p) {
  if (a.size() != b.size()) throw InvalidArgument("intertwiner: generator count mismatch");
  if (a.empty()) throw InvalidArgument("intertwiner: no generators");
  const std::size_t n1 = a.front().rows(), n2 = b.front().rows();
  const std::size_t unknowns = n1 * n2;  // T(r, c) -> r * n2 + c
  Matrix sys(0, unknowns);
  for (std::size_t g = 0; g < a.size(); ++g) {
    // (A T - T B)(i, j) = sum_k A(i,k) T(k,j) - sum_k T(i,k) B(k,j)
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j) {
        Vector row(unknowns, 0);
        for (std::size_t k = 0; k < n1; ++k) row[k * n2 + j] = (row[k * n2 + j] + a[g](i, k)) % p;
        for (std::size_t k = 0; k < n2; ++k) row[i * n2 + k] = (row[i * n2 + k] + p - b[g](k, j)) % p;
        sys.append_row(row);
      }
  }
  std::vector<Matrix> out;
  for (const auto& v : nullspace(sys, p)) {
    Matrix t(n1, n2);
    for (std::size_t r = 0; r < n1; ++r)
      for (std::size_t c = 0; c < n2; ++c) t(r, c) = v[r * n2 + c];
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace fingen::gfp
