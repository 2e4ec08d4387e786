#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "icf/errors.hpp"
#include "icf/scalar.hpp"

namespace icf {

// Dense square m x m matrix, row-major.
template <Scalar S>
class Matrix {
 public:
  using traits = scalar_traits<S>;

  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim, traits::zero()) {}
  Matrix(std::size_t dim, std::vector<S> entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim_ * dim_) throw DimensionMismatch(a_.size(), dim_ * dim_);
  }
  Matrix(std::initializer_list<std::initializer_list<S>> rows) : dim_(rows.size()) {
    a_.reserve(dim_ * dim_);
    for (const auto& r : rows) {
      if (r.size() != dim_) throw DimensionMismatch(r.size(), dim_);
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Matrix zero(std::size_t dim) { return Matrix(dim); }
  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = traits::one();
    return m;
  }
  static Matrix diagonal(std::initializer_list<S> d) {
    Matrix m(d.size());
    std::size_t i = 0;
    for (const auto& v : d) {
      m(i, i) = v;
      ++i;
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  S& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  std::span<const S> entries() const noexcept { return a_; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.dim_ == b.dim_ && a.a_ == b.a_; }

  friend Matrix mat_mul(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (traits::is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

 private:
  void check_same(const Matrix& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch(dim_, o.dim_);
  }

  std::size_t dim_ = 0;
  std::vector<S> a_;
};

using CMatrix = Matrix<Complex>;
using QMatrix = Matrix<GaussianRational>;

// Frobenius norm; exact matrices are converted to double for the norm only.
template <Scalar S>
double mat_norm(const Matrix<S>& a) {
  double s = 0.0;
  for (const auto& v : a.entries()) s += std::norm(scalar_traits<S>::to_complex(v));
  return std::sqrt(s);
}

template <Scalar S>
double max_abs_entry(const Matrix<S>& a) {
  double s = 0.0;
  for (const auto& v : a.entries()) s = std::max(s, scalar_traits<S>::magnitude(v));
  return s;
}

inline bool all_finite(const CMatrix& a) {
  return std::ranges::all_of(a.entries(),
                             [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

inline constexpr double kDefaultSingularTol = 1e-13;

namespace detail {

// Gauss-Jordan with exact arithmetic; any nonzero pivot is as good as another.
inline QMatrix invert_exact(const QMatrix& a) {
  const std::size_t n = a.dim();
  QMatrix w = a;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && w(p, col).is_zero()) ++p;
    if (p == n) throw SingularMatrix(col);
    if (p != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(p, j), w(col, j));
        std::swap(inv(p, j), inv(col, j));
      }
    const GaussianRational piv = w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) /= piv;
      inv(col, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w(i, col).is_zero()) continue;
      const GaussianRational f = w(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        w(i, j) -= f * w(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// LU with partial pivoting, then n triangular solves against the identity.
inline CMatrix invert_float(const CMatrix& a, double rel_tol) {
  const std::size_t n = a.dim();
  if (!all_finite(a)) throw NonFiniteValue("matrix inverse: non-finite entry");
  const double threshold = rel_tol * max_abs_entry(a);
  CMatrix lu = a;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > best) best = std::abs(lu(i, k)), p = i;
    if (best <= threshold || best == 0.0) throw SingularMatrix(k);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
      std::swap(perm[p], perm[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      const Complex f = lu(i, k);
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }

  CMatrix inv(n);
  std::vector<Complex> x(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = perm[i] == c ? Complex{1.0, 0.0} : Complex{};
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
      x[i] = s / lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = x[i];
  }
  if (!all_finite(inv)) throw NonFiniteValue("matrix inverse: non-finite result");
  return inv;
}

}  // namespace detail

// Throws SingularMatrix with the failing pivot. `rel_tol` only affects the float backend.
template <Scalar S>
Matrix<S> mat_inverse(const Matrix<S>& a, double rel_tol = kDefaultSingularTol) {
  if constexpr (scalar_traits<S>::exact) {
    (void)rel_tol;
    return detail::invert_exact(a);
  } else {
    return detail::invert_float(a, rel_tol);
  }
}

}  // namespace icf
