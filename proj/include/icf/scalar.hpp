#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace icf {

using Complex = std::complex<double>;

// Exact complex number p + q i with p, q rational, kept in lowest terms by GMP.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  // Exact conversion: every finite double is a dyadic rational.
  static GaussianRational from_double(double re, double im = 0.0);
  // "p/q", "p" or a decimal literal such as "0.25".
  static mpq_class parse_rational(std::string_view text);

  const mpq_class& real() const noexcept { return re_; }
  const mpq_class& imag() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  // Throws std::domain_error on division by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(GaussianRational a) {
    a.re_ = -a.re_;
    a.im_ = -a.im_;
    return a;
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

// Backend descriptor shared by the matrix and fraction templates.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr std::string_view name = "float";
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_real(double x) { return {x, 0.0}; }
  static double magnitude(const Complex& z) { return std::abs(z); }
  static Complex to_complex(const Complex& z) { return z; }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
};

template <>
struct scalar_traits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr std::string_view name = "exact";
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return GaussianRational(1); }
  static GaussianRational from_real(double x) { return GaussianRational::from_double(x); }
  static double magnitude(const GaussianRational& z) { return std::abs(z.to_complex()); }
  static Complex to_complex(const GaussianRational& z) { return z.to_complex(); }
  static bool is_zero(const GaussianRational& z) { return z.is_zero(); }
};

template <class S>
concept Scalar = requires { scalar_traits<S>::exact; };

}  // namespace icf
