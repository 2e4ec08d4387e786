#include "icf/scalar.hpp"

#include <stdexcept>

namespace icf {

GaussianRational GaussianRational::from_double(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im))
    throw std::domain_error("non-finite value has no rational representation");
  return {mpq_class(re), mpq_class(im)};
}

mpq_class GaussianRational::parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad rational literal: " + s);
    if (digits.front() == '+') digits.erase(digits.begin());
    mpq_class q;
    if (q.set_str(digits + "/" + den, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
  }
  if (s.front() == '+') s.erase(s.begin());
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero");
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / norm;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::to_string() const {
  std::string out = re_.get_str();
  if (sgn(im_) != 0) out += (sgn(im_) > 0 ? "+" : "") + im_.get_str() + "i";
  return out;
}

}  // namespace icf
