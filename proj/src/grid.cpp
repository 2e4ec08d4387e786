#include "icf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icf/errors.hpp"

namespace icf {

GridFunction::GridFunction(std::vector<double> samples) : s_(std::move(samples)) {
  if (s_.size() < 2) throw ValidationError("grid function needs at least 2 cells");
  for (double v : s_)
    if (!std::isfinite(v)) throw ValidationError("grid function sample is not finite");
}

GridFunction GridFunction::from_function(std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = f(cell_center(j, n));
  return GridFunction(std::move(s));
}

GridFunction GridFunction::constant(std::size_t n, double value) {
  return GridFunction(std::vector<double>(n, value));
}

double GridFunction::integral() const {
  return std::accumulate(s_.begin(), s_.end(), 0.0) * cell_width();
}

double GridFunction::l2_norm() const {
  double s = 0.0;
  for (double v : s_) s += v * v;
  return std::sqrt(s * cell_width());
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (o.size() != size()) throw DimensionMismatch(size(), o.size());
  for (std::size_t j = 0; j < s_.size(); ++j) s_[j] += o.s_[j];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (o.size() != size()) throw DimensionMismatch(size(), o.size());
  for (std::size_t j = 0; j < s_.size(); ++j) s_[j] -= o.s_[j];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : s_) v *= a;
  return *this;
}

TruncationFamily::TruncationFamily(std::size_t n) : n_(n) {
  if (n < 2) throw ValidationError("truncation family needs at least 2 cells");
}

std::size_t TruncationFamily::first_kept(double xi) const {
  if (!(xi >= 0.0 && xi <= 1.0)) throw ValidationError("g_xi: xi outside [0,1]");
  // Cell j is kept iff j/N >= xi.
  double pos = std::ceil(xi * static_cast<double>(n_));
  std::size_t j = static_cast<std::size_t>(pos);
  // Align with the predicate exactly; ceil(xi*N) may be off by one after rounding.
  const double n = static_cast<double>(n_);
  while (j > 0 && static_cast<double>(j - 1) / n >= xi) --j;
  while (j < n_ && static_cast<double>(j) / n < xi) ++j;
  return std::min(j, n_);
}

GridFunction TruncationFamily::apply(double xi, const GridFunction& w) const {
  if (w.size() != n_) throw DimensionMismatch(n_, w.size());
  std::vector<double> s(w.samples().begin(), w.samples().end());
  const std::size_t first = first_kept(xi);
  for (std::size_t j = 0; j < first; ++j) s[j] = 0.0;
  return GridFunction(std::move(s));
}

GridFunction continual_knot(const TruncationFamily& fam, const GridFunction& u_prev,
                            const GridFunction& u_next, double xi) {
  if (u_prev.size() != u_next.size()) throw DimensionMismatch(u_prev.size(), u_next.size());
  if (u_prev.size() != fam.size()) throw DimensionMismatch(fam.size(), u_prev.size());
  // Same as u_prev + g_xi(u_next - u_prev), but copies samples so both ends are exact.
  std::vector<double> s(u_prev.samples().begin(), u_prev.samples().end());
  for (std::size_t j = fam.first_kept(xi); j < s.size(); ++j) s[j] = u_next[j];
  return GridFunction(std::move(s));
}

}  // namespace icf
