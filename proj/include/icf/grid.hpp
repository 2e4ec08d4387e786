#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace icf {

// Piecewise-constant function on [0,1]: samples[j] is the value on [j/N, (j+1)/N).
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::vector<double> samples);

  // Samples f at cell midpoints (j + 1/2)/N.
  static GridFunction from_function(std::size_t n, const std::function<double(double)>& f);
  static GridFunction constant(std::size_t n, double value);

  std::size_t size() const noexcept { return s_.size(); }
  std::span<const double> samples() const noexcept { return s_; }
  double operator[](std::size_t j) const { return s_[j]; }
  double cell_width() const noexcept { return 1.0 / static_cast<double>(s_.size()); }
  static double cell_center(std::size_t j, std::size_t n) {
    return (static_cast<double>(j) + 0.5) / static_cast<double>(n);
  }

  // Integral over [0,1] and the L2 norm, both exact for the piecewise-constant function.
  double integral() const;
  double l2_norm() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double a);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double a, GridFunction w) { return w *= a; }
  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::vector<double> s_;
};

// Right-truncation family g_xi on a grid of N cells: keeps the cells lying
// entirely in [xi, 1] and zeroes the rest. g_0 = E, g_1 = 0 and
// g_tau g_xi = g_max(tau, xi) hold exactly.
class TruncationFamily {
 public:
  explicit TruncationFamily(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  // Index of the first kept cell.
  std::size_t first_kept(double xi) const;
  GridFunction apply(double xi, const GridFunction& w) const;

 private:
  std::size_t n_;
};

// u_prev + g_xi(u_next - u_prev): equals u_next at xi = 0 and u_prev at xi = 1.
GridFunction continual_knot(const TruncationFamily& fam, const GridFunction& u_prev,
                            const GridFunction& u_next, double xi);

}  // namespace icf
