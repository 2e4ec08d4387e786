#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "icf/fraction.hpp"

namespace icf {

using Point = std::vector<double>;

// Matrix-valued function of d real variables. `grad`, when present, returns
// the partial-derivative matrix along one axis.
struct MatrixFunction {
  std::size_t dim_in = 0;
  std::size_t m = 0;
  std::function<CMatrix(std::span<const double>)> eval;
  std::function<CMatrix(std::span<const double>, std::size_t)> grad;
};

struct QuadConfig {
  int order = 32;
  // Central-difference step; defaults to 1e-6 * (1 + |p|).
  std::optional<double> fd_step;

  double step_at(std::span<const double> p) const;
};

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre rule of the given order mapped to [0, 1].
GaussRule gauss_legendre(int order);

// Partial derivative matrix of F at p along `axis`.
CMatrix partial_derivative(const MatrixFunction& f, std::span<const double> p, std::size_t axis,
                           const QuadConfig& q);

// a-th entry: integral over [0,1] of dG/dx_a at from + tau (to - from).
std::vector<CMatrix> directional_integral(const MatrixFunction& g, std::span<const double> from,
                                          std::span<const double> to, const QuadConfig& q);

// ICF of F over arbitrary distinct nodes in R^d. Storey r carries
// C_{r,a} = integral of dF_r/dx_a along [u_{r-1}, u_r].
ThieleFraction<Complex> build_functional(const MatrixFunction& f, const std::vector<Point>& nodes,
                                         const QuadConfig& q = {});

// F_r as a callable given the storeys built so far (r = storeys.size() + 1 at most).
MatrixFunction level_function_of(const MatrixFunction& f, const std::vector<Point>& nodes,
                                 const std::vector<Storey<Complex>>& storeys, std::size_t r);

ArgPoint<Complex> to_arg(std::span<const double> p);

}  // namespace icf
