#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "icf/fraction.hpp"
#include "icf/functional_builder.hpp"
#include "icf/grid.hpp"

namespace icf {

// Nonlinear operator from grid functions on [0,1] to m x m matrices.
struct OperatorFunction {
  std::size_t m = 0;
  std::function<CMatrix(const GridFunction&)> eval;
};

// Central-difference Gateaux derivative F'(v)[h] with step fd / max(1, |h|).
CMatrix gateaux_derivative(const OperatorFunction& f, const GridFunction& v, const GridFunction& h, double fd);

// Riemann-Stieltjes sum  -sum_j F'(p_j)[(g_{tau_{j+1}} - g_{tau_j}) w]  over the cell grid tau_j = j/N.
// The integrand and dg jump together at tau_j; p_j is the state halfway
// across that jump (cell j at the average of u_prev and u_next, cells
// above j from u_next, cells below from u_prev).
CMatrix stieltjes_l(const OperatorFunction& level, const GridFunction& u_prev, const GridFunction& u_next,
                    const GridFunction& w, double fd);

// Kernel table of the same sum: l(w) = sum_j kernel[j] * w_j with kernel[j] = F'(p_j)[e_j].
std::vector<CMatrix> stieltjes_kernel(const OperatorFunction& level, const GridFunction& u_prev,
                                      const GridFunction& u_next, double fd);

// F_r as an operator, given storeys l_1..l_{r-1}:
//   F_2(u) = [F(u) - F(u0)]^-1 l_1(u - u0),  F_k(u) = [F_{k-1}(u) - I]^-1 l_{k-1}(u - u_{k-2}).
OperatorFunction continual_level(const OperatorFunction& f, const std::vector<GridFunction>& knots,
                                 const std::vector<Storey<Complex>>& storeys, std::size_t r);

// Operator ICF with the truncation family as g_tau; satisfies the nodal
// conditions and, along the last knot pair, the continual condition.
ThieleFraction<Complex> build_abstract(const OperatorFunction& f, const std::vector<GridFunction>& knots,
                                       double fd);

// Same construction with g_tau replaced by (1 - tau) I: l_k(w) = int_0^1 F_k'(u_{k-1} + s (u_k - u_{k-1}))[w] ds.
// Only the nodal conditions survive this simplification.
ThieleFraction<Complex> build_notice(const OperatorFunction& f, const std::vector<GridFunction>& knots, double fd,
                                     const QuadConfig& q = {});

// ||T(u_{n-1,n}(xi)) - F(u_{n-1,n}(xi))|| for each xi.
std::vector<Residual> check_continual(const ThieleFraction<Complex>& t, const OperatorFunction& f,
                                      std::span<const double> xi_samples);

// Nodal residuals against F at the fraction's own knots.
std::vector<Residual> verify_operator_nodal(const ThieleFraction<Complex>& t, const OperatorFunction& f);

// F(u) = [[2 + int u, int t u], [int u^2, 1 + int e^t u]]
OperatorFunction demo_operator();
// u0 = 0, u1 = t, u2 = sin(pi t)
std::vector<GridFunction> demo_knots(std::size_t n);

}  // namespace icf
