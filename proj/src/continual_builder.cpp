#include "icf/continual_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace icf {

namespace {

CMatrix checked_eval(const OperatorFunction& f, const GridFunction& u) {
  CMatrix v = f.eval(u);
  if (v.dim() != f.m) throw DimensionMismatch(v.dim(), f.m);
  if (!all_finite(v)) throw NonFiniteValue("operator value is not finite");
  return v;
}

GridFunction unit_cell(std::size_t n, std::size_t j) {
  std::vector<double> s(n, 0.0);
  s[j] = 1.0;
  return GridFunction(std::move(s));
}

// State halfway across the jump of the knot path at tau_j.
GridFunction jump_midpoint(const GridFunction& u_prev, const GridFunction& u_next, std::size_t j) {
  std::vector<double> s(u_prev.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = k < j ? u_prev[k] : (k > j ? u_next[k] : 0.5 * (u_prev[k] + u_next[k]));
  return GridFunction(std::move(s));
}

void check_grids(const std::vector<GridFunction>& knots) {
  if (knots.empty()) throw ValidationError("no knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].size() != knots.front().size())
      throw ValidationError("knot " + std::to_string(i) + " is on a different grid");
    for (std::size_t j = 0; j < i; ++j)
      if (knots[i] == knots[j])
        throw ValidationError("duplicate knots at indices " + std::to_string(j) + " and " + std::to_string(i));
  }
}

}  // namespace

CMatrix gateaux_derivative(const OperatorFunction& f, const GridFunction& v, const GridFunction& h, double fd) {
  if (!(fd > 0.0)) throw ValidationError("finite-difference step must be positive");
  const double eps = fd / std::max(1.0, h.l2_norm());
  CMatrix d = checked_eval(f, v + eps * h) - checked_eval(f, v - eps * h);
  d *= Complex(1.0 / (2.0 * eps), 0.0);
  return d;
}

CMatrix stieltjes_l(const OperatorFunction& level, const GridFunction& u_prev, const GridFunction& u_next,
                    const GridFunction& w, double fd) {
  const std::size_t n = u_prev.size();
  if (u_next.size() != n || w.size() != n) throw DimensionMismatch(n, w.size());
  const TruncationFamily fam(n);
  CMatrix sum(level.m);
  for (std::size_t j = 0; j < n; ++j) {
    const double tau0 = static_cast<double>(j) / static_cast<double>(n);
    const double tau1 = static_cast<double>(j + 1) / static_cast<double>(n);
    const GridFunction dg = fam.apply(tau1, w) - fam.apply(tau0, w);
    if (std::ranges::all_of(dg.samples(), [](double x) { return x == 0.0; })) continue;
    const GridFunction p = 0.5 * (continual_knot(fam, u_prev, u_next, tau0) + continual_knot(fam, u_prev, u_next, tau1));
    sum -= gateaux_derivative(level, p, dg, fd);
  }
  return sum;
}

std::vector<CMatrix> stieltjes_kernel(const OperatorFunction& level, const GridFunction& u_prev,
                                      const GridFunction& u_next, double fd) {
  const std::size_t n = u_prev.size();
  if (u_next.size() != n) throw DimensionMismatch(n, u_next.size());
  std::vector<CMatrix> kernel;
  kernel.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    kernel.push_back(gateaux_derivative(level, jump_midpoint(u_prev, u_next, j), unit_cell(n, j), fd));
  return kernel;
}

OperatorFunction continual_level(const OperatorFunction& f, const std::vector<GridFunction>& knots,
                                 const std::vector<Storey<Complex>>& storeys, std::size_t r) {
  if (r == 0 || r > storeys.size() + 1) throw ValidationError("continual_level: level out of range");
  if (r == 1) return f;
  CMatrix base = checked_eval(f, knots.front());
  auto eval = [f, base = std::move(base), storeys, r](const GridFunction& u) {
    const CMatrix value = checked_eval(f, u);
    const ArgPoint<Complex> arg = u;
    auto l = [&](std::size_t q) {
      const auto& st = storeys[q - 1];
      return apply_map(st.map, difference(arg, st.anchor), f.m);
    };
    return level_function(value, base, r, l, Orientation::tail_right);
  };
  return {f.m, std::move(eval)};
}

namespace {

template <class KernelFn>
ThieleFraction<Complex> build_grid_fraction(const OperatorFunction& f, const std::vector<GridFunction>& knots,
                                            KernelFn&& kernel_for) {
  if (!f.eval) throw ValidationError("operator has no evaluator");
  check_grids(knots);
  CMatrix base = checked_eval(f, knots.front());
  std::vector<Storey<Complex>> storeys;
  for (std::size_t r = 1; r < knots.size(); ++r) {
    std::vector<CMatrix> kernel;
    try {
      kernel = kernel_for(continual_level(f, knots, storeys, r), knots[r - 1], knots[r]);
    } catch (const LevelSingular& e) {
      throw LevelSingular(e.level(), "knot pair " + std::to_string(r - 1) + "-" + std::to_string(r));
    }
    storeys.push_back({r, ArgPoint<Complex>(knots[r - 1]), KernelMap<Complex>{std::move(kernel)}});
  }
  std::vector<ArgPoint<Complex>> args(knots.begin(), knots.end());
  return ThieleFraction<Complex>(std::move(base), std::move(args), std::move(storeys), Orientation::tail_right);
}

}  // namespace

ThieleFraction<Complex> build_abstract(const OperatorFunction& f, const std::vector<GridFunction>& knots,
                                       double fd) {
  return build_grid_fraction(f, knots, [fd](const OperatorFunction& level, const GridFunction& a,
                                            const GridFunction& b) { return stieltjes_kernel(level, a, b, fd); });
}

ThieleFraction<Complex> build_notice(const OperatorFunction& f, const std::vector<GridFunction>& knots, double fd,
                                     const QuadConfig& q) {
  const GaussRule rule = gauss_legendre(q.order);
  return build_grid_fraction(f, knots, [&](const OperatorFunction& level, const GridFunction& a,
                                           const GridFunction& b) {
    const std::size_t n = a.size();
    std::vector<CMatrix> kernel(n, CMatrix(level.m));
    const GridFunction d = b - a;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const GridFunction p = a + rule.nodes[k] * d;
      for (std::size_t j = 0; j < n; ++j)
        kernel[j] += gateaux_derivative(level, p, unit_cell(n, j), fd) * Complex(rule.weights[k], 0.0);
    }
    return kernel;
  });
}

std::vector<Residual> check_continual(const ThieleFraction<Complex>& t, const OperatorFunction& f,
                                      std::span<const double> xi_samples) {
  if (t.arg_kind() != ArgKind::grid) throw ValidationError("check_continual needs a grid-argument fraction");
  if (t.order() == 0) throw ValidationError("check_continual needs at least one storey");
  const auto& u_prev = std::get<GridFunction>(t.nodes()[t.order() - 1]);
  const auto& u_next = std::get<GridFunction>(t.nodes()[t.order()]);
  const TruncationFamily fam(u_prev.size());
  std::vector<Residual> out;
  for (double xi : xi_samples) {
    try {
      const GridFunction knot = continual_knot(fam, u_prev, u_next, xi);
      out.push_back(residual_at(t, ArgPoint<Complex>(knot), checked_eval(f, knot)));
    } catch (const Error& e) {
      out.push_back({std::numeric_limits<double>::infinity(), e.what()});
    }
  }
  return out;
}

std::vector<Residual> verify_operator_nodal(const ThieleFraction<Complex>& t, const OperatorFunction& f) {
  std::vector<CMatrix> values;
  for (const auto& u : t.nodes()) values.push_back(checked_eval(f, std::get<GridFunction>(u)));
  return verify_nodal(t, values);
}

OperatorFunction demo_operator() {
  auto eval = [](const GridFunction& u) {
    const std::size_t n = u.size();
    const double dt = u.cell_width();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = GridFunction::cell_center(j, n);
      s0 += u[j];
      s1 += t * u[j];
      s2 += u[j] * u[j];
      s3 += std::exp(t) * u[j];
    }
    return CMatrix{{Complex(2.0 + s0 * dt), Complex(s1 * dt)}, {Complex(s2 * dt), Complex(1.0 + s3 * dt)}};
  };
  return {2, eval};
}

std::vector<GridFunction> demo_knots(std::size_t n) {
  return {GridFunction::constant(n, 0.0), GridFunction::from_function(n, [](double t) { return t; }),
          GridFunction::from_function(n, [](double t) { return std::sin(std::numbers::pi * t); })};
}

}  // namespace icf
