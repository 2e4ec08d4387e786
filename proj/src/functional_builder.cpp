#include "icf/functional_builder.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace icf {

namespace {

double euclid(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

CMatrix checked_eval(const MatrixFunction& f, std::span<const double> p) {
  CMatrix v = f.eval(p);
  if (v.dim() != f.m) throw DimensionMismatch(v.dim(), f.m);
  if (!all_finite(v)) throw NonFiniteValue("matrix function is not finite at the requested point");
  return v;
}

}  // namespace

double QuadConfig::step_at(std::span<const double> p) const {
  if (fd_step) return *fd_step;
  return 1e-6 * (1.0 + euclid(p));
}

GaussRule gauss_legendre(int order) {
  if (order < 2) throw ValidationError("quadrature order must be at least 2");
  const auto n = static_cast<std::size_t>(order);
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x_i are in decreasing order; store ascending on [0,1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

CMatrix partial_derivative(const MatrixFunction& f, std::span<const double> p, std::size_t axis,
                           const QuadConfig& q) {
  if (axis >= p.size()) throw ValidationError("partial_derivative: axis out of range");
  if (f.grad) return f.grad(p, axis);
  const double h = q.step_at(p);
  Point plus(p.begin(), p.end()), minus(p.begin(), p.end());
  plus[axis] += h;
  minus[axis] -= h;
  CMatrix d = checked_eval(f, plus) - checked_eval(f, minus);
  d *= Complex(1.0 / (2.0 * h), 0.0);
  return d;
}

std::vector<CMatrix> directional_integral(const MatrixFunction& g, std::span<const double> from,
                                          std::span<const double> to, const QuadConfig& q) {
  if (from.size() != to.size()) throw DimensionMismatch(from.size(), to.size());
  const std::size_t d = from.size();
  const GaussRule rule = gauss_legendre(q.order);
  std::vector<CMatrix> acc(d, CMatrix(g.m));
  Point p(d);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    for (std::size_t a = 0; a < d; ++a) p[a] = from[a] + rule.nodes[k] * (to[a] - from[a]);
    for (std::size_t a = 0; a < d; ++a) {
      CMatrix da;
      try {
        da = partial_derivative(g, p, a, q);
      } catch (const LevelSingular&) {
        throw;
      } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("integrand evaluation failed at tau = ") +
                                std::to_string(rule.nodes[k]) + ": " + e.what());
      }
      if (!all_finite(da)) throw QuadratureFailure("non-finite integrand");
      acc[a] += da * Complex(rule.weights[k], 0.0);
    }
  }
  return acc;
}

ArgPoint<Complex> to_arg(std::span<const double> p) {
  std::vector<Complex> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = {p[i], 0.0};
  return v;
}

MatrixFunction level_function_of(const MatrixFunction& f, const std::vector<Point>& nodes,
                                 const std::vector<Storey<Complex>>& storeys, std::size_t r) {
  if (r == 0 || r > storeys.size() + 1) throw ValidationError("level_function_of: level out of range");
  if (r == 1) return {f.dim_in, f.m, f.eval, f.grad};
  CMatrix base = checked_eval(f, nodes.front());
  auto eval = [f, base = std::move(base), storeys, r](std::span<const double> p) {
    const CMatrix value = checked_eval(f, p);
    const ArgPoint<Complex> u = to_arg(p);
    auto l = [&](std::size_t q) {
      const auto& st = storeys[q - 1];
      return apply_map(st.map, difference(u, st.anchor), f.m);
    };
    return level_function(value, base, r, l, Orientation::tail_left);
  };
  return {f.dim_in, f.m, std::move(eval), {}};
}

ThieleFraction<Complex> build_functional(const MatrixFunction& f, const std::vector<Point>& nodes,
                                         const QuadConfig& q) {
  if (!f.eval) throw ValidationError("matrix function has no evaluator");
  if (nodes.empty()) throw ValidationError("no interpolation nodes");
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].size() != f.dim_in)
      throw ValidationError("node " + std::to_string(i) + " has dimension " + std::to_string(nodes[i].size()) +
                            ", expected " + std::to_string(f.dim_in));
    scale = std::max(scale, euclid(nodes[i]));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      Point diff(nodes[i].size());
      for (std::size_t a = 0; a < diff.size(); ++a) diff[a] = nodes[i][a] - nodes[j][a];
      if (euclid(diff) <= 1e-12 * scale)
        throw ValidationError("duplicate nodes at indices " + std::to_string(i) + " and " + std::to_string(j));
    }

  CMatrix base = checked_eval(f, nodes.front());
  std::vector<Storey<Complex>> storeys;
  for (std::size_t r = 1; r < nodes.size(); ++r) {
    std::vector<CMatrix> coeffs;
    try {
      const MatrixFunction level = level_function_of(f, nodes, storeys, r);
      coeffs = directional_integral(level, nodes[r - 1], nodes[r], q);
    } catch (const LevelSingular& e) {
      throw LevelSingular(e.level(), "segment " + std::to_string(r - 1) + "-" + std::to_string(r));
    }
    storeys.push_back({r, to_arg(nodes[r - 1]), DirectionalMap<Complex>{std::move(coeffs)}});
  }
  std::vector<ArgPoint<Complex>> args;
  for (const auto& p : nodes) args.push_back(to_arg(p));
  return ThieleFraction<Complex>(std::move(base), std::move(args), std::move(storeys), Orientation::tail_left);
}

}  // namespace icf
