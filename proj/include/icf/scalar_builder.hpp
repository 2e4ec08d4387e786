#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icf/fraction.hpp"

namespace icf {

// Interpolation data F(u_i) at distinct scalar nodes u_0..u_n.
template <Scalar S>
struct NodeData {
  std::vector<S> nodes;
  std::vector<Matrix<S>> values;

  std::size_t dim() const { return values.empty() ? 0 : values.front().dim(); }

  // Throws ValidationError naming the offending indices.
  void validate(double dedup_rel_tol = 1e-12) const {
    if (nodes.empty()) throw ValidationError("node data is empty");
    if (nodes.size() != values.size())
      throw ValidationError("node data: " + std::to_string(nodes.size()) + " nodes but " +
                            std::to_string(values.size()) + " values");
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i].dim() != values.front().dim() || values[i].dim() == 0)
        throw ValidationError("node data: value " + std::to_string(i) + " has a different dimension");
    using T = scalar_traits<S>;
    double scale = 0.0;
    for (const auto& u : nodes) scale = std::max(scale, T::magnitude(u));
    const double tol = T::exact ? 0.0 : dedup_rel_tol * scale;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        const bool same = T::exact ? nodes[i] == nodes[j] : T::magnitude(nodes[i] - nodes[j]) <= tol;
        if (same)
          throw ValidationError("duplicate nodes at indices " + std::to_string(i) + " and " + std::to_string(j));
      }
  }
};

// F_k(u) for the scalar-argument recursion, given F(u) and B_1..B_{k-1}:
//   F_1(u) = F(u),  F_2(u) = l_1(u-u0) [F(u) - F(u0)]^-1,
//   F_k(u) = l_{k-1}(u-u_{k-2}) [F_{k-1}(u) - I]^-1.
template <Scalar S>
Matrix<S> level_value(const NodeData<S>& data, std::span<const Matrix<S>> coeffs, std::size_t k, const S& u,
                      const Matrix<S>& value_at_u) {
  if (k == 0 || coeffs.size() + 1 < k)
    throw ValidationError("level_value: level " + std::to_string(k) + " needs " + std::to_string(k == 0 ? 0 : k - 1) +
                          " storeys, have " + std::to_string(coeffs.size()));
  auto l = [&](std::size_t q) { return coeffs[q - 1] * (u - data.nodes[q - 1]); };
  return level_function(value_at_u, data.values.front(), k, l, Orientation::tail_left);
}

// Same, for u taken from the node list.
template <Scalar S>
Matrix<S> level_value(const NodeData<S>& data, std::span<const Matrix<S>> coeffs, std::size_t k, const S& u) {
  for (std::size_t j = 0; j < data.nodes.size(); ++j)
    if (data.nodes[j] == u) return level_value(data, coeffs, k, u, data.values[j]);
  throw ValidationError("level_value: F(u) is only known at the nodes");
}

// Matrix-valued Thiele fraction of one scalar variable:
//   B_k = [F_k(u_k) - F_k(u_{k-1})] / (u_k - u_{k-1}),  l_k(d) = d B_k.
// Nodes are consumed in the given order; a singular level raises LevelSingular.
template <Scalar S>
ThieleFraction<S> build_scalar(const NodeData<S>& data) {
  data.validate();
  const std::size_t n = data.nodes.size() - 1;
  std::vector<Matrix<S>> coeffs;
  coeffs.reserve(n);
  std::vector<Storey<S>> storeys;
  storeys.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    auto at = [&](std::size_t j) {
      try {
        return level_value<S>(data, coeffs, k, data.nodes[j], data.values[j]);
      } catch (const LevelSingular& e) {
        throw LevelSingular(e.level(), "node " + std::to_string(j));
      }
    };
    Matrix<S> b = at(k) - at(k - 1);
    const S step = data.nodes[k] - data.nodes[k - 1];
    b *= scalar_traits<S>::one() / step;
    coeffs.push_back(b);
    storeys.push_back({k, ArgPoint<S>(data.nodes[k - 1]), ScalarMap<S>{std::move(b)}});
  }
  std::vector<ArgPoint<S>> nodes(data.nodes.begin(), data.nodes.end());
  return ThieleFraction<S>(data.values.front(), std::move(nodes), std::move(storeys), Orientation::tail_left);
}

// Classic scalar Thiele fraction through (x_i, f_i), built by reciprocal
// differences and evaluated at `probe`:
//   f(x) = a0 + (x - x0) / (a1 + (x - x1) / (a2 + ...)),
//   a_k = rho_k(x0..xk) - rho_{k-2}(x0..x_{k-2}).
// A vanishing difference terminates the fraction when the shorter convergent
// already fits all points (constant data, for one); otherwise, and for a
// zero denominator during evaluation, BreakdownError.
template <Scalar S>
S classic_thiele_oracle(std::span<const std::pair<S, S>> points, const S& probe) {
  using T = scalar_traits<S>;
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("classic_thiele_oracle: no points");
  // rho[k][i] = rho_k(x_i .. x_{i+k}); a[k] are the partial denominators.
  std::vector<std::vector<S>> rho(n);
  std::vector<S> a;
  for (std::size_t i = 0; i < n; ++i) rho[0].push_back(points[i].second);
  a.push_back(rho[0][0]);

  // Convergent with the first `terms` partial denominators at x; nullopt on a zero denominator.
  auto convergent = [&](std::size_t terms, const S& x) -> std::optional<S> {
    S tail = a[terms - 1];
    for (std::size_t k = terms - 1; k >= 1; --k) {
      if (T::is_zero(tail)) return std::nullopt;
      tail = a[k - 1] + (x - points[k - 1].first) / tail;
    }
    return tail;
  };
  auto interpolates_all = [&](std::size_t terms) {
    for (const auto& [x, f] : points) {
      const auto v = convergent(terms, x);
      if (!v) return false;
      const bool same = T::exact ? *v == f : T::magnitude(*v - f) <= 1e-14 * std::max(1.0, T::magnitude(f));
      if (!same) return false;
    }
    return true;
  };

  std::size_t terms = n;
  for (std::size_t k = 1; k < n; ++k) {
    bool broke = false;
    for (std::size_t i = 0; i + k < n && !broke; ++i) {
      const S den = rho[k - 1][i] - rho[k - 1][i + 1];
      if (T::is_zero(den)) {
        broke = true;
        break;
      }
      S r = (points[i].first - points[i + k].first) / den;
      if (k >= 2) r += rho[k - 2][i + 1];
      rho[k].push_back(r);
    }
    if (broke) {
      // An infinite reciprocal difference ends the fraction, but only if it already fits every point.
      if (!interpolates_all(k))
        throw BreakdownError("reciprocal difference breakdown at order " + std::to_string(k));
      terms = k;
      break;
    }
    a.push_back(k == 1 ? rho[1][0] : S(rho[k][0] - rho[k - 2][0]));
  }

  const auto v = convergent(terms, probe);
  if (!v) throw BreakdownError("pole at probe");
  return *v;
}

}  // namespace icf
