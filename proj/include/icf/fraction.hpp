#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icf/errors.hpp"
#include "icf/grid.hpp"
#include "icf/matrix.hpp"

namespace icf {

enum class ArgKind { scalar, vector, grid };

std::string_view to_string(ArgKind k);
ArgKind arg_kind_from_string(std::string_view s);

// Where the inverted tail sits relative to the linear terms.
//
//   tail_right:  T(u) = F(u0) + l1 [I + l2 [I + ...]^-1]^-1,   F_k = [F_{k-1} - D]^-1 l_{k-1}
//   tail_left:   T(u) = F(u0) + [I + [I + ...]^-1 l2]^-1 l1,   F_k = l_{k-1} [F_{k-1} - D]^-1
//
// D is F(u0) for k = 2 and I above that. Each pairing interpolates; mixing
// them does not once the data stop commuting.
enum class Orientation { tail_right, tail_left };

std::string_view to_string(Orientation o);
Orientation orientation_from_string(std::string_view s);

template <Scalar S>
using ArgPoint = std::variant<S, std::vector<S>, GridFunction>;

template <Scalar S>
ArgKind kind_of(const ArgPoint<S>& p) {
  return static_cast<ArgKind>(p.index());
}

template <Scalar S>
ArgPoint<S> difference(const ArgPoint<S>& u, const ArgPoint<S>& v) {
  if (u.index() != v.index()) throw ValidationError("argument kinds differ");
  switch (kind_of(u)) {
    case ArgKind::scalar:
      return std::get<S>(u) - std::get<S>(v);
    case ArgKind::vector: {
      const auto& a = std::get<1>(u);
      const auto& b = std::get<1>(v);
      if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
      std::vector<S> d(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
      return d;
    }
    case ArgKind::grid:
      return std::get<GridFunction>(u) - std::get<GridFunction>(v);
  }
  return u;
}

// l(d) = d * coeff
template <Scalar S>
struct ScalarMap {
  Matrix<S> coeff;
  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;
};

// l(w) = sum_a coeffs[a] * w_a
template <Scalar S>
struct DirectionalMap {
  std::vector<Matrix<S>> coeffs;
  friend bool operator==(const DirectionalMap&, const DirectionalMap&) = default;
};

// l(w) = sum_j kernel[j] * w(tau_j), one entry per grid cell
template <Scalar S>
struct KernelMap {
  std::vector<Matrix<S>> kernel;
  friend bool operator==(const KernelMap&, const KernelMap&) = default;
};

template <Scalar S>
using StoreyMap = std::variant<ScalarMap<S>, DirectionalMap<S>, KernelMap<S>>;

template <Scalar S>
Matrix<S> apply_map(const StoreyMap<S>& map, const ArgPoint<S>& delta, std::size_t m) {
  if (map.index() != delta.index()) throw ValidationError("storey payload does not match argument kind");
  using T = scalar_traits<S>;
  switch (delta.index()) {
    case 0:
      return std::get<0>(map).coeff * std::get<S>(delta);
    case 1: {
      const auto& c = std::get<1>(map).coeffs;
      const auto& w = std::get<1>(delta);
      if (c.size() != w.size()) throw DimensionMismatch(c.size(), w.size());
      Matrix<S> out(m);
      for (std::size_t a = 0; a < c.size(); ++a)
        if (!T::is_zero(w[a])) out += c[a] * w[a];
      return out;
    }
    default: {
      const auto& k = std::get<2>(map).kernel;
      const auto& w = std::get<GridFunction>(delta);
      if (k.size() != w.size()) throw DimensionMismatch(k.size(), w.size());
      Matrix<S> out(m);
      for (std::size_t j = 0; j < k.size(); ++j)
        if (w[j] != 0.0) out += k[j] * T::from_real(w[j]);
      return out;
    }
  }
}

template <Scalar S>
struct Storey {
  std::size_t level = 0;
  ArgPoint<S> anchor;  // u_{level-1}
  StoreyMap<S> map;
  friend bool operator==(const Storey&, const Storey&) = default;
};

// Interpolating continued fraction T_n with base F(u0), nodes u0..un and
// one storey per level. Immutable once constructed.
template <Scalar S>
class ThieleFraction {
 public:
  ThieleFraction(Matrix<S> base, std::vector<ArgPoint<S>> nodes, std::vector<Storey<S>> storeys,
                 Orientation orientation)
      : base_(std::move(base)), nodes_(std::move(nodes)), storeys_(std::move(storeys)), orientation_(orientation) {
    if (nodes_.empty()) throw ValidationError("fraction needs at least one node");
    if (nodes_.size() != storeys_.size() + 1) throw ValidationError("fraction needs one more node than storeys");
    for (const auto& u : nodes_)
      if (u.index() != nodes_.front().index()) throw ValidationError("mixed argument kinds in nodes");
    for (std::size_t k = 0; k < storeys_.size(); ++k) {
      const auto& st = storeys_[k];
      if (st.level != k + 1) throw ValidationError("storey levels must run 1..n");
      if (st.map.index() != nodes_.front().index()) throw ValidationError("storey payload kind mismatch");
      if (!(st.anchor == nodes_[k])) throw ValidationError("storey anchor differs from node u_{k-1}");
      std::visit(
          [&](const auto& m) {
            if constexpr (requires { m.coeff; }) {
              check_dim(m.coeff);
            } else if constexpr (requires { m.coeffs; }) {
              for (const auto& c : m.coeffs) check_dim(c);
            } else {
              for (const auto& c : m.kernel) check_dim(c);
            }
          },
          st.map);
    }
  }

  std::size_t dim() const noexcept { return base_.dim(); }
  std::size_t order() const noexcept { return storeys_.size(); }
  ArgKind arg_kind() const noexcept { return static_cast<ArgKind>(nodes_.front().index()); }
  Orientation orientation() const noexcept { return orientation_; }
  const Matrix<S>& base() const noexcept { return base_; }
  const std::vector<ArgPoint<S>>& nodes() const noexcept { return nodes_; }
  const std::vector<Storey<S>>& storeys() const noexcept { return storeys_; }

  // l_k(u - u_{k-1}), k = 1..n
  Matrix<S> linear_term(std::size_t k, const ArgPoint<S>& u) const {
    const auto& st = storeys_.at(k - 1);
    return apply_map(st.map, difference(u, st.anchor), dim());
  }

  friend bool operator==(const ThieleFraction&, const ThieleFraction&) = default;

 private:
  void check_dim(const Matrix<S>& c) const {
    if (c.dim() != base_.dim()) throw DimensionMismatch(c.dim(), base_.dim());
  }

  Matrix<S> base_;
  std::vector<ArgPoint<S>> nodes_;
  std::vector<Storey<S>> storeys_;
  Orientation orientation_;
};

// Backward evaluation of T_n(u). Throws TailSingular{k} when the bracket
// opened at storey k cannot be inverted (a pole of the interpolant).
template <Scalar S>
Matrix<S> evaluate(const ThieleFraction<S>& f, const ArgPoint<S>& u) {
  if (u.index() != f.nodes().front().index()) throw ValidationError("argument kind does not match fraction");
  const std::size_t n = f.order();
  const std::size_t m = f.dim();
  if (n == 0) return f.base();

  auto inverse_at = [](const Matrix<S>& r, std::size_t level) {
    try {
      return mat_inverse(r);
    } catch (const SingularMatrix&) {
      throw TailSingular(level);
    } catch (const NonFiniteValue&) {
      throw TailSingular(level);
    }
  };

  const auto id = Matrix<S>::identity(m);
  Matrix<S> result;
  if (n == 1) {
    result = f.base() + f.linear_term(1, u);
  } else {
    Matrix<S> tail = id + f.linear_term(n, u);
    for (std::size_t k = n - 1; k >= 2; --k) {
      const Matrix<S> inv = inverse_at(tail, k + 1);
      const Matrix<S> l = f.linear_term(k, u);
      tail = id + (f.orientation() == Orientation::tail_right ? l * inv : inv * l);
    }
    const Matrix<S> inv = inverse_at(tail, 2);
    const Matrix<S> l = f.linear_term(1, u);
    result = f.base() + (f.orientation() == Orientation::tail_right ? l * inv : inv * l);
  }
  if constexpr (!scalar_traits<S>::exact) {
    if (!all_finite(result)) throw NonFiniteValue("fraction value is not finite");
  }
  return result;
}

// k-storey prefix T_k of T_n.
template <Scalar S>
ThieleFraction<S> truncate(const ThieleFraction<S>& f, std::size_t k) {
  if (k > f.order()) throw ValidationError("truncate: level " + std::to_string(k) + " exceeds order");
  std::vector<ArgPoint<S>> nodes(f.nodes().begin(), f.nodes().begin() + static_cast<std::ptrdiff_t>(k + 1));
  std::vector<Storey<S>> storeys(f.storeys().begin(), f.storeys().begin() + static_cast<std::ptrdiff_t>(k));
  return ThieleFraction<S>(f.base(), std::move(nodes), std::move(storeys), f.orientation());
}

struct Residual {
  double value = 0.0;  // +inf when evaluation failed
  std::string error;   // empty on success
  bool ok() const noexcept { return error.empty(); }
};

template <Scalar S>
Residual residual_at(const ThieleFraction<S>& f, const ArgPoint<S>& u, const Matrix<S>& expected) {
  try {
    return {mat_norm(Matrix<S>(evaluate(f, u) - expected)), {}};
  } catch (const Error& e) {
    return {std::numeric_limits<double>::infinity(), e.what()};
  }
}

// ||T_n(u_i) - values[i]|| for every node; failures are embedded, not thrown.
template <Scalar S>
std::vector<Residual> verify_nodal(const ThieleFraction<S>& f, const std::vector<Matrix<S>>& values) {
  if (values.size() != f.nodes().size())
    throw ValidationError("verify_nodal: expected " + std::to_string(f.nodes().size()) + " values");
  std::vector<Residual> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back(residual_at(f, f.nodes()[i], values[i]));
  return out;
}

// F_k(u) from F(u), F(u0) and the linear terms l_q(u - u_{q-1}), q < k.
// Throws LevelSingular{q, ""}; callers add the location.
template <Scalar S, class LinearTerm>
Matrix<S> level_function(const Matrix<S>& value, const Matrix<S>& base, std::size_t k, LinearTerm&& linear_term,
                         Orientation orientation) {
  if (k == 0) throw ValidationError("level functions start at k = 1");
  Matrix<S> cur = value;
  const auto id = Matrix<S>::identity(value.dim());
  for (std::size_t q = 2; q <= k; ++q) {
    const Matrix<S> denom = cur - (q == 2 ? base : id);
    Matrix<S> inv;
    try {
      inv = mat_inverse(denom);
    } catch (const SingularMatrix&) {
      throw LevelSingular(q, "");
    } catch (const NonFiniteValue&) {
      throw LevelSingular(q, "");
    }
    const Matrix<S> l = linear_term(q - 1);
    cur = orientation == Orientation::tail_right ? inv * l : l * inv;
  }
  return cur;
}

}  // namespace icf
