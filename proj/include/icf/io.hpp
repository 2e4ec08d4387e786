#pragma once

// JSON formats.
//
//   complex      [re, im]   (exact backend: ["p/q", "p/q"]; a bare number or string means im = 0)
//   matrix       m x m nested arrays of complex
//   grid         {"N": n, "samples": [...]}
//   fraction     {"m", "arg_kind", "backend", "orientation", "base", "nodes",
//                 "storeys": [{"level", "anchor", "payload_kind", "coeffs"}], "source"?}
//                (source: optional copy of the node file, used by `icf verify`)
//   node file    {"m", "backend", "arg_kind": "scalar", "nodes", "values"}
//                {"m", "arg_kind": "vector", "dim", "vars", "function", "nodes"}
//                {"m", "arg_kind": "grid", "operator", "N", "knots"}

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "icf/continual_builder.hpp"
#include "icf/exprlang.hpp"
#include "icf/fraction.hpp"
#include "icf/functional_builder.hpp"
#include "icf/scalar_builder.hpp"

namespace icf::io {

using json = nlohmann::ordered_json;

enum class Backend { floating, exact };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

template <Scalar S>
constexpr Backend backend_of() {
  return scalar_traits<S>::exact ? Backend::exact : Backend::floating;
}

json scalar_to_json(const Complex& z);
json scalar_to_json(const GaussianRational& z);

template <Scalar S>
S scalar_from_json(const json& j);
template <>
Complex scalar_from_json<Complex>(const json& j);
template <>
GaussianRational scalar_from_json<GaussianRational>(const json& j);

// Real number given as a JSON number or an expression string such as "pi/2".
double real_from_json(const json& j);

template <Scalar S>
json matrix_to_json(const Matrix<S>& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < a.dim(); ++k) row.push_back(scalar_to_json(a(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar S>
Matrix<S> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const std::size_t m = j.size();
  std::vector<S> entries;
  entries.reserve(m * m);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != m) throw ValidationError("matrix must be square");
    for (const auto& e : row) entries.push_back(scalar_from_json<S>(e));
  }
  return Matrix<S>(m, std::move(entries));
}

json grid_to_json(const GridFunction& g);
// Object form, or an expression string in t sampled at cell centers of an n-cell grid.
GridFunction grid_from_json(const json& j, std::optional<std::size_t> n = std::nullopt);

template <Scalar S>
json point_to_json(const ArgPoint<S>& p) {
  switch (kind_of(p)) {
    case ArgKind::scalar:
      return scalar_to_json(std::get<S>(p));
    case ArgKind::vector: {
      json out = json::array();
      for (const auto& x : std::get<1>(p)) {
        const Complex z = scalar_traits<S>::to_complex(x);
        if (z.imag() != 0.0) throw ValidationError("vector arguments are real");
        out.push_back(z.real());
      }
      return out;
    }
    case ArgKind::grid:
      return grid_to_json(std::get<GridFunction>(p));
  }
  return {};
}

template <Scalar S>
ArgPoint<S> point_from_json(const json& j, ArgKind kind, std::size_t extent) {
  switch (kind) {
    case ArgKind::scalar:
      return scalar_from_json<S>(j);
    case ArgKind::vector: {
      if (!j.is_array() || j.size() != extent)
        throw ValidationError("vector point must be an array of " + std::to_string(extent) + " reals");
      std::vector<S> v;
      for (const auto& x : j) v.push_back(scalar_traits<S>::from_real(real_from_json(x)));
      return v;
    }
    case ArgKind::grid: {
      GridFunction g = grid_from_json(j, extent);
      if (g.size() != extent) throw ValidationError("grid point has N = " + std::to_string(g.size()));
      return g;
    }
  }
  throw ValidationError("bad argument kind");
}

template <Scalar S>
std::size_t extent_of(const ArgPoint<S>& p) {
  switch (kind_of(p)) {
    case ArgKind::scalar: return 1;
    case ArgKind::vector: return std::get<1>(p).size();
    case ArgKind::grid: return std::get<GridFunction>(p).size();
  }
  return 0;
}

template <Scalar S>
json fraction_to_json(const ThieleFraction<S>& f) {
  json j;
  j["m"] = f.dim();
  j["arg_kind"] = to_string(f.arg_kind());
  j["backend"] = to_string(backend_of<S>());
  j["orientation"] = to_string(f.orientation());
  if (f.arg_kind() == ArgKind::vector) j["dim"] = extent_of(f.nodes().front());
  if (f.arg_kind() == ArgKind::grid) j["N"] = extent_of(f.nodes().front());
  j["base"] = matrix_to_json(f.base());
  json nodes = json::array();
  for (const auto& u : f.nodes()) nodes.push_back(point_to_json(u));
  j["nodes"] = std::move(nodes);
  json storeys = json::array();
  for (const auto& st : f.storeys()) {
    json s;
    s["level"] = st.level;
    s["anchor"] = point_to_json(st.anchor);
    json coeffs = json::array();
    std::visit(
        [&](const auto& m) {
          if constexpr (requires { m.coeff; }) {
            s["payload_kind"] = "scalar";
            coeffs.push_back(matrix_to_json(m.coeff));
          } else if constexpr (requires { m.coeffs; }) {
            s["payload_kind"] = "directional";
            for (const auto& c : m.coeffs) coeffs.push_back(matrix_to_json(c));
          } else {
            s["payload_kind"] = "kernel";
            for (const auto& c : m.kernel) coeffs.push_back(matrix_to_json(c));
          }
        },
        st.map);
    s["coeffs"] = std::move(coeffs);
    storeys.push_back(std::move(s));
  }
  j["storeys"] = std::move(storeys);
  return j;
}

template <Scalar S>
ThieleFraction<S> fraction_from_json_as(const json& j);

using AnyFraction = std::variant<ThieleFraction<Complex>, ThieleFraction<GaussianRational>>;

AnyFraction fraction_from_json(const json& j);

// Node files.
struct ScalarProblem {
  std::variant<NodeData<Complex>, NodeData<GaussianRational>> data;
};

struct VectorProblem {
  expr::MatrixExpr function;
  std::vector<Point> nodes;
};

struct GridProblem {
  std::string op;  // built-in operator name; only "demo" exists
  std::vector<GridFunction> knots;
};

using Problem = std::variant<ScalarProblem, VectorProblem, GridProblem>;

// `backend_override` applies to scalar problems, `grid_override` to grid problems.
Problem problem_from_json(const json& j, std::optional<Backend> backend_override = std::nullopt,
                          std::optional<std::size_t> grid_override = std::nullopt);

OperatorFunction builtin_operator(const std::string& name);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace icf::io
