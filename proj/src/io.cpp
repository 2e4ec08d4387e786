#include "icf/io.hpp"

#include <fstream>
#include <sstream>

namespace icf::io {

std::string_view to_string(Backend b) { return b == Backend::exact ? "exact" : "float"; }

Backend backend_from_string(std::string_view s) {
  if (s == "float") return Backend::floating;
  if (s == "exact") return Backend::exact;
  throw ValidationError("unknown backend '" + std::string(s) + "'");
}

json scalar_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json scalar_to_json(const GaussianRational& z) {
  return json::array({z.real().get_str(), z.imag().get_str()});
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return expr::parse(j.get<std::string>(), {}).eval({});
  throw ValidationError("expected a real number or expression string");
}

namespace {

mpq_class rational_from_json(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    try {
      return GaussianRational::parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  if (j.is_number()) throw ValidationError("exact backend: write non-integers as strings such as \"1/3\"");
  throw ValidationError("expected a rational");
}

}  // namespace

template <>
Complex scalar_from_json<Complex>(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ValidationError("complex number must be [re, im]");
    return {real_from_json(j[0]), real_from_json(j[1])};
  }
  return {real_from_json(j), 0.0};
}

template <>
GaussianRational scalar_from_json<GaussianRational>(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ValidationError("complex number must be [re, im]");
    return {rational_from_json(j[0]), rational_from_json(j[1])};
  }
  return {rational_from_json(j), 0};
}

json grid_to_json(const GridFunction& g) {
  json j;
  j["N"] = g.size();
  j["samples"] = std::vector<double>(g.samples().begin(), g.samples().end());
  return j;
}

GridFunction grid_from_json(const json& j, std::optional<std::size_t> n) {
  if (j.is_string()) {
    if (!n) throw ValidationError("expression knots need a grid size");
    const expr::Expr e = expr::parse(j.get<std::string>(), {"t"});
    return GridFunction::from_function(*n, [&](double t) { return e.eval(std::span<const double>(&t, 1)); });
  }
  if (!j.is_object() || !j.contains("samples")) throw ValidationError("grid function needs \"samples\"");
  auto samples = j.at("samples").get<std::vector<double>>();
  if (j.contains("N") && j.at("N").get<std::size_t>() != samples.size())
    throw ValidationError("grid function: N does not match the sample count");
  return GridFunction(std::move(samples));
}

template <Scalar S>
ThieleFraction<S> fraction_from_json_as(const json& j) {
  const ArgKind kind = arg_kind_from_string(j.at("arg_kind").get<std::string>());
  const Orientation orientation =
      j.contains("orientation") ? orientation_from_string(j.at("orientation").get<std::string>())
                                : Orientation::tail_right;
  const auto m = j.at("m").get<std::size_t>();
  std::size_t extent = 1;
  if (kind == ArgKind::vector) extent = j.at("dim").get<std::size_t>();
  if (kind == ArgKind::grid) extent = j.at("N").get<std::size_t>();

  Matrix<S> base = matrix_from_json<S>(j.at("base"));
  if (base.dim() != m) throw ValidationError("base matrix dimension differs from m");
  std::vector<ArgPoint<S>> nodes;
  for (const auto& u : j.at("nodes")) nodes.push_back(point_from_json<S>(u, kind, extent));

  const std::string expected_payload = kind == ArgKind::scalar ? "scalar"
                                       : kind == ArgKind::vector ? "directional"
                                                                 : "kernel";
  std::vector<Storey<S>> storeys;
  for (const auto& s : j.at("storeys")) {
    Storey<S> st;
    st.level = s.at("level").get<std::size_t>();
    st.anchor = point_from_json<S>(s.at("anchor"), kind, extent);
    if (s.at("payload_kind").get<std::string>() != expected_payload)
      throw ValidationError("storey payload_kind must be '" + expected_payload + "'");
    std::vector<Matrix<S>> coeffs;
    for (const auto& c : s.at("coeffs")) coeffs.push_back(matrix_from_json<S>(c));
    switch (kind) {
      case ArgKind::scalar:
        if (coeffs.size() != 1) throw ValidationError("scalar storey needs exactly one coefficient matrix");
        st.map = ScalarMap<S>{std::move(coeffs.front())};
        break;
      case ArgKind::vector:
        if (coeffs.size() != extent) throw ValidationError("directional storey needs one matrix per axis");
        st.map = DirectionalMap<S>{std::move(coeffs)};
        break;
      case ArgKind::grid:
        if (coeffs.size() != extent) throw ValidationError("kernel storey needs one matrix per cell");
        st.map = KernelMap<S>{std::move(coeffs)};
        break;
    }
    storeys.push_back(std::move(st));
  }
  return ThieleFraction<S>(std::move(base), std::move(nodes), std::move(storeys), orientation);
}

template ThieleFraction<Complex> fraction_from_json_as<Complex>(const json&);
template ThieleFraction<GaussianRational> fraction_from_json_as<GaussianRational>(const json&);

AnyFraction fraction_from_json(const json& j) {
  const Backend b = backend_from_string(j.at("backend").get<std::string>());
  if (b == Backend::exact) return fraction_from_json_as<GaussianRational>(j);
  return fraction_from_json_as<Complex>(j);
}

namespace {

template <Scalar S>
NodeData<S> scalar_nodes(const json& j) {
  NodeData<S> d;
  for (const auto& u : j.at("nodes")) d.nodes.push_back(scalar_from_json<S>(u));
  for (const auto& v : j.at("values")) d.values.push_back(matrix_from_json<S>(v));
  if (j.contains("m"))
    for (std::size_t i = 0; i < d.values.size(); ++i)
      if (d.values[i].dim() != j.at("m").get<std::size_t>())
        throw ValidationError("value " + std::to_string(i) + " does not have dimension m");
  d.validate();
  return d;
}

}  // namespace

Problem problem_from_json(const json& j, std::optional<Backend> backend_override,
                          std::optional<std::size_t> grid_override) {
  const ArgKind kind = arg_kind_from_string(j.value("arg_kind", std::string("scalar")));
  switch (kind) {
    case ArgKind::scalar: {
      Backend b = j.contains("backend") ? backend_from_string(j.at("backend").get<std::string>()) : Backend::floating;
      if (backend_override) b = *backend_override;
      if (b == Backend::exact) return ScalarProblem{scalar_nodes<GaussianRational>(j)};
      return ScalarProblem{scalar_nodes<Complex>(j)};
    }
    case ArgKind::vector: {
      if (backend_override == Backend::exact) throw ValidationError("exact backend is only available for scalar arguments");
      const auto vars = j.at("vars").get<std::vector<std::string>>();
      const auto rows = j.at("function").get<std::vector<std::vector<std::string>>>();
      VectorProblem p{expr::parse_matrix(rows, vars), {}};
      const std::size_t d = j.value("dim", vars.size());
      if (d != vars.size()) throw ValidationError("dim differs from the number of variables");
      if (j.contains("m") && j.at("m").get<std::size_t>() != p.function.m)
        throw ValidationError("function matrix size differs from m");
      for (const auto& u : j.at("nodes")) {
        if (!u.is_array() || u.size() != d) throw ValidationError("vector node must have " + std::to_string(d) + " coordinates");
        Point pt;
        for (const auto& x : u) pt.push_back(real_from_json(x));
        p.nodes.push_back(std::move(pt));
      }
      return p;
    }
    case ArgKind::grid: {
      if (backend_override == Backend::exact) throw ValidationError("exact backend is only available for scalar arguments");
      std::optional<std::size_t> n = grid_override;
      if (!n && j.contains("N")) n = j.at("N").get<std::size_t>();
      GridProblem p{j.value("operator", std::string("demo")), {}};
      builtin_operator(p.op);
      for (const auto& k : j.at("knots")) p.knots.push_back(grid_from_json(k, n));
      return p;
    }
  }
  throw ValidationError("bad arg_kind");
}

OperatorFunction builtin_operator(const std::string& name) {
  if (name == "demo") return demo_operator();
  throw ValidationError("unknown built-in operator '" + name + "'");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace icf::io
