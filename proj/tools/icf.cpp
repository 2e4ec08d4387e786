// icf: build, evaluate and verify interpolating continued fractions.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input (validation or I/O),
// 3 numerical breakdown, 4 demo fixture failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icf/continual_builder.hpp"
#include "icf/exprlang.hpp"
#include "icf/fixtures.hpp"
#include "icf/functional_builder.hpp"
#include "icf/io.hpp"
#include "icf/scalar_builder.hpp"

#ifndef ICF_DATA_DIR
#define ICF_DATA_DIR "data"
#endif

namespace {

using icf::io::json;

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kBreakdown = 3, kFixtureFailed = 4 };

struct Options {
  std::string input;
  std::string output;
  std::string data;
  std::string backend;
  int quad_order = 32;
  double fd_step = 0.0;  // 0: per-builder default
  std::size_t grid = 0;  // 0: as given in the input
  std::vector<std::string> at;
  std::string points;
  std::string report = "text";
  std::string demo;
  std::string data_dir = ICF_DATA_DIR;
};

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// Exact zeros print as "0"; everything else as the JSON number.
json residual_json(const icf::Residual& r) {
  if (!r.ok()) return json{{"error", r.error}};
  if (r.value == 0.0) return 0;
  return r.value;
}

json residuals_json(const std::vector<icf::Residual>& rs) {
  json out = json::array();
  for (const auto& r : rs) out.push_back(residual_json(r));
  return out;
}

bool any_failed(const std::vector<icf::Residual>& rs) {
  return std::ranges::any_of(rs, [](const icf::Residual& r) { return !r.ok(); });
}

class RunReport {
 public:
  explicit RunReport(std::string command) : start_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["inputs"] = json::array();
    j_["warnings"] = json::array();
  }

  void add_input(const std::string& path) { j_["inputs"].push_back({{"path", path}, {"digest", fnv1a_digest(path)}}); }
  void set(const std::string& key, json value) { j_[key] = std::move(value); }
  void warn(const std::string& w) { j_["warnings"].push_back(w); }

  // Both renderings share the same JSON number formatting.
  void emit(std::ostream& os, const std::string& format) {
    j_["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    if (format == "json") {
      os << j_.dump(2) << '\n';
      return;
    }
    for (const auto& [key, value] : j_.items()) {
      if (key == "inputs") {
        for (const auto& in : value) os << "input: " << in["path"].get<std::string>() << " " << in["digest"].get<std::string>() << '\n';
      } else if (key == "warnings") {
        for (const auto& w : value) os << "warning: " << w.get<std::string>() << '\n';
      } else if (value.is_array()) {
        os << key << ":";
        for (const auto& v : value) os << ' ' << (v.is_object() && v.contains("error") ? "FAILED(" + v["error"].get<std::string>() + ")" : v.dump());
        os << '\n';
      } else if (value.is_string()) {
        os << key << ": " << value.get<std::string>() << '\n';
      } else {
        os << key << ": " << value.dump() << '\n';
      }
    }
  }

 private:
  json j_;
  std::chrono::steady_clock::time_point start_;
};

template <icf::Scalar S>
void warn_large(RunReport& rep, const std::vector<icf::Residual>& rs, const std::vector<icf::Matrix<S>>& values) {
  if constexpr (icf::scalar_traits<S>::exact) {
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i].ok() && rs[i].value != 0.0) rep.warn("nonzero exact residual at node " + std::to_string(i));
  } else {
    double scale = 0.0;
    for (const auto& v : values) scale = std::max(scale, icf::mat_norm(v));
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i].ok() && rs[i].value > 1e-9 * std::max(1.0, scale))
        rep.warn("nodal residual at node " + std::to_string(i) + " exceeds 1e-9 relative; data may be near-singular");
  }
}

double grid_fd(const Options& o, std::size_t n) { return o.fd_step > 0.0 ? o.fd_step : 1e-2 / static_cast<double>(n); }

std::optional<icf::io::Backend> backend_flag(const Options& o) {
  if (o.backend.empty()) return std::nullopt;
  return icf::io::backend_from_string(o.backend);
}

void write_fraction(const json& frac, const Options& o) {
  if (o.output.empty())
    std::cout << frac.dump(2) << '\n';
  else
    icf::io::write_text_file(o.output, frac.dump(2) + "\n");
}

std::ostream& report_stream(const Options& o) { return o.output.empty() ? std::cerr : std::cout; }

int cmd_build(const Options& o) {
  RunReport rep("build");
  rep.add_input(o.input);
  const json input = icf::io::read_json_file(o.input);
  const auto problem = icf::io::problem_from_json(input, backend_flag(o),
                                                  o.grid ? std::optional<std::size_t>(o.grid) : std::nullopt);
  json frac_json;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, icf::io::ScalarProblem>) {
          std::visit(
              [&](const auto& data) {
                using S = std::decay_t<decltype(data.nodes.front())>;
                rep.set("backend", std::string(icf::io::to_string(icf::io::backend_of<S>())));
                rep.set("arg_kind", "scalar");
                const auto frac = icf::build_scalar(data);
                const auto res = icf::verify_nodal(frac, data.values);
                rep.set("nodal_residuals", residuals_json(res));
                warn_large(rep, res, data.values);
                frac_json = icf::io::fraction_to_json(frac);
              },
              p.data);
        } else if constexpr (std::is_same_v<P, icf::io::VectorProblem>) {
          rep.set("backend", "float");
          rep.set("arg_kind", "vector");
          const icf::MatrixFunction f = icf::expr::to_matrix_function(p.function);
          icf::QuadConfig q;
          q.order = o.quad_order;
          if (o.fd_step > 0.0) q.fd_step = o.fd_step;
          const auto frac = icf::build_functional(f, p.nodes, q);
          std::vector<icf::CMatrix> values;
          for (const auto& u : p.nodes) values.push_back(f.eval(u));
          const auto res = icf::verify_nodal(frac, values);
          rep.set("nodal_residuals", residuals_json(res));
          warn_large(rep, res, values);
          frac_json = icf::io::fraction_to_json(frac);
        } else {
          rep.set("backend", "float");
          rep.set("arg_kind", "grid");
          const auto f = icf::io::builtin_operator(p.op);
          const double fd = grid_fd(o, p.knots.front().size());
          const auto frac = icf::build_abstract(f, p.knots, fd);
          rep.set("nodal_residuals", residuals_json(icf::verify_operator_nodal(frac, f)));
          const std::vector<double> xis{0.25, 0.5, 0.75};
          if (frac.order() > 0) rep.set("continual_residuals", residuals_json(icf::check_continual(frac, f, xis)));
          frac_json = icf::io::fraction_to_json(frac);
        }
      },
      problem);
  // Keep the node file so `verify` can run on the fraction alone.
  frac_json["source"] = input;
  write_fraction(frac_json, o);
  rep.emit(report_stream(o), o.report);
  return kOk;
}

template <icf::Scalar S>
json eval_points(const icf::ThieleFraction<S>& f, const std::vector<json>& points) {
  const std::size_t extent = icf::io::extent_of(f.nodes().front());
  std::vector<json> out(points.size());
  // Independent points; results keep input order.
  auto work = [&](std::size_t i) {
    json entry{{"point", points[i]}};
    try {
      const auto u = icf::io::point_from_json<S>(points[i], f.arg_kind(), extent);
      entry["value"] = icf::io::matrix_to_json(icf::evaluate(f, u));
    } catch (const icf::TailSingular& e) {
      entry["error"] = e.what();
    } catch (const icf::NonFiniteValue& e) {
      entry["error"] = e.what();
    }
    out[i] = std::move(entry);
  };
  for (std::size_t i = 0; i < points.size(); ++i) work(i);
  return json(out);
}

json parse_point_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

int cmd_eval(const Options& o) {
  const auto frac = icf::io::fraction_from_json(icf::io::read_json_file(o.input));
  std::vector<json> points;
  for (const auto& a : o.at) points.push_back(parse_point_text(a));
  if (!o.points.empty()) {
    const json pj = icf::io::read_json_file(o.points);
    if (!pj.is_array()) throw icf::ValidationError("points file must hold a JSON array");
    for (const auto& p : pj) points.push_back(p);
  }
  const json out = std::visit([&](const auto& f) { return eval_points(f, points); }, frac);
  // One point per line.
  std::cout << '[';
  for (std::size_t i = 0; i < out.size(); ++i) std::cout << (i ? ",\n " : "\n ") << out[i].dump();
  std::cout << (out.empty() ? "]\n" : "\n]\n");
  return kOk;
}

int cmd_verify(const Options& o) {
  RunReport rep("verify");
  rep.add_input(o.input);
  const json frac_json = icf::io::read_json_file(o.input);
  const auto any = icf::io::fraction_from_json(frac_json);
  json data;
  if (!o.data.empty()) {
    rep.add_input(o.data);
    data = icf::io::read_json_file(o.data);
  } else if (frac_json.contains("source")) {
    data = frac_json["source"];
  } else {
    throw icf::ValidationError("fraction file has no embedded source; pass the node file with --data");
  }
  bool failed = false;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        using S = std::decay_t<decltype(f.base().entries().front())>;
        rep.set("backend", std::string(icf::io::to_string(icf::io::backend_of<S>())));
        rep.set("arg_kind", std::string(icf::to_string(f.arg_kind())));
        const auto problem = icf::io::problem_from_json(
            data, icf::io::backend_of<S>(),
            f.arg_kind() == icf::ArgKind::grid
                ? std::optional<std::size_t>(icf::io::extent_of(f.nodes().front()))
                : std::nullopt);
        std::vector<icf::Residual> res;
        if (const auto* sp = std::get_if<icf::io::ScalarProblem>(&problem)) {
          const auto* nd = std::get_if<icf::NodeData<S>>(&sp->data);
          if (!nd || f.arg_kind() != icf::ArgKind::scalar) throw icf::ValidationError("node file does not match the fraction");
          res = icf::verify_nodal(f, nd->values);
        } else if constexpr (std::is_same_v<F, icf::ThieleFraction<icf::Complex>>) {
          if (const auto* vp = std::get_if<icf::io::VectorProblem>(&problem)) {
            if (f.arg_kind() != icf::ArgKind::vector) throw icf::ValidationError("node file does not match the fraction");
            const auto fn = icf::expr::to_matrix_function(vp->function);
            std::vector<icf::CMatrix> values;
            for (const auto& u : f.nodes()) {
              icf::Point p;
              for (const auto& x : std::get<1>(u)) p.push_back(x.real());
              values.push_back(fn.eval(p));
            }
            res = icf::verify_nodal(f, values);
          } else {
            const auto& gp = std::get<icf::io::GridProblem>(problem);
            if (f.arg_kind() != icf::ArgKind::grid) throw icf::ValidationError("node file does not match the fraction");
            const auto op = icf::io::builtin_operator(gp.op);
            res = icf::verify_operator_nodal(f, op);
            rep.set("nodal_residuals", residuals_json(res));
            if (f.order() > 0) {
              const std::vector<double> xis{0.25, 0.5, 0.75};
              const auto cont = icf::check_continual(f, op, xis);
              failed = failed || any_failed(cont);
              rep.set("continual_residuals", residuals_json(cont));
            }
          }
        } else {
          throw icf::ValidationError("exact fractions only take scalar node files");
        }
        failed = failed || any_failed(res);
        if (f.arg_kind() != icf::ArgKind::grid) rep.set("nodal_residuals", residuals_json(res));
      },
      any);
  rep.emit(std::cout, o.report);
  return failed ? kBreakdown : kOk;
}

int cmd_demo(const Options& o) {
  const auto rep = icf::fixtures::run_fixture(o.demo, o.data_dir);
  if (o.report == "json") {
    json j{{"command", "demo"}, {"name", rep.name}, {"passed", rep.passed()}, {"checks", json::array()}};
    for (const auto& c : rep.checks)
      j["checks"].push_back({{"label", c.label}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& c : rep.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.label << ": " << json(c.value).dump() << " (tol "
                << json(c.tolerance).dump() << ")\n";
    std::cout << (rep.passed() ? "PASS " : "FAIL ") << rep.name << '\n';
  }
  return rep.passed() ? kOk : kFixtureFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolating continued fractions for matrix-valued functions and operators"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build an interpolant from a node file");
  build->add_option("--input", o.input, "Node file (JSON)")->required()->check(CLI::ExistingFile);
  build->add_option("--output", o.output, "Fraction file to write (default: stdout)");
  build->add_option("--backend", o.backend, "Scalar backend for scalar-argument data")
      ->check(CLI::IsMember({"float", "exact"}));
  build->add_option("--quad-order", o.quad_order, "Gauss-Legendre order for vector arguments")
      ->check(CLI::PositiveNumber);
  build->add_option("--fd-step", o.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
  build->add_option("--grid", o.grid, "Grid size for expression knots")->check(CLI::Range(2, 1 << 20));
  build->add_option("--report", o.report)->check(CLI::IsMember({"text", "json"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a fraction file at points");
  eval->add_option("--input", o.input, "Fraction file")->required()->check(CLI::ExistingFile);
  eval->add_option("--at", o.at, "Point as JSON (or a bare expression/rational); repeatable")
      ->allow_extra_args(false);
  eval->add_option("--points", o.points, "JSON array of points")->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Recompute interpolation residuals of a fraction file");
  verify->add_option("--input", o.input, "Fraction file")->required()->check(CLI::ExistingFile);
  verify->add_option("--data", o.data, "Node file the fraction was built from (default: the copy embedded by build)")->check(CLI::ExistingFile);
  verify->add_option("--report", o.report)->check(CLI::IsMember({"text", "json"}));

  auto* demo = app.add_subcommand("demo", "Run a built-in fixture");
  demo->add_option("name", o.demo)->required()->check(CLI::IsMember(icf::fixtures::fixture_names()));
  demo->add_option("--data-dir", o.data_dir, "Directory holding the fixture files");
  demo->add_option("--report", o.report)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(o);
    if (*eval) return cmd_eval(o);
    if (*verify) return cmd_verify(o);
    if (*demo) return cmd_demo(o);
  } catch (const icf::LevelSingular& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::TailSingular& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::BreakdownError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::QuadratureFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::NonFiniteValue& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::SingularMatrix& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  } catch (const icf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kUsage;
}
