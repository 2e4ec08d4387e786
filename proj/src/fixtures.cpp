#include "icf/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "icf/continual_builder.hpp"
#include "icf/functional_builder.hpp"
#include "icf/io.hpp"
#include "icf/scalar_builder.hpp"

namespace icf::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

Check check_le(std::string label, double value, double tol) {
  return {std::move(label), value, tol, value <= tol};
}

double rel_err(const CMatrix& a, const CMatrix& b) { return mat_norm(CMatrix(a - b)) / mat_norm(b); }

// Halton point in [0,1) for the given base.
double halton(std::size_t i, std::size_t base) {
  double f = 1.0, r = 0.0;
  for (std::size_t k = i; k > 0; k /= base) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(k % base);
  }
  return r;
}

FixtureReport run_example1(const std::string& data_dir) {
  FixtureReport rep{"example1", {}};
  const auto problem = io::problem_from_json(io::read_json_file(data_dir + "/example1.json"));
  const auto& data = std::get<NodeData<GaussianRational>>(std::get<io::ScalarProblem>(problem).data);
  const auto frac = build_scalar(data);

  const auto res = verify_nodal(frac, data.values);
  double worst = 0.0;
  for (const auto& r : res) worst = std::max(worst, r.value);
  rep.checks.push_back({"exact nodal residuals at z = -1, 0, 1", worst, 0.0, worst == 0.0});

  std::mt19937_64 rng(20151121);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(-2.0, 2.0);
  double max_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Complex z(re(rng), im(rng));
    const GaussianRational zq = GaussianRational::from_double(z.real(), z.imag());
    const QMatrix exact = evaluate(frac, ArgPoint<GaussianRational>(zq));
    CMatrix value(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) value(i, j) = exact(i, j).to_complex();
    max_err = std::max(max_err, rel_err(value, example1_closed_form(z)));
  }
  rep.checks.push_back(check_le("closed form at 20 random complex probes (rel err)", max_err, 1e-12));
  return rep;
}

FixtureReport run_example2(const std::string& data_dir) {
  FixtureReport rep{"example2", {}};
  const auto problem = io::problem_from_json(io::read_json_file(data_dir + "/example2.json"));
  const auto& vp = std::get<io::VectorProblem>(problem);
  const MatrixFunction f = expr::to_matrix_function(vp.function);
  QuadConfig q;
  q.order = 32;
  q.fd_step = 1e-6;
  const auto frac = build_functional(f, vp.nodes, q);

  double nodal = 0.0;
  for (const auto& u : vp.nodes)
    nodal = std::max(nodal, mat_norm(CMatrix(evaluate(frac, to_arg(u)) - f.eval(u))));
  rep.checks.push_back(check_le("nodal residual at the three knots", nodal, 1e-6));

  const auto& c1 = std::get<DirectionalMap<Complex>>(frac.storeys().front().map).coeffs;
  const double l1 =
      std::max(mat_norm(CMatrix(c1[0] - example2_l1_x())), mat_norm(CMatrix(c1[1] - example2_l1_y())));
  rep.checks.push_back(check_le("storey-1 coefficients vs published l_1", l1, 1e-8));

  double max_err = 0.0;
  std::size_t accepted = 0;
  for (std::size_t i = 1; accepted < 100; ++i) {
    const double x = kPi * halton(i, 2), y = kPi * halton(i, 3);
    if (example2_pole_distance(x, y) < 1e-2) continue;
    ++accepted;
    max_err = std::max(max_err, rel_err(evaluate(frac, to_arg(Point{x, y})), example2_closed_form(x, y)));
  }
  rep.checks.push_back(check_le("published T_2 at 100 points of [0,pi]^2 (rel err)", max_err, 1e-3));
  return rep;
}

FixtureReport run_continual() {
  FixtureReport rep{"continual", {}};
  const OperatorFunction f = demo_operator();
  const std::vector<double> xis{0.25, 0.5, 0.75};
  auto residuals = [&](std::size_t n, double fd) {
    const auto frac = build_abstract(f, demo_knots(n), fd);
    std::vector<double> out;
    for (const auto& r : check_continual(frac, f, xis)) out.push_back(r.value);
    return out;
  };
  const auto r100 = residuals(100, 1e-4);
  const auto r200 = residuals(200, 5e-5);
  for (std::size_t k = 0; k < xis.size(); ++k)
    rep.checks.push_back(check_le("refinement factor N=100->200 at xi=" + std::to_string(xis[k]).substr(0, 4),
                                  r200[k] / r100[k], 0.6));

  const auto knots = demo_knots(400);
  double scale = 0.0;
  for (const auto& u : knots) scale = std::max(scale, mat_norm(f.eval(u)));
  const auto r400 = residuals(400, 2.5e-5);
  const double worst = *std::ranges::max_element(r400);
  rep.checks.push_back(check_le("continual residual at N=400 / operator scale", worst / scale, 1e-3));
  return rep;
}

// |f| / |f'| with a central difference: distance to the nearest simple pole.
template <class Fn>
double pole_distance(Fn&& fn, Complex z) {
  const double h = 1e-5;
  const Complex d = (fn(z + h) - fn(z - h)) / (2.0 * h);
  return std::abs(fn(z)) / std::abs(d);
}

FixtureReport run_scalar_reduction() {
  FixtureReport rep{"scalar-reduction", {}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3), modulus(0.5, 2.0), angle(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> order(1, 6);
  double max_err = 0.0;
  int datasets = 0;
  while (datasets < 30) {
    const int n = order(rng);
    NodeData<Complex> data;
    std::vector<std::pair<Complex, Complex>> pts;
    for (int i = 0; i <= n; ++i) {
      const Complex x(i + jitter(rng), 0.0);
      const Complex y = std::polar(modulus(rng), angle(rng));
      data.nodes.push_back(x);
      data.values.push_back(CMatrix{{y}});
      pts.emplace_back(x, y);
    }
    ThieleFraction<Complex> frac = [&] {
      try {
        return build_scalar(data);
      } catch (const LevelSingular&) {
        return ThieleFraction<Complex>(CMatrix(1), {Complex{}}, {}, Orientation::tail_left);
      }
    }();
    if (frac.order() != static_cast<std::size_t>(n)) continue;
    auto via_matrix = [&](Complex z) { return evaluate(frac, ArgPoint<Complex>(z))(0, 0); };
    auto via_oracle = [&](Complex z) { return classic_thiele_oracle<Complex>(pts, z); };
    try {
      via_oracle(Complex(0.5, 0.5));
    } catch (const BreakdownError&) {
      continue;
    }
    ++datasets;
    std::uniform_real_distribution<double> pre(-1.0, n + 1.0), pim(-1.0, 1.0);
    for (int probes = 0; probes < 50;) {
      const Complex z(pre(rng), pim(rng));
      try {
        if (pole_distance(via_matrix, z) < 1e-3 || pole_distance(via_oracle, z) < 1e-3) continue;
        const Complex a = via_matrix(z), b = via_oracle(z);
        max_err = std::max(max_err, std::abs(a - b) / std::abs(b));
        ++probes;
      } catch (const Error&) {
        continue;
      }
    }
  }
  rep.checks.push_back(check_le("30 random 1x1 datasets x 50 probes vs reciprocal differences (rel err)", max_err, 1e-9));
  return rep;
}

}  // namespace

CMatrix example1_closed_form(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex den = z * z - 6.0 * z - 3.0;
  CMatrix m{{-3.0 - 4.0 * z + 7.0 * z * z, -4.0 * i * (z + 1.0) * z},
            {-(z + 1.0) * (z + 3.0), i * (-3.0 + 2.0 * z + z * z)}};
  m *= 1.0 / den;
  return m;
}

double example2_denominator(double x, double y) {
  return 0.10094 * x * x - 0.45299 * x + 0.11535 * x * y - 0.07314 - 0.49946 * y + 0.01441 * y * y;
}

double example2_pole_distance(double x, double y) {
  const double gx = 2 * 0.10094 * x - 0.45299 + 0.11535 * y;
  const double gy = 0.11535 * x - 0.49946 + 2 * 0.01441 * y;
  return std::abs(example2_denominator(x, y)) / std::hypot(gx, gy);
}

CMatrix example2_closed_form(double x, double y) {
  const double t11 = 1.5708 * (0.20264 * x - 0.63662 + 0.20264 * y) * x;
  const double t12 = -0.10097 * x * x + 0.49963 * x - 0.16465 * x * y - 0.07314 + 0.7008 * y - 0.06368 * y * y;
  const double t21 = -1.5708 * (0.27184 * x + 0.146 + 0.27184 * y) * x;
  const double t22 = 0.05468 * x * x - 0.30766 * x + 0.12857 * x * y - 0.07314 - 0.29734 * y + 0.07389 * y * y;
  const double d = example2_denominator(x, y);
  return CMatrix{{t11 / d, t12 / d}, {t21 / d, t22 / d}};
}

CMatrix example2_l1_x() { return CMatrix{{0.0, -2.0 / kPi}, {kPi / 2.0, 0.0}}; }
CMatrix example2_l1_y() { return CMatrix{{0.0, -2.0 / kPi}, {0.0, -2.0 / (2.0 + kPi)}}; }

bool FixtureReport::passed() const {
  return !checks.empty() && std::ranges::all_of(checks, [](const Check& c) { return c.passed; });
}

std::vector<std::string> fixture_names() { return {"example1", "example2", "continual", "scalar-reduction"}; }

FixtureReport run_fixture(const std::string& name, const std::string& data_dir) {
  if (name == "example1") return run_example1(data_dir);
  if (name == "example2") return run_example2(data_dir);
  if (name == "continual") return run_continual();
  if (name == "scalar-reduction") return run_scalar_reduction();
  throw ValidationError("unknown demo '" + name + "'");
}

}  // namespace icf::fixtures
