#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icf/fixtures.hpp"
#include "icf/functional_builder.hpp"
#include "icf/scalar_builder.hpp"
#include "test_support.hpp"

using namespace icf;

namespace {

constexpr double kPi = std::numbers::pi;

// Written out by hand, independent of the expression parser.
MatrixFunction example2_function(bool with_grad) {
  MatrixFunction f{2, 2, [](std::span<const double> p) {
                     const double x = p[0], y = p[1];
                     return CMatrix{{std::sin(x + y), std::cos(x + y)}, {x * x, 1.0 / (1.0 + y)}};
                   },
                   {}};
  if (with_grad)
    f.grad = [](std::span<const double> p, std::size_t a) {
      const double x = p[0], y = p[1];
      const double c = std::cos(x + y), s = -std::sin(x + y);
      return a == 0 ? CMatrix{{c, s}, {2.0 * x, 0.0}} : CMatrix{{c, s}, {0.0, -1.0 / ((1.0 + y) * (1.0 + y))}};
    };
  return f;
}

const std::vector<Point> kExample2Nodes{{0.0, 0.0}, {kPi / 2, kPi / 2}, {kPi, 0.0}};

MatrixFunction scalar_fn(std::function<double(double)> g) {
  return {1, 1, [g](std::span<const double> p) { return CMatrix{{g(p[0])}}; }, {}};
}

// Random polynomial matrix A + B x + C x^2 with B near 2I, so that F(u) - F(u0)
// stays well conditioned along the segments and the level functions stay smooth.
MatrixFunction random_poly(std::mt19937_64& rng, std::size_t m) {
  const CMatrix a = icf::testing::random_cmatrix(rng, m);
  const CMatrix b = icf::testing::random_cmatrix(rng, m) * Complex(0.3) + CMatrix::identity(m) * Complex(2.0);
  const CMatrix c = icf::testing::random_cmatrix(rng, m) * Complex(0.3);
  return {1, m, [a, b, c](std::span<const double> p) {
            const Complex x(p[0], 0.0);
            return CMatrix(a + b * x + c * (x * x));
          },
          {}};
}

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  CHECK_THROWS_AS(gauss_legendre(1), ValidationError);
  for (int order : {2, 3, 8, 32, 64}) {
    const auto rule = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    // exact for polynomials of degree 2n - 1
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * std::pow(rule.nodes[k], deg);
      CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("partial_derivative examples") {
  const QuadConfig q;
  const auto f = example2_function(false);
  const Point origin{0.0, 0.0};
  CHECK(std::abs(partial_derivative(f, origin, 0, q)(0, 0) - 1.0) < 1e-9);
  // 1/(1+y) does not depend on x
  CHECK(std::abs(partial_derivative(f, Point{0.4, 0.3}, 0, q)(1, 1)) < 1e-9);
  CHECK(std::abs(partial_derivative(f, Point{3.0, 0.0}, 0, q)(1, 0) - 6.0) < 1e-8);
  const auto sq = scalar_fn([](double x) { return x * x; });
  CHECK(std::abs(partial_derivative(sq, Point{3.0}, 0, q)(0, 0) - 6.0) < 1e-8);
  CHECK_THROWS_AS(partial_derivative(sq, Point{3.0}, 1, q), ValidationError);
}

TEST_CASE("FD and analytic gradients agree on random probes") {
  const auto fd = example2_function(false), an = example2_function(true);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (double h : {1e-3, 1e-4}) {
    QuadConfig q;
    q.fd_step = h;
    for (int k = 0; k < 50; ++k) {
      const Point p{u(rng), u(rng)};
      for (std::size_t a = 0; a < 2; ++a) {
        const double err = mat_norm(CMatrix(partial_derivative(fd, p, a, q) - partial_derivative(an, p, a, q)));
        CHECK(err <= 2.0 * h * h);  // third derivatives are bounded by 2 on [0, pi]^2
      }
    }
  }
}

TEST_CASE("directional_integral examples") {
  const QuadConfig q;
  const MatrixFunction constant{2, 2, [](std::span<const double>) { return CMatrix{{1.0, 2.0}, {3.0, 4.0}}; }, {}};
  for (const auto& c : directional_integral(constant, Point{0.0, 0.0}, Point{1.0, 2.0}, q))
    CHECK(mat_norm(c) < 1e-12);

  const auto id = scalar_fn([](double x) { return x; });
  CHECK(std::abs(directional_integral(id, Point{-2.0}, Point{5.0}, q)[0](0, 0) - 1.0) < 1e-9);

  const MatrixFunction s{2, 1, [](std::span<const double> p) { return CMatrix{{std::sin(p[0] + p[1])}}; }, {}};
  const auto c = directional_integral(s, Point{0.0, 0.0}, Point{kPi / 2, kPi / 2}, q);
  CHECK(std::abs(c[0](0, 0)) < 1e-9);
  CHECK(std::abs(c[1](0, 0)) < 1e-9);

  // undefined past x = 0.4
  const auto bad = scalar_fn([](double x) { return std::log(0.4 - x); });
  CHECK_THROWS_AS(directional_integral(bad, Point{0.0}, Point{1.0}, q), QuadratureFailure);
}

TEST_CASE("Example 2: storey-1 coefficients and nodal conditions") {
  QuadConfig q;
  q.fd_step = 1e-6;
  const auto frac = build_functional(example2_function(false), kExample2Nodes, q);
  REQUIRE(frac.order() == 2);
  CHECK(frac.arg_kind() == ArgKind::vector);
  const auto& c1 = std::get<DirectionalMap<Complex>>(frac.storeys()[0].map).coeffs;
  // closed forms of the storey-1 integrals
  const CMatrix cx{{0.0, -2.0 / kPi}, {kPi / 2.0, 0.0}};
  const CMatrix cy{{0.0, -2.0 / kPi}, {0.0, -2.0 / (2.0 + kPi)}};
  CHECK(mat_norm(CMatrix(c1[0] - cx)) <= 1e-8);
  CHECK(mat_norm(CMatrix(c1[1] - cy)) <= 1e-8);
  CHECK(mat_norm(CMatrix(cx - fixtures::example2_l1_x())) == 0.0);
  CHECK(mat_norm(CMatrix(cy - fixtures::example2_l1_y())) == 0.0);

  const auto f = example2_function(false);
  for (const auto& u : kExample2Nodes) CHECK(mat_norm(CMatrix(evaluate(frac, to_arg(u)) - f.eval(u))) <= 1e-6);
}

TEST_CASE("Example 2 with analytic storey-1 gradient matches the FD build") {
  const auto a = build_functional(example2_function(true), kExample2Nodes);
  const auto b = build_functional(example2_function(false), kExample2Nodes);
  const auto& ca = std::get<DirectionalMap<Complex>>(a.storeys()[0].map).coeffs;
  const auto& cb = std::get<DirectionalMap<Complex>>(b.storeys()[0].map).coeffs;
  for (std::size_t k = 0; k < 2; ++k) CHECK(mat_norm(CMatrix(ca[k] - cb[k])) <= 1e-8);
}

TEST_CASE("Example 2: doubling the quadrature order barely moves the coefficients") {
  QuadConfig q32, q64;
  q64.order = 64;
  // An exact grad at level 1 and a loose FD step above it keep FD noise out of the comparison.
  q32.fd_step = q64.fd_step = 1e-4;
  const auto a = build_functional(example2_function(true), kExample2Nodes, q32);
  const auto b = build_functional(example2_function(true), kExample2Nodes, q64);
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& ca = std::get<DirectionalMap<Complex>>(a.storeys()[r].map).coeffs;
    const auto& cb = std::get<DirectionalMap<Complex>>(b.storeys()[r].map).coeffs;
    for (std::size_t k = 0; k < 2; ++k) CHECK(mat_norm(CMatrix(ca[k] - cb[k])) <= 1e-10);
  }
}

TEST_CASE("Example 2 agrees with the published closed form") {
  QuadConfig q;
  q.fd_step = 1e-6;
  const auto frac = build_functional(example2_function(false), kExample2Nodes, q);
  double worst = 0.0;
  for (const Point p : {Point{0.3, 2.9}, Point{1.0, 1.0}, Point{2.5, 0.4}, Point{3.0, 3.0}}) {
    if (fixtures::example2_pole_distance(p[0], p[1]) < 1e-2) continue;
    worst = std::max(worst, icf::testing::rel_diff(evaluate(frac, to_arg(p)), fixtures::example2_closed_form(p[0], p[1])));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("degenerate inputs") {
  const MatrixFunction constant{2, 2, [](std::span<const double>) { return CMatrix{{1.0, 2.0}, {3.0, 4.0}}; }, {}};
  try {
    build_functional(constant, kExample2Nodes);
    FAIL("expected LevelSingular");
  } catch (const LevelSingular& e) {
    CHECK(e.level() == 2);
    CHECK(e.where() == "segment 1-2");
  }
  CHECK_THROWS_AS(build_functional(constant, {{0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(build_functional(constant, {{0.0, 0.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(build_functional(constant, {}), ValidationError);
  const auto single = build_functional(constant, {{0.5, 0.5}});
  CHECK(single.order() == 0);
  CHECK(evaluate(single, to_arg(Point{9.0, 9.0})) == CMatrix{{1.0, 2.0}, {3.0, 4.0}});
}

TEST_CASE("property: d = 1 builds agree storey-for-storey with build_scalar") {
  std::mt19937_64 rng(41);
  QuadConfig q;
  q.fd_step = 1e-5;
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 2;
    const auto f = random_poly(rng, m);
    std::vector<Point> nodes{{0.0}, {0.7}, {1.5}};
    NodeData<Complex> data;
    for (const auto& p : nodes) {
      data.nodes.emplace_back(p[0], 0.0);
      data.values.push_back(f.eval(p));
    }
    try {
      const auto a = build_scalar(data);
      const auto b = build_functional(f, nodes, q);
      for (std::size_t r = 0; r < a.order(); ++r) {
        const auto& ca = std::get<ScalarMap<Complex>>(a.storeys()[r].map).coeff;
        const auto& cb = std::get<DirectionalMap<Complex>>(b.storeys()[r].map).coeffs[0];
        CHECK(icf::testing::rel_diff(cb, ca) <= 1e-10);
      }
      ++compared;
    } catch (const LevelSingular&) {
    }
  }
  CHECK(compared == 20);
}

TEST_CASE("level_function_of starts from F itself") {
  const auto f = example2_function(false);
  const auto l1 = level_function_of(f, kExample2Nodes, {}, 1);
  const Point p{0.2, 0.9};
  CHECK(l1.eval(p) == f.eval(p));
  CHECK_THROWS_AS(level_function_of(f, kExample2Nodes, {}, 2), ValidationError);
  CHECK_THROWS_AS(level_function_of(f, kExample2Nodes, {}, 0), ValidationError);
}
