#include <doctest.h>

#include <array>
#include <optional>

#include "icf/fixtures.hpp"
#include "icf/scalar_builder.hpp"
#include "test_support.hpp"

using namespace icf;
using icf::testing::kI;

namespace {

GaussianRational q(long p, long d = 1) { return GaussianRational(mpq_class(p, d)); }

NodeData<GaussianRational> example1_data() {
  return {{q(-1), q(0), q(1)},
          {icf::testing::example1_f0(), icf::testing::example1_f1(), icf::testing::example1_f2()}};
}

// (a + b x) / (1 + c x) through three points, by Cramer's rule on
//   a + b x_i - c x_i f_i = f_i.
std::array<mpq_class, 3> brute_force_11(const std::array<std::pair<mpq_class, mpq_class>, 3>& pts) {
  mpq_class m[3][3], rhs[3];
  for (int i = 0; i < 3; ++i) {
    const auto& [x, f] = pts[static_cast<std::size_t>(i)];
    m[i][0] = 1;
    m[i][1] = x;
    m[i][2] = -x * f;
    rhs[i] = f;
  }
  auto det = [](const mpq_class a[3][3]) {
    return mpq_class(a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]));
  };
  const mpq_class d = det(m);
  std::array<mpq_class, 3> out;
  for (int c = 0; c < 3; ++c) {
    mpq_class mc[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mc[i][j] = j == c ? rhs[i] : m[i][j];
    out[static_cast<std::size_t>(c)] = det(mc) / d;
  }
  return out;
}

NodeData<Complex> random_node_data(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  NodeData<Complex> d;
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (std::size_t i = 0; i <= n; ++i) {
    d.nodes.emplace_back(static_cast<double>(i) + jitter(rng), jitter(rng));
    d.values.push_back(icf::testing::random_cmatrix(rng, m));
  }
  return d;
}

}  // namespace

TEST_CASE("Example 1 is reproduced exactly") {
  const auto f = build_scalar(example1_data());
  CHECK(f.order() == 2);
  CHECK(f.orientation() == Orientation::tail_left);
  for (const auto& r : verify_nodal(f, example1_data().values)) CHECK(r.value == 0.0);
  // Hand-derived storey coefficients.
  CHECK(std::get<ScalarMap<GaussianRational>>(f.storeys()[0].map).coeff ==
        QMatrix{{-1, 0}, {1, GaussianRational(0, 2)}});
  CHECK(std::get<ScalarMap<GaussianRational>>(f.storeys()[1].map).coeff ==
        QMatrix{{q(-1, 3), q(-2, 3)}, {q(2, 3), q(7, 3)}});

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const Complex z(re(rng), im(rng));
    const QMatrix v = evaluate(f, ArgPoint<GaussianRational>(GaussianRational::from_double(z.real(), z.imag())));
    CHECK(icf::testing::rel_diff(icf::testing::to_float(v), fixtures::example1_closed_form(z)) < 1e-12);
  }
}

TEST_CASE("Example 1 on the float backend agrees with the exact build") {
  NodeData<Complex> d;
  for (const auto& u : example1_data().nodes) d.nodes.push_back(u.to_complex());
  for (const auto& v : example1_data().values) d.values.push_back(icf::testing::to_float(v));
  const auto f = build_scalar(d);
  for (const auto& r : verify_nodal(f, d.values)) CHECK(r.value < 1e-14);
  const Complex z(0.3, -0.7);
  CHECK(icf::testing::rel_diff(evaluate(f, ArgPoint<Complex>(z)), fixtures::example1_closed_form(z)) < 1e-14);
}

TEST_CASE("a single node gives the constant fraction") {
  const QMatrix v{{1, kI}, {2, 3}};
  const auto f = build_scalar(NodeData<GaussianRational>{{q(4)}, {v}});
  CHECK(f.order() == 0);
  CHECK(evaluate(f, ArgPoint<GaussianRational>(q(-9))) == v);
}

TEST_CASE("classic Thiele oracle examples") {
  SUBCASE("constant data") {
    const std::vector<std::pair<Complex, Complex>> pts{{0.0, 3.0}, {1.0, 3.0}};
    CHECK(classic_thiele_oracle<Complex>(pts, Complex(7.5, 2.0)) == Complex(3.0));
    const std::vector<std::pair<Complex, Complex>> one{{2.0, 3.0}};
    CHECK(classic_thiele_oracle<Complex>(one, Complex(-1.0)) == Complex(3.0));
  }
  SUBCASE("two points give a line") {
    const std::vector<std::pair<GaussianRational, GaussianRational>> pts{{q(1), q(2)}, {q(3), q(8)}};
    CHECK(classic_thiele_oracle<GaussianRational>(pts, q(1)) == q(2));
    CHECK(classic_thiele_oracle<GaussianRational>(pts, q(3)) == q(8));
    CHECK(classic_thiele_oracle<GaussianRational>(pts, q(2)) == q(5));
  }
  SUBCASE("[1/1] through (0,1), (1,2), (2,5)") {
    const auto abc = brute_force_11({{{0, 1}, {1, 2}, {2, 5}}});
    CHECK(abc[0] == 1);
    CHECK(abc[1] == mpq_class(1, 3));
    CHECK(abc[2] == mpq_class(-1, 3));
    auto brute = [&](const mpq_class& x) { return mpq_class((abc[0] + abc[1] * x) / (1 + abc[2] * x)); };
    CHECK(brute(mpq_class(1, 2)) == mpq_class(7, 5));
    CHECK(brute(4) == -7);

    const std::vector<std::pair<GaussianRational, GaussianRational>> pts{{q(0), q(1)}, {q(1), q(2)}, {q(2), q(5)}};
    CHECK(classic_thiele_oracle<GaussianRational>(pts, q(1, 2)) == q(7, 5));
    CHECK(classic_thiele_oracle<GaussianRational>(pts, q(4)) == q(-7));
    // 1 - 3/3 = 0: the requested probe sits on the pole of the interpolant.
    CHECK_THROWS_AS(classic_thiele_oracle<GaussianRational>(pts, q(3)), BreakdownError);
  }
  SUBCASE("repeated values break the reciprocal differences") {
    const std::vector<std::pair<GaussianRational, GaussianRational>> pts{{q(0), q(1)}, {q(1), q(1)}, {q(2), q(5)}};
    CHECK_THROWS_AS(classic_thiele_oracle<GaussianRational>(pts, q(3)), BreakdownError);
  }
}

TEST_CASE("1x1 build on (0,1,2) -> (1,2,5) is the classic Thiele interpolant") {
  const NodeData<GaussianRational> d{{q(0), q(1), q(2)}, {QMatrix{{1}}, QMatrix{{2}}, QMatrix{{5}}}};
  const auto f = build_scalar(d);
  const std::vector<std::pair<GaussianRational, GaussianRational>> pts{{q(0), q(1)}, {q(1), q(2)}, {q(2), q(5)}};
  for (const auto& x : {q(1, 2), q(4), q(-7, 3), GaussianRational(mpq_class(1), mpq_class(1))})
    CHECK(evaluate(f, ArgPoint<GaussianRational>(x))(0, 0) == classic_thiele_oracle<GaussianRational>(pts, x));
  CHECK_THROWS_AS(evaluate(f, ArgPoint<GaussianRational>(q(3))), TailSingular);
}

TEST_CASE("level_value examples") {
  const auto d = example1_data();
  const auto f = build_scalar(d);
  std::vector<QMatrix> coeffs;
  for (const auto& st : f.storeys()) coeffs.push_back(std::get<ScalarMap<GaussianRational>>(st.map).coeff);
  const std::span<const QMatrix> none, one(coeffs.data(), 1);
  for (std::size_t j = 0; j < 3; ++j) CHECK(level_value<GaussianRational>(d, none, 1, d.nodes[j]) == d.values[j]);
  CHECK(level_value<GaussianRational>(d, one, 2, d.nodes[1]) == QMatrix::identity(2));
  CHECK_THROWS_AS(level_value<GaussianRational>(d, none, 2, d.nodes[1]), ValidationError);
  CHECK_THROWS_AS(level_value<GaussianRational>(d, none, 0, d.nodes[1]), ValidationError);
  CHECK_THROWS_AS(level_value<GaussianRational>(d, one, 2, q(9)), ValidationError);
  CHECK_THROWS_AS(level_value<GaussianRational>(d, one, 2, d.nodes[0]), LevelSingular);
}

TEST_CASE("invalid node data is rejected") {
  auto d = example1_data();
  d.nodes[2] = q(-1);
  try {
    build_scalar(d);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "duplicate nodes at indices 0 and 2");
  }
  NodeData<Complex> close{{Complex(1.0), Complex(1.0 + 1e-14)}, {CMatrix{{1.0}}, CMatrix{{2.0}}}};
  CHECK_THROWS_AS(build_scalar(close), ValidationError);
  CHECK_THROWS_AS(build_scalar(NodeData<GaussianRational>{}), ValidationError);
  CHECK_THROWS_AS(build_scalar(NodeData<GaussianRational>{{q(0), q(1)}, {QMatrix{{1}}}}), ValidationError);
  CHECK_THROWS_AS(build_scalar(NodeData<GaussianRational>{{q(0), q(1)}, {QMatrix{{1}}, QMatrix::identity(2)}}),
                  ValidationError);
}

TEST_CASE("repeated values surface as LevelSingular") {
  const NodeData<GaussianRational> d{{q(0), q(1), q(2)}, {QMatrix{{1}}, QMatrix{{1}}, QMatrix{{5}}}};
  try {
    build_scalar(d);
    FAIL("expected LevelSingular");
  } catch (const LevelSingular& e) {
    CHECK(e.level() == 2);
    CHECK(e.where() == "node 1");
  }
}

TEST_CASE("property: nodal conditions hold on random data") {
  std::mt19937_64 rng(99);
  int built = 0;
  for (int trial = 0; trial < 300 && built < 100; ++trial) {
    const std::size_t m = 1 + trial % 3, n = static_cast<std::size_t>(trial % 6);
    const auto d = random_node_data(rng, m, n);
    std::optional<ThieleFraction<Complex>> built_f;
    try {
      built_f = build_scalar(d);
    } catch (const LevelSingular&) {
      continue;
    }
    const auto& f = *built_f;
    ++built;
    double scale = 0.0;
    for (const auto& v : d.values) scale = std::max(scale, mat_norm(v));
    for (const auto& r : verify_nodal(f, d.values)) {
      REQUIRE(r.ok());
      CHECK(r.value <= 1e-9 * scale);
    }
  }
  CHECK(built == 100);

  int exact = 0;
  for (int trial = 0; trial < 100 && exact < 20; ++trial) {
    const std::size_t m = 1 + trial % 3, n = static_cast<std::size_t>(trial % 5);
    NodeData<GaussianRational> d;
    for (std::size_t i = 0; i <= n; ++i) {
      d.nodes.push_back(q(static_cast<long>(i)));
      d.values.push_back(icf::testing::random_qmatrix(rng, m, 3));
    }
    try {
      const auto f = build_scalar(d);
      for (const auto& r : verify_nodal(f, d.values)) CHECK(r.value == 0.0);
      ++exact;
    } catch (const LevelSingular&) {
    }
  }
  CHECK(exact == 20);
}

TEST_CASE("property: truncating a build equals building on a prefix") {
  std::mt19937_64 rng(123);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + trial % 3, n = 1 + trial % 5;
    NodeData<GaussianRational> d;
    for (std::size_t i = 0; i <= n; ++i) {
      d.nodes.push_back(GaussianRational(mpq_class(static_cast<long>(i)), mpq_class(static_cast<long>(i % 2), 3)));
      d.values.push_back(icf::testing::random_qmatrix(rng, m, 4));
    }
    try {
      const auto full = build_scalar(d);
      for (std::size_t k = 0; k <= n; ++k) {
        NodeData<GaussianRational> p{{d.nodes.begin(), d.nodes.begin() + static_cast<long>(k + 1)},
                                     {d.values.begin(), d.values.begin() + static_cast<long>(k + 1)}};
        CHECK(truncate(full, k) == build_scalar(p));
      }
      ++checked;
    } catch (const LevelSingular&) {
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("property: 1x1 builds agree with the reciprocal-difference oracle") {
  std::mt19937_64 rng(555);
  int datasets = 0;
  for (int trial = 0; trial < 200 && datasets < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    const auto d = random_node_data(rng, 1, n);
    std::vector<std::pair<Complex, Complex>> pts;
    for (std::size_t i = 0; i <= n; ++i) pts.emplace_back(d.nodes[i], d.values[i](0, 0));
    try {
      const auto f = build_scalar(d);
      ++datasets;
      std::uniform_real_distribution<double> re(-1.0, n + 1.0), im(-1.0, 1.0);
      for (int p = 0; p < 50; ++p) {
        const Complex z(re(rng), im(rng));
        try {
          const Complex a = evaluate(f, ArgPoint<Complex>(z))(0, 0);
          const Complex b = classic_thiele_oracle<Complex>(pts, z);
          if (std::abs(b) > 1e4) continue;  // too close to a pole to compare
          CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
        } catch (const Error&) {
        }
      }
    } catch (const Error&) {
    }
  }
  CHECK(datasets == 30);
}
