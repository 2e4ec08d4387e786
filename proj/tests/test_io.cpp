#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icf/io.hpp"
#include "test_support.hpp"

using namespace icf;
using io::json;

namespace {

const std::string kData = ICF_DATA_DIR;

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("scalar encodings") {
  CHECK(io::scalar_to_json(Complex(1.5, -2.0)) == json::parse("[1.5, -2.0]"));
  CHECK(io::scalar_from_json<Complex>(json::parse("[1.5, -2.0]")) == Complex(1.5, -2.0));
  CHECK(io::scalar_from_json<Complex>(json(3)) == Complex(3.0));
  CHECK(io::scalar_from_json<Complex>(json("pi/2")) == Complex(std::numbers::pi / 2));

  const GaussianRational q(mpq_class(-1, 3), mpq_class(7, 2));
  CHECK(io::scalar_to_json(q) == json::parse(R"(["-1/3", "7/2"])"));
  CHECK(io::scalar_from_json<GaussianRational>(io::scalar_to_json(q)) == q);
  CHECK(io::scalar_from_json<GaussianRational>(json(4)) == GaussianRational(4));
  CHECK(io::scalar_from_json<GaussianRational>(json("0.125")) == GaussianRational(mpq_class(1, 8)));
  // a binary float is not an exact input
  CHECK_THROWS_AS(io::scalar_from_json<GaussianRational>(json(0.1)), ValidationError);
  CHECK_THROWS(io::scalar_from_json<Complex>(json::parse("[1, 2, 3]")));
  CHECK_THROWS(io::scalar_from_json<Complex>(json::parse("{}")));
}

TEST_CASE("matrix encodings") {
  const CMatrix a{{Complex(1, 2), 3.0}, {0.0, Complex(0, -1)}};
  CHECK(io::matrix_from_json<Complex>(reparse(io::matrix_to_json(a))) == a);
  CHECK_THROWS_AS(io::matrix_from_json<Complex>(json::parse("[[1, 2], [3]]")), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json<Complex>(json::parse("[]")), ValidationError);
}

TEST_CASE("grid encodings") {
  const auto g = GridFunction::from_function(8, [](double t) { return t * t; });
  CHECK(io::grid_from_json(reparse(io::grid_to_json(g))) == g);
  CHECK(io::grid_from_json(json("t^2"), 8) == g);
  CHECK_THROWS_AS(io::grid_from_json(json("t^2")), ValidationError);
  CHECK_THROWS_AS(io::grid_from_json(json::parse(R"({"N": 3, "samples": [1, 2]})")), ValidationError);
  CHECK_THROWS(io::grid_from_json(json("x+1"), 8));
}

TEST_CASE("exact fraction round trip is bit-exact") {
  const auto problem = io::problem_from_json(io::read_json_file(kData + "/example1.json"));
  const auto& data = std::get<NodeData<GaussianRational>>(std::get<io::ScalarProblem>(problem).data);
  const auto f = build_scalar(data);
  const json j = io::fraction_to_json(f);
  CHECK(j["backend"] == "exact");
  CHECK(j["orientation"] == "tail_left");
  const auto back = std::get<ThieleFraction<GaussianRational>>(io::fraction_from_json(reparse(j)));
  CHECK(back == f);
  CHECK(io::fraction_to_json(back).dump() == j.dump());
}

TEST_CASE("float fraction round trips") {
  std::mt19937_64 rng(1);
  NodeData<Complex> d;
  for (int i = 0; i < 4; ++i) {
    d.nodes.push_back(icf::testing::random_complex(rng));
    d.values.push_back(icf::testing::random_cmatrix(rng, 3));
  }
  const auto f = build_scalar(d);
  const auto back = std::get<ThieleFraction<Complex>>(io::fraction_from_json(reparse(io::fraction_to_json(f))));
  CHECK(back == f);  // shortest round-trip printing keeps every bit

  SUBCASE("vector") {
    const auto p = std::get<io::VectorProblem>(io::problem_from_json(io::read_json_file(kData + "/example2.json")));
    const auto fv = build_functional(expr::to_matrix_function(p.function), p.nodes);
    const json j = io::fraction_to_json(fv);
    CHECK(j["dim"] == 2);
    CHECK(j["storeys"][0]["payload_kind"] == "directional");
    CHECK(std::get<ThieleFraction<Complex>>(io::fraction_from_json(reparse(j))) == fv);
  }
  SUBCASE("grid") {
    const auto fg = build_abstract(demo_operator(), demo_knots(8), 1e-3);
    const json j = io::fraction_to_json(fg);
    CHECK(j["N"] == 8);
    CHECK(j["orientation"] == "tail_right");
    CHECK(std::get<ThieleFraction<Complex>>(io::fraction_from_json(reparse(j))) == fg);
  }
}

TEST_CASE("fraction files missing the orientation default to tail_right") {
  json j = json::parse(R"({"m": 1, "arg_kind": "scalar", "backend": "float", "base": [[[1, 0]]],
                           "nodes": [0, 1], "storeys": [{"level": 1, "anchor": 0, "payload_kind": "scalar",
                           "coeffs": [[[[2, 0]]]]}]})");
  const auto f = std::get<ThieleFraction<Complex>>(io::fraction_from_json(j));
  CHECK(f.orientation() == Orientation::tail_right);
  CHECK(evaluate(f, ArgPoint<Complex>(Complex(3.0))) == CMatrix{{7.0}});
  j["orientation"] = "sideways";
  CHECK_THROWS(io::fraction_from_json(j));
  j["orientation"] = "tail_left";
  j["storeys"][0]["level"] = 2;
  CHECK_THROWS_AS(io::fraction_from_json(j), ValidationError);
}

TEST_CASE("node files") {
  SUBCASE("scalar, with backend override") {
    const json j = io::read_json_file(kData + "/example1.json");
    const auto p = io::problem_from_json(j, io::Backend::floating);
    const auto& d = std::get<NodeData<Complex>>(std::get<io::ScalarProblem>(p).data);
    CHECK(d.nodes.size() == 3);
    CHECK(d.values[2] == icf::testing::to_float(icf::testing::example1_f2()));
  }
  SUBCASE("vector") {
    const auto p = std::get<io::VectorProblem>(io::problem_from_json(io::read_json_file(kData + "/example2.json")));
    REQUIRE(p.nodes.size() == 3);
    CHECK(p.nodes[1][0] == std::numbers::pi / 2);
    CHECK(p.function.vars == std::vector<std::string>{"x", "y"});
  }
  SUBCASE("grid, with N override") {
    const auto p = std::get<io::GridProblem>(io::problem_from_json(io::read_json_file(kData + "/continual.json"),
                                                                   std::nullopt, 16));
    CHECK(p.op == "demo");
    REQUIRE(p.knots.size() == 3);
    CHECK(p.knots[1] == GridFunction::from_function(16, [](double t) { return t; }));
    CHECK_THROWS_AS(io::builtin_operator("nope"), ValidationError);
  }
  SUBCASE("malformed") {
    CHECK_THROWS(io::problem_from_json(json::parse(R"({"arg_kind": "scalar"})")));
    CHECK_THROWS(io::problem_from_json(json::parse(R"({"m": 1, "arg_kind": "tensor", "nodes": []})")));
    CHECK_THROWS(io::problem_from_json(
        json::parse(R"({"m": 1, "arg_kind": "scalar", "nodes": [0, 1], "values": [[[1]]]})")));
    CHECK_THROWS(io::read_json_file(kData + "/does-not-exist.json"));
  }
}

TEST_CASE("point encodings") {
  CHECK(io::point_to_json(ArgPoint<Complex>(std::vector<Complex>{1.0, 2.0})) == json::parse("[1.0, 2.0]"));
  CHECK_THROWS_AS(io::point_to_json(ArgPoint<Complex>(std::vector<Complex>{Complex(0, 1)})), ValidationError);
  const auto p = io::point_from_json<Complex>(json::parse(R"(["pi", 0])"), ArgKind::vector, 2);
  CHECK(std::get<1>(p)[0] == Complex(std::numbers::pi));
  CHECK_THROWS_AS(io::point_from_json<Complex>(json::parse("[1]"), ArgKind::vector, 2), ValidationError);
}
