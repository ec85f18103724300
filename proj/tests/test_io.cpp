#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "hullscope/io.hpp"
#include "hullscope/plot.hpp"

using namespace hullscope;

namespace {

json ball_scenario_json() {
  return json::parse(R"({
    "schema_version": 1,
    "family": "ball",
    "n": 2,
    "level": 1.0,
    "parameters": {"center": [{"min_power": -1, "coeffs": [[1, 0]]}, [[0, 0]]]}
  })");
}

}  // namespace

TEST_CASE("scenario files") {
  SECTION("ball with a conjugate-monomial center loads and evaluates") {
    const FiberScenario s = scenario_from_json(ball_scenario_json());
    REQUIRE(s.family_id == "ball");
    const Complex z = std::polar(1.0, 0.4);
    CPoint w = CPoint::Zero(2);
    REQUIRE(s.rho(z, w) == Catch::Approx(1.0).margin(1e-14));  // |conj z| = 1
  }

  SECTION("shifted-conjugate from the registry") {
    const FiberScenario s =
        scenario_from_json(json{{"family", "shifted-conjugate"}, {"n", 2}, {"level", 2.0}});
    const Complex z = std::polar(1.0, 1.1);
    REQUIRE(s.rho(z, CPoint::Zero(2)) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(s.conjugate_symmetric);
  }

  SECTION("round trip through serialization") {
    const FiberScenario s = scenario_from_json(ball_scenario_json());
    const json j = scenario_to_json(s);
    const FiberScenario t = scenario_from_json(j);
    SplitMix64 rng(2);
    for (int probe = 0; probe < 25; ++probe) {
      const Complex z = std::polar(1.0, 2.0 * kPi * rng.uniform());
      CPoint w(2);
      for (int k = 0; k < 2; ++k) w[k] = rng.gaussian_complex();
      REQUIRE(s.rho(z, w) == t.rho(z, w));
    }
    REQUIRE(scenario_to_json(t) == j);
  }

  SECTION("schema violations") {
    REQUIRE_THROWS_AS(scenario_from_json(json{{"family", "ball"}, {"n", 2}}), SchemaError);
    REQUIRE_THROWS_AS(scenario_from_json(json{{"family", "nope"}, {"n", 2}, {"level", 1.0}}),
                      UnknownFamilyError);
    REQUIRE_THROWS_AS(scenario_from_json(json{{"family", "ball"}, {"n", 1}, {"level", 1.0}}),
                      DimensionError);
    REQUIRE_THROWS_AS(
        scenario_from_json(json{{"family", "ellipsoid"}, {"n", 2}, {"level", 1.0}}),
        SchemaError);
  }

  SECTION("declared symmetry is verified by sampling") {
    json j = json{{"family", "ball"},
                  {"n", 2},
                  {"level", 1.0},
                  {"conjugate_symmetric", true},
                  {"parameters",
                   json{{"center", json::array({json::array({json::array({0, 1})}),
                                                json::array({json::array({0, 0})})})}}}};
    REQUIRE_THROWS_AS(scenario_from_json(j), SchemaError);  // center (i, 0) breaks the symmetry
    j["conjugate_symmetric"] = false;
    REQUIRE_NOTHROW(scenario_from_json(j));
  }
}

TEST_CASE("analytic map serialization") {
  AnalyticMap f = AnalyticMap::zero(2, 3);
  f.coeffs[0][0] = Complex(1, -2);
  f.coeffs[3][1] = Complex(0.5, 0.25);
  const json j = analytic_map_to_json(f);
  REQUIRE(j.at("degree") == 3);
  const AnalyticMap g = analytic_map_from_json(j);
  REQUIRE(coefficient_distance(f, g) == 0.0);
}

TEST_CASE("model fiber serialization") {
  const ModelFiber f = model_fiber_from_json(json::parse(R"({"kind":"ellipsoid","a":[2,1]})"));
  REQUIRE(f.kind == FiberKind::ellipsoid);
  REQUIRE(f.axes == std::vector<double>{2.0, 1.0});
  const ModelFiber g = model_fiber_from_json(model_fiber_to_json(f));
  REQUIRE(g.axes == f.axes);
  REQUIRE_THROWS_AS(model_fiber_from_json(json{{"kind", "torus"}}), UnknownFamilyError);
}

TEST_CASE("determinism of solve results") {
  const FiberScenario s = scenario_from_json(ball_scenario_json());
  SolveConfig cfg;
  cfg.degree = 8;
  cfg.grid = 64;
  cfg.multistart = 3;
  cfg.seed = 42;
  const json a = solve_result_to_json(solve_gamma(s, cfg));
  const json b = solve_result_to_json(solve_gamma(s, cfg));
  REQUIRE(a.dump() == b.dump());  // byte-identical result payloads
}

TEST_CASE("run records") {
  RunRecord record;
  record.command = "solve";
  record.config = json{{"grid", 64}};
  record.input_hash = content_hash(ball_scenario_json());
  record.result = json{{"gamma_hat", 1.0}};
  record.wall_time_ms = 12.5;
  const json j = record.to_json();
  REQUIRE(j.at("meta").contains("wall_time_ms"));
  REQUIRE(j.at("input_hash") == content_hash(ball_scenario_json()));  // hash is stable
  REQUIRE(j.at("result").dump() == "{\"gamma_hat\":1.0}");
}

TEST_CASE("csv and svg payloads") {
  SliceResult slice;
  slice.z0 = Complex(0, 0);
  slice.level = 1.0;
  slice.spec.res = 2;
  slice.spec.span = 1.0;
  slice.spec.ref = CPoint::Zero(2);
  slice.spec.dir = unit_vector(2, 0);
  for (int iy = 0; iy < 2; ++iy)
    for (int ix = 0; ix < 2; ++ix) {
      SlicePoint p;
      p.zeta = Complex(ix, iy);
      p.value = 0.5 * ix;
      p.verdict = ix == 0 ? Verdict::inside : Verdict::outside;
      slice.points.push_back(p);
    }
  const std::string csv = slice_to_csv(slice);
  REQUIRE(csv.rfind("zeta_re,zeta_im,value,verdict\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 5);
  REQUIRE(csv.find("inside") != std::string::npos);

  const std::string svg = svg_slice_plot(slice);
  REQUIRE(svg.find("<svg") != std::string::npos);
  REQUIRE(svg.find("<desc>") != std::string::npos);

  const std::string line = svg_line_plot({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}, "t", "x", "y");
  REQUIRE(line.find("<polyline") != std::string::npos);
  REQUIRE(line.find("0.5") != std::string::npos);  // values embedded as text
}

TEST_CASE("file io") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hullscope_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "scenario.json").string();
  write_json_file(path, ball_scenario_json());
  const FiberScenario s = load_scenario(path);
  REQUIRE(s.n == 2);
  REQUIRE_THROWS_AS(load_scenario((dir / "missing.json").string()), IoError);
  write_text_file((dir / "garbage.json").string(), "{not json");
  REQUIRE_THROWS_AS(load_scenario((dir / "garbage.json").string()), SchemaError);
  fs::remove_all(dir);
}
