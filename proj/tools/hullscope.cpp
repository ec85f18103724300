// hullscope: fibered polynomial hulls over the circle, the H-infinity
// min-max optimizer, and model-fiber extremal-disc primitives, as a batch CLI.
// JSON in, JSON/CSV/SVG out; one seed drives all randomness.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hullscope/fiber_geometry.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/io.hpp"
#include "hullscope/lempert.hpp"
#include "hullscope/plot.hpp"
#include "hullscope/solver.hpp"

namespace hs = hullscope;
using hs::Complex;
using hs::CPoint;
using hs::json;

namespace {

struct GlobalOptions {
  int grid = 256;
  int degree = 32;
  int starts = 10;
  std::uint64_t seed = 7;
  double tol = 1e-3;
  std::string out;
  std::string plot;
};

hs::SolveConfig make_config(const GlobalOptions& g) {
  hs::SolveConfig cfg;
  cfg.grid = g.grid;
  cfg.degree = g.degree;
  cfg.multistart = g.starts;
  cfg.seed = g.seed;
  return cfg;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      if (!text.empty() && text.front() == '[') return hs::complex_from_json(json::parse(text));
      return Complex(std::stod(text), 0.0);
    }
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw hs::ConfigError("cannot parse complex number '" + text + "' (use re or re,im)");
  }
}

CPoint parse_point(const std::string& text) {
  try {
    return hs::cpoint_from_json(json::parse(text));
  } catch (const json::exception&) {
    throw hs::ConfigError("cannot parse point '" + text + "' (use a JSON array)");
  }
}

json config_echo(const hs::SolveConfig& cfg) {
  return json{{"grid", cfg.grid},
              {"degree", cfg.degree},
              {"starts", cfg.multistart},
              {"seed", cfg.seed},
              {"real_coefficients", cfg.real_coefficients}};
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(const GlobalOptions& g, const std::string& command, const json& config,
            const json& inputs, const json& result, double wall_ms) {
  hs::RunRecord record;
  record.command = command;
  record.config = config;
  record.input_hash = hs::content_hash(inputs);
  record.result = result;
  record.wall_time_ms = wall_ms;
  if (!g.out.empty()) hs::write_json_file(g.out, record.to_json());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hullscope: fibered hulls, H-infinity min-max, extremal-disc primitives"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--grid", g.grid, "circle grid size (power of two)")->capture_default_str();
  app.add_option("--degree", g.degree, "series degree budget")->capture_default_str();
  app.add_option("--starts", g.starts, "multistart count")->capture_default_str();
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--tol", g.tol, "verdict tolerance band")->capture_default_str();
  app.add_option("--out", g.out, "write a JSON run record here");
  app.add_option("--plot", g.plot, "write an SVG plot here");

  std::string scenario_path, fiber_text, warm_path, map_path;
  std::string z0_text = "0", w0_text, nu_text, probe_text, section = "w1", levels_text;
  std::string z_text = "1";
  double level_override = std::nan("");
  int res = 64, samples = 64, fiber_samples = 32, tangent_probes = 8;
  double span = 2.0;
  bool check = false, real_subspace = false, stable = false;

  CLI::App* solve = app.add_subcommand("solve", "compute gamma and the flat optimizer")->fallthrough();
  solve->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  solve->add_option("--warm", warm_path, "warm-start map JSON file");
  solve->add_flag("--real-subspace", real_subspace, "restrict to real coefficients");

  CLI::App* member = app.add_subcommand("member", "hull membership of one point")->fallthrough();
  member->add_option("--scenario", scenario_path)->required();
  member->add_option("--z0", z0_text, "base point in the open disk");
  member->add_option("--w0", w0_text, "fiber point as JSON array")->required();
  member->add_option("--level", level_override, "constraint level (default: scenario level)");

  CLI::App* slice = app.add_subcommand("slice", "hull slice over a complex-line section")->fallthrough();
  slice->add_option("--scenario", scenario_path)->required();
  slice->add_option("--z0", z0_text);
  slice->add_option("--section", section, "w1..wn or a JSON {ref, dir, span}");
  slice->add_option("--res", res, "section grid resolution")->capture_default_str();
  slice->add_option("--span", span, "section half-width")->capture_default_str();
  slice->add_option("--level", level_override);
  slice->add_flag("--stable", stable, "grid-doubling stability flags per point");

  CLI::App* classify = app.add_subcommand("classify", "hull trichotomy at a level")->fallthrough();
  classify->add_option("--scenario", scenario_path)->required();
  classify->add_option("--level", level_override);

  CLI::App* scan = app.add_subcommand("scan-levels", "membership across a level schedule")->fallthrough();
  scan->add_option("--scenario", scenario_path)->required();
  scan->add_option("--levels", levels_text, "comma-separated schedule")->required();
  scan->add_option("--z0", z0_text);
  scan->add_option("--w0", w0_text, "probe point (default: origin)");

  CLI::App* dual = app.add_subcommand("dual", "dual-complement transform of fiber samples")->fallthrough();
  dual->add_option("--scenario", scenario_path)->required();
  dual->add_option("--z", z_text, "circle point");
  dual->add_option("--samples", samples, "boundary sample count")->capture_default_str();

  CLI::App* hypo = app.add_subcommand("check-hypoconvex", "sampled strict-hypoconvexity margin")->fallthrough();
  hypo->add_option("--scenario", scenario_path)->required();
  hypo->add_option("--fiber-samples", fiber_samples)->capture_default_str();
  hypo->add_option("--tangent-probes", tangent_probes)->capture_default_str();

  CLI::App* green = app.add_subcommand("green", "Green-type function u1 on a model fiber")->fallthrough();
  green->add_option("--fiber", fiber_text, "inline fiber JSON")->required();
  green->add_option("--probe", probe_text, "evaluation point")->required();
  green->add_option("--nu-samples", samples, "direction samples")->capture_default_str();

  CLI::App* disc = app.add_subcommand("disc", "extremal disc and left inverse on a model fiber")->fallthrough();
  disc->add_option("--fiber", fiber_text)->required();
  disc->add_option("--nu", nu_text, "unit direction")->required();
  disc->add_flag("--check", check, "verify the left-inverse identity on probes");

  CLI::App* recenter = app.add_subcommand("recenter", "shift a scenario by an analytic graph")->fallthrough();
  recenter->add_option("--scenario", scenario_path)->required();
  recenter->add_option("--map", map_path, "analytic map JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Stopwatch watch;
    hs::SolveConfig cfg = make_config(g);

    if (*solve) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      cfg.real_coefficients = real_subspace;
      if (!warm_path.empty())
        cfg.warm_start = hs::analytic_map_from_json(hs::load_json_file(warm_path));
      hs::SolveResult r = hs::solve_gamma(s, cfg);
      json result = hs::solve_result_to_json(r);
      std::cout << "gamma_hat = " << r.gamma_hat << "  flatness = " << r.flatness_residual
                << "  dispersion = " << r.multistart_dispersion
                << (r.any_stalled ? "  [stalled]" : "") << "\n";
      if (!g.plot.empty()) {
        hs::CircleGrid grid(cfg.grid);
        std::vector<double> xs, ys;
        for (const Complex& z : grid.nodes) {
          xs.push_back(std::arg(z));
          ys.push_back(s.rho(z, r.phi_hat.eval(z)));
        }
        hs::write_text_file(g.plot, hs::svg_line_plot(xs, ys, "rho along the optimizer graph",
                                                      "arg z", "rho(z, phi(z))"));
      }
      finish(g, "solve", config_echo(cfg), sj, result, watch.ms());
      return 0;
    }

    if (*member) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      hs::HullQuery q;
      q.z0 = parse_complex(z0_text);
      q.w0 = parse_point(w0_text);
      q.level = std::isnan(level_override) ? s.level : level_override;
      q.config = cfg;
      q.verdict_tol = g.tol;
      hs::HullVerdict v = hs::membership(q, s);
      std::cout << "value = " << v.value << "  verdict = " << hs::to_string(v.verdict)
                << (v.unstable ? "  [unstable]" : "") << "\n";
      finish(g, "member", config_echo(cfg), sj, hs::verdict_to_json(v), watch.ms());
      return v.unstable ? static_cast<int>(hs::ExitCode::unstable) : 0;
    }

    if (*slice) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      const Complex z0 = parse_complex(z0_text);
      hs::SliceSpec spec;
      spec.res = res;
      spec.span = span;
      if (!section.empty() && section.front() == '{') {
        json sec = json::parse(section);
        spec.ref = hs::cpoint_from_json(sec.at("ref"));
        spec.dir = hs::cpoint_from_json(sec.at("dir"));
        spec.span = sec.value("span", span);
      } else {
        if (section.size() < 2 || section[0] != 'w')
          throw hs::ConfigError("section must be w1..wn or a JSON object");
        const int axis = std::stoi(section.substr(1)) - 1;
        if (axis < 0 || axis >= s.n) throw hs::ConfigError("section axis out of range");
        spec.ref = hs::anchor_extension(s, z0);
        spec.dir = hs::unit_vector(s.n, axis);
      }
      const double level = std::isnan(level_override) ? s.level : level_override;
      hs::SolveConfig scfg = cfg;
      hs::SliceResult sl = hs::hull_slice(s, z0, spec, level, scfg, g.tol, stable);
      std::size_t inside = 0;
      for (const auto& p : sl.points) inside += p.verdict == hs::Verdict::inside;
      std::cout << "slice " << spec.res << "x" << spec.res << ": " << inside << " inside, "
                << sl.boundary_zetas.size() << " boundary\n";
      if (!g.plot.empty()) hs::write_text_file(g.plot, hs::svg_slice_plot(sl));
      // --out ending in .csv gets the table, with the run record alongside
      GlobalOptions record_target = g;
      if (!g.out.empty()) {
        const bool csv_out = g.out.size() > 4 && g.out.substr(g.out.size() - 4) == ".csv";
        const std::string csv_path = csv_out ? g.out : g.out + ".csv";
        hs::write_text_file(csv_path, hs::slice_to_csv(sl));
        if (csv_out) record_target.out = g.out.substr(0, g.out.size() - 4) + ".json";
      }
      finish(record_target, "slice", config_echo(cfg), sj, hs::slice_to_json(sl), watch.ms());
      return 0;
    }

    if (*classify) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      const double level = std::isnan(level_override) ? s.level : level_override;
      hs::TrichotomyResult t = hs::classify_trichotomy(s, level, cfg, g.tol);
      std::cout << "case = " << hs::to_string(t.value) << "  gamma = " << t.gamma
                << "  flatness = " << t.flatness << "\n";
      finish(g, "classify", config_echo(cfg), sj, hs::trichotomy_to_json(t), watch.ms());
      return 0;
    }

    if (*scan) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      std::vector<double> schedule;
      std::stringstream ss(levels_text);
      for (std::string item; std::getline(ss, item, ',');) schedule.push_back(std::stod(item));
      CPoint w0 = w0_text.empty() ? CPoint(CPoint::Zero(s.n)) : parse_point(w0_text);
      std::vector<std::pair<Complex, CPoint>> probes{{parse_complex(z0_text), w0}};
      hs::LevelFamily fam = hs::level_family_scan(s, schedule, probes, cfg, g.tol);
      for (const auto& row : fam.rows)
        std::cout << "level " << row.level << ": value = " << row.probe_values[0]
                  << ", verdict = " << hs::to_string(row.verdicts[0]) << "\n";
      finish(g, "scan-levels", config_echo(cfg), sj, hs::level_family_to_json(fam), watch.ms());
      return 0;
    }

    if (*dual) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      const Complex z = parse_complex(z_text);
      auto boundary = hs::sample_fiber_boundary(s, z, samples);
      auto image = hs::dual_transform(s, z, boundary);
      json rows = json::array();
      for (std::size_t i = 0; i < boundary.size(); ++i)
        rows.push_back(json{{"w", hs::cpoint_to_json(boundary[i])},
                            {"dual", hs::cpoint_to_json(image[i])}});
      std::cout << "transformed " << image.size() << " boundary samples\n";
      finish(g, "dual", config_echo(cfg), sj, json{{"z", hs::complex_to_json(z)}, {"samples", rows}},
             watch.ms());
      return 0;
    }

    if (*hypo) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      hs::CircleGrid grid(g.grid);
      hs::HypoconvexityReport rep = hs::hypoconvexity_margin(s, grid, fiber_samples, tangent_probes);
      std::cout << "kappa_min = " << rep.kappa_min
                << (rep.strictly_hypoconvex ? "  (strictly hypoconvex at this resolution)"
                                            : "  (NOT strictly hypoconvex)")
                << "\n";
      if (!g.out.empty())
        hs::write_text_file(g.out + ".csv", hs::hypoconvexity_report_to_csv(rep));
      finish(g, "check-hypoconvex", config_echo(cfg), sj, hs::hypoconvexity_report_to_json(rep),
             watch.ms());
      return 0;
    }

    if (*green) {
      json fj;
      try {
        fj = json::parse(fiber_text);
      } catch (const json::exception& e) {
        throw hs::SchemaError(std::string("invalid fiber JSON: ") + e.what());
      }
      hs::ModelFiber fiber = hs::model_fiber_from_json(fj);
      hs::GreenData data = hs::green_u1(fiber);
      const CPoint w = parse_point(probe_text);
      const double closed = data.value(w);
      const double sampled = data.sampled_value(w, samples);
      std::cout << "u1 = " << closed << "  (sampled max over directions: " << sampled << ")\n";
      finish(g, "green", json{{"nu_samples", samples}}, fj,
             json{{"fiber", hs::model_fiber_to_json(fiber)},
                  {"probe", hs::cpoint_to_json(w)},
                  {"u1", closed},
                  {"u1_sampled", sampled}},
             watch.ms());
      return 0;
    }

    if (*disc) {
      json fj;
      try {
        fj = json::parse(fiber_text);
      } catch (const json::exception& e) {
        throw hs::SchemaError(std::string("invalid fiber JSON: ") + e.what());
      }
      hs::ModelFiber fiber = hs::model_fiber_from_json(fj);
      CPoint nu = parse_point(nu_text);
      const double nn = nu.norm();
      if (nn > 0) nu /= nn;
      hs::ExtremalDisc d = hs::extremal_disc(fiber, nu);
      json samples_json = json::array();
      double worst = 0.0;
      for (int k = 0; k < 8; ++k) {
        const Complex lambda = 0.9 * std::polar(1.0, 2.0 * hs::kPi * k / 8.0);
        const CPoint w = d.disc(lambda);
        samples_json.push_back(
            json{{"lambda", hs::complex_to_json(lambda)}, {"w", hs::cpoint_to_json(w)}});
        if (check) worst = std::max(worst, std::abs(d.left_inverse(w) - lambda));
      }
      std::cout << "f'(0) = " << d.derivative_at_zero().transpose();
      if (check) std::cout << "  left-inverse residual = " << worst;
      std::cout << "\n";
      json result{{"fiber", hs::model_fiber_to_json(fiber)},
                  {"nu", hs::cpoint_to_json(d.direction)},
                  {"derivative_at_zero", hs::cpoint_to_json(d.derivative_at_zero())},
                  {"samples", samples_json}};
      if (check) result["left_inverse_residual"] = worst;
      finish(g, "disc", json::object(), fj, result, watch.ms());
      return 0;
    }

    if (*recenter) {
      json sj = hs::load_json_file(scenario_path);
      hs::FiberScenario s = hs::scenario_from_json(sj);
      hs::AnalyticMap f = hs::analytic_map_from_json(hs::load_json_file(map_path));
      hs::FiberScenario shifted = hs::recenter_on_graph(s, f);
      json out = hs::scenario_to_json(shifted);  // IoError if not representable
      if (!g.out.empty()) hs::write_json_file(g.out, out);
      std::cout << "recentered scenario family = " << out.at("family").get<std::string>() << "\n";
      return 0;
    }
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(hs::ExitCode::numeric);
  }
  return 0;
}
