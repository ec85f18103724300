#ifndef HULLSCOPE_IO_HPP
#define HULLSCOPE_IO_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hullscope/analytic_map.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/fiber_geometry.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/laurent.hpp"
#include "hullscope/lempert.hpp"
#include "hullscope/scenario.hpp"
#include "hullscope/solver.hpp"

namespace hullscope {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Primitive encodings
// ---------------------------------------------------------------------------

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw SchemaError("expected a complex number as [re, im] or a plain number");
}

inline json laurent_to_json(const LaurentPoly& p) {
  json coeffs = json::array();
  for (const Complex& c : p.coeffs) coeffs.push_back(complex_to_json(c));
  if (p.min_power == 0) return coeffs;
  return json{{"min_power", p.min_power}, {"coeffs", coeffs}};
}

inline LaurentPoly laurent_from_json(const json& j) {
  LaurentPoly p;
  const json* coeffs = nullptr;
  if (j.is_array()) {
    coeffs = &j;
  } else if (j.is_object()) {
    if (j.contains("min_power")) p.min_power = j.at("min_power").get<int>();
    if (!j.contains("coeffs")) throw SchemaError("laurent object needs a coeffs array");
    coeffs = &j.at("coeffs");
  } else if (j.is_number()) {
    p.coeffs.push_back(Complex(j.get<double>(), 0.0));
    return p;
  } else {
    throw SchemaError("expected a laurent polynomial (array or object)");
  }
  for (const json& c : *coeffs) p.coeffs.push_back(complex_from_json(c));
  return p;
}

inline json laurent_vec_to_json(const LaurentVec& v) {
  json arr = json::array();
  for (const LaurentPoly& p : v) arr.push_back(laurent_to_json(p));
  return arr;
}

inline LaurentVec laurent_vec_from_json(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw SchemaError("expected an array of n laurent polynomials");
  LaurentVec v;
  for (const json& p : j) v.push_back(laurent_from_json(p));
  return v;
}

inline CPoint cpoint_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("expected a point as a JSON array");
  CPoint w(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    w[static_cast<Eigen::Index>(k)] = complex_from_json(j[k]);
  return w;
}

inline json cpoint_to_json(const CPoint& w) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < w.size(); ++k) arr.push_back(complex_to_json(w[k]));
  return arr;
}

// ---------------------------------------------------------------------------
// Analytic maps
// ---------------------------------------------------------------------------

inline json analytic_map_to_json(const AnalyticMap& f) {
  json components = json::array();
  for (int comp = 0; comp < f.n; ++comp) {
    json series = json::array();
    for (const CPoint& c : f.coeffs) series.push_back(complex_to_json(c[comp]));
    components.push_back(series);
  }
  return json{{"n", f.n}, {"degree", f.degree()}, {"components", components}};
}

inline AnalyticMap analytic_map_from_json(const json& j) {
  if (!j.contains("components")) throw SchemaError("analytic map needs components");
  const json& comps = j.at("components");
  const int n = static_cast<int>(comps.size());
  if (n == 0) throw SchemaError("analytic map needs at least one component");
  const int degree = static_cast<int>(comps[0].size()) - 1;
  AnalyticMap f = AnalyticMap::zero(n, degree);
  for (int comp = 0; comp < n; ++comp) {
    if (static_cast<int>(comps[static_cast<std::size_t>(comp)].size()) != degree + 1)
      throw SchemaError("analytic map components must share one degree");
    for (int d = 0; d <= degree; ++d)
      f.coeffs[static_cast<std::size_t>(d)][comp] =
          complex_from_json(comps[static_cast<std::size_t>(comp)][static_cast<std::size_t>(d)]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

inline json affine_form_to_json(const AffineForm& f) {
  return json{{"constant", laurent_to_json(f.constant)}, {"linear", laurent_vec_to_json(f.linear)}};
}

inline AffineForm affine_form_from_json(const json& j, int n) {
  AffineForm f;
  if (j.contains("constant")) f.constant = laurent_from_json(j.at("constant"));
  if (!j.contains("linear")) throw SchemaError("affine form needs a linear part");
  f.linear = laurent_vec_from_json(j.at("linear"), n);
  return f;
}

inline json scenario_params_to_json(const FiberScenario& s) {
  if (const auto* ball = std::get_if<BallParams>(&s.params))
    return json{{"center", laurent_vec_to_json(ball->center)}};
  if (const auto* ell = std::get_if<EllipsoidParams>(&s.params))
    return json{{"semi_axes", ell->semi_axes}, {"center", laurent_vec_to_json(ell->center)}};
  if (std::get_if<ShiftedConjugateParams>(&s.params)) return json::object();
  if (const auto* cir = std::get_if<CircledRadiusParams>(&s.params))
    return json{{"log_radius", laurent_to_json(cir->log_radius)}};
  if (const auto* sos = std::get_if<SumOfSquaresParams>(&s.params)) {
    json terms = json::array();
    for (const auto& t : sos->terms) {
      json forms = json::array();
      for (const auto& f : t.forms) forms.push_back(affine_form_to_json(f));
      terms.push_back(json{{"coef", t.coef}, {"exponent", t.exponent}, {"forms", forms}});
    }
    return json{{"offset", sos->offset},
                {"offset_re", laurent_to_json(sos->offset_laurent)},
                {"anchor", laurent_vec_to_json(sos->anchor)},
                {"terms", terms}};
  }
  throw IoError("scenario '" + s.family_id + "' has no serializable parameter set");
}

inline json scenario_to_json(const FiberScenario& s) {
  std::string family = s.family_id;
  if (std::get_if<SumOfSquaresParams>(&s.params)) family = "sum-of-squares";
  if (std::get_if<BallParams>(&s.params)) family = "ball";
  if (std::get_if<EllipsoidParams>(&s.params)) family = "ellipsoid";
  if (std::get_if<ShiftedConjugateParams>(&s.params)) family = "shifted-conjugate";
  if (std::get_if<CircledRadiusParams>(&s.params)) family = "circled-radius";
  return json{{"schema_version", 1},
              {"family", family},
              {"n", s.n},
              {"level", s.level},
              {"conjugate_symmetric", s.conjugate_symmetric},
              {"parameters", scenario_params_to_json(s)}};
}

inline FiberScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario file must be a JSON object");
  for (const char* key : {"family", "n", "level"})
    if (!j.contains(key)) throw SchemaError(std::string("scenario file is missing '") + key + "'");
  const std::string family = j.at("family").get<std::string>();
  if (!j.at("n").is_number_integer()) throw SchemaError("'n' must be an integer");
  const int n = j.at("n").get<int>();
  if (n < 2)
    throw DimensionError("scenario dimension must satisfy n >= 2, got " + std::to_string(n));
  if (!j.at("level").is_number()) throw SchemaError("'level' must be a number");
  const double level = j.at("level").get<double>();
  const json params = j.value("parameters", json::object());

  FiberScenario s;
  if (family == "ball") {
    LaurentVec center =
        params.contains("center") ? laurent_vec_from_json(params.at("center"), n) : LaurentVec{};
    s = make_ball(n, level, std::move(center));
  } else if (family == "ellipsoid") {
    if (!params.contains("semi_axes")) throw SchemaError("ellipsoid needs semi_axes");
    std::vector<double> axes = params.at("semi_axes").get<std::vector<double>>();
    LaurentVec center =
        params.contains("center") ? laurent_vec_from_json(params.at("center"), n) : LaurentVec{};
    s = make_ellipsoid(n, level, std::move(axes), std::move(center));
  } else if (family == "shifted-conjugate") {
    s = make_shifted_conjugate(n, level);
  } else if (family == "circled-radius") {
    if (!params.contains("log_radius")) throw SchemaError("circled-radius needs log_radius");
    s = make_circled_radius(n, level, laurent_from_json(params.at("log_radius")));
  } else if (family == "sum-of-squares") {
    SumOfSquaresParams p;
    p.offset = params.value("offset", 0.0);
    if (params.contains("offset_re")) p.offset_laurent = laurent_from_json(params.at("offset_re"));
    if (params.contains("anchor")) p.anchor = laurent_vec_from_json(params.at("anchor"), n);
    if (!params.contains("terms")) throw SchemaError("sum-of-squares needs terms");
    for (const json& tj : params.at("terms")) {
      QuadrancePowerTerm term;
      term.coef = tj.value("coef", 1.0);
      term.exponent = tj.value("exponent", 1.0);
      if (!(term.exponent > 0)) throw SchemaError("term exponents must be positive");
      if (!tj.contains("forms")) throw SchemaError("sum-of-squares term needs forms");
      for (const json& fj : tj.at("forms")) term.forms.push_back(affine_form_from_json(fj, n));
      p.terms.push_back(std::move(term));
    }
    s = make_sum_of_squares(n, level, std::move(p));
  } else {
    throw UnknownFamilyError("unknown scenario family '" + family + "'");
  }

  if (j.contains("conjugate_symmetric") && j.at("conjugate_symmetric").get<bool>()) {
    const double defect = conjugate_symmetry_defect(s);
    if (defect > 1e-10)
      throw SchemaError("scenario declared conjugate-symmetric but rho(conj z, conj w) deviates "
                        "from rho(z, w) by " +
                        std::to_string(defect));
    s.conjugate_symmetric = true;
  }
  return s;
}

// Model fibers for the extremal-disc/Green commands:
//   {"kind": "ball", "r": 1, "center": [...]} or {"kind": "ellipsoid", "a": [2, 1]}
inline ModelFiber model_fiber_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SchemaError("fiber needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ball") {
    const double r = j.value("r", 1.0);
    CPoint center =
        j.contains("center") ? cpoint_from_json(j.at("center")) : CPoint(CPoint::Zero(2));
    return ModelFiber::make_ball(std::move(center), r);
  }
  if (kind == "ellipsoid") {
    if (!j.contains("a")) throw SchemaError("ellipsoid fiber needs semi-axes 'a'");
    std::vector<double> axes = j.at("a").get<std::vector<double>>();
    CPoint center = j.contains("center")
                        ? cpoint_from_json(j.at("center"))
                        : CPoint(CPoint::Zero(static_cast<Eigen::Index>(axes.size())));
    return ModelFiber::make_ellipsoid(std::move(center), std::move(axes));
  }
  throw UnknownFamilyError("unknown fiber kind '" + kind + "'");
}

inline json model_fiber_to_json(const ModelFiber& f) {
  if (f.kind == FiberKind::ball)
    return json{{"kind", "ball"}, {"r", f.axes[0]}, {"center", cpoint_to_json(f.center)}};
  return json{{"kind", "ellipsoid"}, {"a", f.axes}, {"center", cpoint_to_json(f.center)}};
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline FiberScenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// Result encodings (grid size travels with every serialized result)
// ---------------------------------------------------------------------------

inline json solve_result_to_json(const SolveResult& r) {
  json starts = json::array();
  for (const StartResult& s : r.starts)
    starts.push_back(json{{"gamma", s.gamma},
                          {"converged", s.converged},
                          {"stalled", s.stalled},
                          {"iterations", s.iterations}});
  json trace = json::array();
  if (!r.starts.empty())
    for (const StageTrace& t : r.starts[static_cast<std::size_t>(r.best_start)].trace)
      trace.push_back(json{{"temperature", t.temperature}, {"objective", t.objective}});
  json out{{"gamma_hat", r.gamma_hat},
           {"phi_hat", analytic_map_to_json(r.phi_hat)},
           {"flatness_residual", r.flatness_residual},
           {"multistart_dispersion", r.multistart_dispersion},
           {"any_stalled", r.any_stalled},
           {"best_start", r.best_start},
           {"grid", r.grid},
           {"degree", r.degree},
           {"starts", starts},
           {"stage_trace", trace}};
  if (r.symmetry_residual) out["symmetry_residual"] = *r.symmetry_residual;
  return out;
}

inline json verdict_to_json(const HullVerdict& v) {
  json out{{"value", v.value},
           {"verdict", to_string(v.verdict)},
           {"certificate", analytic_map_to_json(v.certificate)},
           {"multistart_dispersion", v.multistart_dispersion},
           {"stalled", v.stalled},
           {"unstable", v.unstable}};
  if (v.value_refined) out["value_refined"] = *v.value_refined;
  if (v.verdict_refined) out["verdict_refined"] = to_string(*v.verdict_refined);
  return out;
}

inline json slice_to_json(const SliceResult& s) {
  json pts = json::array();
  for (const SlicePoint& p : s.points)
    pts.push_back(json{{"zeta", complex_to_json(p.zeta)},
                       {"value", p.value},
                       {"verdict", to_string(p.verdict)},
                       {"unstable", p.unstable}});
  json boundary = json::array();
  for (const Complex& z : s.boundary_zetas) boundary.push_back(complex_to_json(z));
  return json{{"z0", complex_to_json(s.z0)},
              {"level", s.level},
              {"res", s.spec.res},
              {"span", s.spec.span},
              {"ref", cpoint_to_json(s.spec.ref)},
              {"dir", cpoint_to_json(s.spec.dir)},
              {"points", pts},
              {"boundary", boundary}};
}

inline std::string slice_to_csv(const SliceResult& s) {
  std::ostringstream out;
  out << "zeta_re,zeta_im,value,verdict\n";
  out.precision(17);
  for (const SlicePoint& p : s.points)
    out << p.zeta.real() << ',' << p.zeta.imag() << ',' << p.value << ',' << to_string(p.verdict)
        << '\n';
  return out.str();
}

inline json hypoconvexity_report_to_json(const HypoconvexityReport& r) {
  return json{{"grid", r.grid_size},
              {"fiber_samples", r.fiber_samples},
              {"tangent_probes", r.tangent_probes},
              {"kappa_min", r.kappa_min},
              {"strictly_hypoconvex", r.strictly_hypoconvex},
              {"witness",
               json{{"z_index", r.witness.z_index},
                    {"w", cpoint_to_json(r.witness.w)},
                    {"kappa", r.witness.kappa},
                    {"direction", cpoint_to_json(r.witness.witness)}}},
              {"sample_count", r.samples.size()}};
}

inline std::string hypoconvexity_report_to_csv(const HypoconvexityReport& r) {
  std::ostringstream out;
  out << "z_index";
  const int n = r.samples.empty() ? 0 : static_cast<int>(r.samples.front().w.size());
  for (int j = 0; j < n; ++j) out << ",w" << j + 1 << "_re,w" << j + 1 << "_im";
  out << ",kappa\n";
  out.precision(17);
  for (const LevelSample& s : r.samples) {
    out << s.z_index;
    for (int j = 0; j < n; ++j) out << ',' << s.w[j].real() << ',' << s.w[j].imag();
    out << ',' << s.kappa << '\n';
  }
  return out.str();
}

inline json trichotomy_to_json(const TrichotomyResult& t) {
  json out{{"case", to_string(t.value)},
           {"gamma", t.gamma},
           {"flatness", t.flatness},
           {"phi", analytic_map_to_json(t.phi)}};
  if (t.graph_evidence) {
    out["evidence"] = json::array(
        {verdict_to_json(t.graph_evidence->first), verdict_to_json(t.graph_evidence->second)});
  }
  if (t.empty_probe_inside)
    out["probe_grid"] = json{{"points", 64}, {"inside", *t.empty_probe_inside}};
  return out;
}

inline json level_family_to_json(const LevelFamily& f) {
  json probes = json::array();
  for (const auto& [z0, w0] : f.probes)
    probes.push_back(json{{"z0", complex_to_json(z0)}, {"w0", cpoint_to_json(w0)}});
  json rows = json::array();
  for (const LevelRow& r : f.rows) {
    json verdicts = json::array();
    for (Verdict v : r.verdicts) verdicts.push_back(to_string(v));
    rows.push_back(json{{"level", r.level},
                        {"gamma", r.gamma},
                        {"values", r.probe_values},
                        {"verdicts", verdicts}});
  }
  return json{{"probes", probes}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Run records and files
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string content_hash(const json& j) {
  std::ostringstream out;
  out << std::hex << fnv1a64(j.dump());
  return "fnv1a64:" + out.str();
}

// Re-running with identical inputs and seed reproduces the result subtree
// byte-for-byte; wall time lives under the volatile meta key.
struct RunRecord {
  std::string command;
  json config;
  std::string input_hash;
  json result;
  double wall_time_ms = 0.0;

  json to_json() const {
    return json{{"command", command},
                {"config", config},
                {"input_hash", input_hash},
                {"result", result},
                {"meta", json{{"wall_time_ms", wall_time_ms}}}};
  }
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hullscope

#endif  // HULLSCOPE_IO_HPP
