#ifndef HULLSCOPE_HULL_HPP
#define HULLSCOPE_HULL_HPP

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hullscope/analytic_map.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/hardy.hpp"
#include "hullscope/scenario.hpp"
#include "hullscope/solver.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

enum class Verdict { inside, boundary, outside };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::inside: return "inside";
    case Verdict::boundary: return "boundary";
    default: return "outside";
  }
}

inline Verdict classify_value(double value, double level, double tol) {
  if (value < level - tol) return Verdict::inside;
  if (value > level + tol) return Verdict::outside;
  return Verdict::boundary;
}

struct HullQuery {
  Complex z0;
  CPoint w0;
  double level = 1.0;
  SolveConfig config;
  double verdict_tol = 1e-3;
  bool check_stability = true;  // re-solve at doubled grid, flag verdict flips

  void validate() const {
    if (!(std::abs(z0) < 1.0))
      throw ConfigError("hull query requires |z0| < 1 strictly");
    if (!w0.allFinite()) throw ConfigError("hull query point must be finite");
  }
};

struct HullVerdict {
  double value = 0.0;  // minimal achievable grid max of rho along graphs through (z0, w0)
  Verdict verdict = Verdict::outside;
  AnalyticMap certificate;  // achieving map, f(z0) = w0 by construction
  double multistart_dispersion = 0.0;
  bool stalled = false;
  bool unstable = false;             // verdict flipped under grid doubling
  std::optional<double> value_refined;
  std::optional<Verdict> verdict_refined;
};

namespace detail {

struct PinnedSolve {
  double value = 0.0;
  AnalyticMap certificate;
  double dispersion = 0.0;
  bool stalled = false;
};

inline PinnedSolve membership_solve(const FiberScenario& s, Complex z0, const CPoint& w0,
                                    const SolveConfig& config, int grid_size) {
  // f = w0 + (z - z0) g, deg g = N - 1: the interpolation constraint is part
  // of the parametrization, not a penalty.
  const int gdeg = std::max(0, config.degree - 1);
  GraphProblem problem(s, grid_size, gdeg, w0,
                       [z0](Complex z) { return z - z0; }, config.real_coefficients);
  SolveConfig local = config;
  local.warm_start.reset();
  SolveResult res = solve_over_problem(problem, local, true, z0);
  PinnedSolve out;
  out.value = res.gamma_hat;
  out.certificate = res.phi_hat;
  out.dispersion = res.multistart_dispersion;
  out.stalled = res.any_stalled;
  return out;
}

}  // namespace detail

// Minimal achievable grid max of rho(z, f(z)) over analytic graphs pinned at
// f(z0) = w0, compared against the level with a tolerance band.
inline HullVerdict membership(const HullQuery& query, const FiberScenario& s) {
  query.validate();
  query.config.validate(s.n);
  detail::PinnedSolve base =
      detail::membership_solve(s, query.z0, query.w0, query.config, query.config.grid);
  HullVerdict v;
  v.value = base.value;
  v.certificate = base.certificate;
  v.multistart_dispersion = base.dispersion;
  v.stalled = base.stalled;
  v.verdict = classify_value(base.value, query.level, query.verdict_tol);
  if (query.check_stability) {
    detail::PinnedSolve fine =
        detail::membership_solve(s, query.z0, query.w0, query.config, 2 * query.config.grid);
    v.value_refined = fine.value;
    v.verdict_refined = classify_value(fine.value, query.level, query.verdict_tol);
    v.unstable = (*v.verdict_refined != v.verdict);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Hull slices over complex-line sections
// ---------------------------------------------------------------------------

// Harmonic extension of the fiber anchor to an interior point; default
// reference point of coordinate-line sections.
inline CPoint anchor_extension(const FiberScenario& s, Complex z0, int grid_size = 64) {
  const CircleGrid grid(grid_size);
  std::vector<double> re(grid.nodes.size()), im(grid.nodes.size());
  CPoint out(s.n);
  for (int comp = 0; comp < s.n; ++comp) {
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
      const Complex a = s.anchor(grid.nodes[k])[comp];
      re[k] = a.real();
      im[k] = a.imag();
    }
    out[comp] = Complex(harmonic_extension(re, z0), harmonic_extension(im, z0));
  }
  return out;
}

struct SliceSpec {
  CPoint ref;     // section w = ref + zeta * dir
  CPoint dir;
  double span = 2.0;  // zeta ranges over [-span, span]^2
  int res = 64;
};

struct SlicePoint {
  Complex zeta;
  double value = 0.0;
  Verdict verdict = Verdict::outside;
  bool unstable = false;
  bool stalled = false;
};

struct SliceResult {
  Complex z0;
  double level = 0.0;
  SliceSpec spec;
  std::vector<SlicePoint> points;          // row-major over the zeta grid
  std::vector<Complex> boundary_zetas;     // points whose verdict is boundary
};

inline SliceResult hull_slice(const FiberScenario& s, Complex z0, const SliceSpec& spec,
                              double level, const SolveConfig& config, double verdict_tol = 1e-3,
                              bool check_stability = false) {
  if (!(std::abs(z0) < 1.0)) throw ConfigError("slice requires |z0| < 1");
  config.validate(s.n);
  SliceResult slice;
  slice.z0 = z0;
  slice.level = level;
  slice.spec = spec;
  // rows are independent; compute them in parallel, assemble in index order
  auto run_row = [&](int iy) {
    std::vector<SlicePoint> row;
    row.reserve(static_cast<std::size_t>(spec.res));
    const double y = spec.res == 1 ? 0.0 : -spec.span + 2.0 * spec.span * iy / (spec.res - 1);
    for (int ix = 0; ix < spec.res; ++ix) {
      const double x = spec.res == 1 ? 0.0 : -spec.span + 2.0 * spec.span * ix / (spec.res - 1);
      const Complex zeta(x, y);
      const CPoint w0 = spec.ref + zeta * spec.dir;
      detail::PinnedSolve sol = detail::membership_solve(s, z0, w0, config, config.grid);
      SlicePoint pt;
      pt.zeta = zeta;
      pt.value = sol.value;
      pt.stalled = sol.stalled;
      pt.verdict = classify_value(sol.value, level, verdict_tol);
      if (check_stability) {
        detail::PinnedSolve fine = detail::membership_solve(s, z0, w0, config, 2 * config.grid);
        pt.unstable = classify_value(fine.value, level, verdict_tol) != pt.verdict;
      }
      row.push_back(pt);
    }
    return row;
  };
  std::vector<std::future<std::vector<SlicePoint>>> rows;
  rows.reserve(static_cast<std::size_t>(spec.res));
  for (int iy = 0; iy < spec.res; ++iy)
    rows.push_back(std::async(std::launch::async, run_row, iy));
  slice.points.reserve(static_cast<std::size_t>(spec.res) * static_cast<std::size_t>(spec.res));
  for (auto& future : rows)
    for (SlicePoint& pt : future.get()) {
      if (pt.verdict == Verdict::boundary) slice.boundary_zetas.push_back(pt.zeta);
      slice.points.push_back(std::move(pt));
    }
  return slice;
}

// Radial membership-value scan along w0 = dir * r, r in [0, r_max]; locates
// where the value crosses the level by linear interpolation between
// bracketing radii. Used for slice-radius estimates on circled fibers and
// boundary-transition checks.
struct TransitionScan {
  std::vector<double> radii;
  std::vector<double> values;
  bool found = false;
  double transition = 0.0;
};

inline TransitionScan slice_transition_scan(const FiberScenario& s, Complex z0, const CPoint& dir,
                                            double level, double r_max, int count,
                                            const SolveConfig& config) {
  TransitionScan scan;
  scan.radii.reserve(static_cast<std::size_t>(count));
  scan.values.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double r = r_max * (i + 1) / count;
    const CPoint w0 = r * dir;
    detail::PinnedSolve sol = detail::membership_solve(s, z0, w0, config, config.grid);
    scan.radii.push_back(r);
    scan.values.push_back(sol.value);
    if (!scan.found && i > 0 && scan.values[static_cast<std::size_t>(i - 1)] <= level &&
        sol.value > level) {
      const double v0 = scan.values[static_cast<std::size_t>(i - 1)];
      const double r0 = scan.radii[static_cast<std::size_t>(i - 1)];
      scan.found = true;
      scan.transition = r0 + (level - v0) / (sol.value - v0) * (r - r0);
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Trichotomy classification and level families
// ---------------------------------------------------------------------------

enum class HullCase { empty, single_graph, many_graphs };

inline const char* to_string(HullCase c) {
  switch (c) {
    case HullCase::empty: return "empty";
    case HullCase::single_graph: return "single-graph";
    default: return "many-graphs";
  }
}

struct TrichotomyResult {
  HullCase value = HullCase::empty;
  double gamma = 0.0;
  AnalyticMap phi;
  double flatness = 0.0;
  // two distinct interior graph certificates, produced in the many-graphs case
  std::optional<std::pair<HullVerdict, HullVerdict>> graph_evidence;
  // empty case: inside verdicts observed on an 8 x 8 (z0, w0) probe grid
  std::optional<int> empty_probe_inside;
};

inline TrichotomyResult classify_trichotomy(const FiberScenario& s, double level,
                                            const SolveConfig& config, double tol = 1e-3) {
  SolveResult res = solve_gamma(s, config);
  TrichotomyResult out;
  out.gamma = res.gamma_hat;
  out.phi = res.phi_hat;
  out.flatness = res.flatness_residual;
  if (std::abs(res.gamma_hat - level) <= 2.0 * tol && res.flatness_residual > 10.0 * tol &&
      std::abs(res.gamma_hat - level) > tol)
    throw InconclusiveError("gamma within twice the tolerance of the level but the optimizer is "
                            "not flat (flatness residual " +
                            std::to_string(res.flatness_residual) + ")");
  if (res.gamma_hat > level + tol) {
    out.value = HullCase::empty;
    // corroborate: no probe on an 8 x 8 grid of (z0, w0) comes back inside
    SolveConfig probe_cfg = config;
    probe_cfg.degree = std::min(config.degree, 8);
    probe_cfg.grid = std::min(config.grid, 32);
    probe_cfg.multistart = 1;
    probe_cfg.warm_start.reset();
    const double span = 2.0 * std::max(1.0, std::sqrt(std::max(level, 0.0)));
    int inside = 0;
    for (int a = 0; a < 8; ++a) {
      const Complex z0 = (0.8 * a / 7.0) * std::polar(1.0, 2.0 * kPi * a / 8.0);
      const CPoint ref = anchor_extension(s, z0);
      for (int b = 0; b < 8; ++b) {
        CPoint w0 = ref;
        w0[0] += Complex(-span + 2.0 * span * b / 7.0, 0);
        if (classify_value(detail::membership_solve(s, z0, w0, probe_cfg, probe_cfg.grid).value,
                           level, tol) == Verdict::inside)
          ++inside;
      }
    }
    out.empty_probe_inside = inside;
    return out;
  }
  if (std::abs(res.gamma_hat - level) <= tol) {
    if (res.flatness_residual > 10.0 * tol)
      throw InconclusiveError("gamma at level but flatness residual " +
                              std::to_string(res.flatness_residual) + " is large");
    out.value = HullCase::single_graph;
    return out;
  }
  out.value = HullCase::many_graphs;
  // exhibit two distinct graphs through the interior of the hull
  const Complex z0(0, 0);
  const CPoint base_point = res.phi_hat.eval(z0);
  HullQuery q;
  q.z0 = z0;
  q.level = level;
  q.config = config;
  q.verdict_tol = tol;
  q.check_stability = false;
  q.w0 = base_point;
  HullVerdict first = membership(q, s);
  for (double offset : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    q.w0 = base_point + offset * unit_vector(s.n, 0);
    HullVerdict second = membership(q, s);
    if (second.verdict == Verdict::inside) {
      out.graph_evidence = std::make_pair(first, second);
      break;
    }
  }
  return out;
}

struct LevelRow {
  double level = 0.0;
  double gamma = 0.0;
  std::vector<double> probe_values;
  std::vector<Verdict> verdicts;
};

struct LevelFamily {
  std::vector<double> schedule;
  std::vector<std::pair<Complex, CPoint>> probes;
  std::vector<LevelRow> rows;
};

// The min-max probe value never reads the level, so values are computed once
// and verdicts re-derived per level; rows at duplicate levels are identical by
// construction.
inline LevelFamily level_family_scan(const FiberScenario& s, std::vector<double> schedule,
                                     std::vector<std::pair<Complex, CPoint>> probes,
                                     const SolveConfig& config, double verdict_tol = 1e-3) {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] >= schedule[i - 1]))
      throw ConfigError("level schedule must be non-decreasing");
  LevelFamily fam;
  fam.schedule = schedule;
  fam.probes = probes;
  const double gamma = solve_gamma(s, config).gamma_hat;
  std::vector<double> values;
  values.reserve(probes.size());
  for (const auto& [z0, w0] : probes)
    values.push_back(detail::membership_solve(s, z0, w0, config, config.grid).value);
  for (double level : schedule) {
    LevelRow row;
    row.level = level;
    row.gamma = gamma;
    row.probe_values = values;
    for (double v : values) row.verdicts.push_back(classify_value(v, level, verdict_tol));
    fam.rows.push_back(std::move(row));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Holomorphic recentering (z, w) -> rho(z, w + f(z))
// ---------------------------------------------------------------------------

inline FiberScenario recenter_on_graph(const FiberScenario& s, const AnalyticMap& f) {
  if (f.n != s.n) throw ConfigError("recenter map dimension mismatch");
  auto base = std::make_shared<FiberScenario>(s);
  auto shift = std::make_shared<AnalyticMap>(f);
  FiberScenario out;
  out.n = s.n;
  out.level = s.level;
  out.family_id = "recentered(" + s.family_id + ")";
  out.conjugate_symmetric = s.conjugate_symmetric && f.real_coefficients(0.0);
  out.analytic_derivatives = s.analytic_derivatives;
  out.rho = [base, shift](Complex z, const CPoint& w) { return base->rho(z, w + shift->eval(z)); };
  out.grad_w = [base, shift](Complex z, const CPoint& w) {
    return base->grad_w(z, w + shift->eval(z));
  };
  out.hess_w = [base, shift](Complex z, const CPoint& w) {
    return base->hess_w(z, w + shift->eval(z));
  };
  out.anchor = [base, shift](Complex z) -> CPoint { return base->anchor(z) - shift->eval(z); };

  // keep a serializable parameter set when the family supports center shifts
  out.params = CustomParams{};
  LaurentVec fl(static_cast<std::size_t>(f.n));
  for (int comp = 0; comp < f.n; ++comp) {
    LaurentPoly p;
    p.min_power = 0;
    for (const CPoint& c : f.coeffs) p.coeffs.push_back(c[comp]);
    fl[static_cast<std::size_t>(comp)] = p;
  }
  if (const auto* ball = std::get_if<BallParams>(&s.params)) {
    LaurentVec center = ball->center;
    for (int j = 0; j < s.n; ++j)
      center[static_cast<std::size_t>(j)] =
          center[static_cast<std::size_t>(j)] + Complex(-1, 0) * fl[static_cast<std::size_t>(j)];
    out.params = BallParams{center};
  } else if (const auto* ell = std::get_if<EllipsoidParams>(&s.params)) {
    LaurentVec center = ell->center;
    for (int j = 0; j < s.n; ++j)
      center[static_cast<std::size_t>(j)] =
          center[static_cast<std::size_t>(j)] + Complex(-1, 0) * fl[static_cast<std::size_t>(j)];
    out.params = EllipsoidParams{ell->semi_axes, center};
  } else if (const auto* sos = std::get_if<SumOfSquaresParams>(&s.params)) {
    SumOfSquaresParams p = *sos;
    for (auto& term : p.terms)
      for (auto& form : term.forms) {
        LaurentPoly extra;
        for (int j = 0; j < s.n; ++j)
          extra = extra + form.linear[static_cast<std::size_t>(j)] * fl[static_cast<std::size_t>(j)];
        form.constant = form.constant + extra;
      }
    if (p.anchor.empty()) p.anchor = zero_laurent_vec(s.n);
    for (int j = 0; j < s.n; ++j)
      p.anchor[static_cast<std::size_t>(j)] =
          p.anchor[static_cast<std::size_t>(j)] + Complex(-1, 0) * fl[static_cast<std::size_t>(j)];
    out.params = std::move(p);
  }
  return out;
}

}  // namespace hullscope

#endif  // HULLSCOPE_HULL_HPP
