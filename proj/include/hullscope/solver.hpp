#ifndef HULLSCOPE_SOLVER_HPP
#define HULLSCOPE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hullscope/analytic_map.hpp"
#include "hullscope/circle_grid.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/hardy.hpp"
#include "hullscope/sampling.hpp"
#include "hullscope/scenario.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

inline std::vector<double> default_temperatures(double t_max = 1.0, double t_min = 1e-4,
                                                double ratio = 0.5) {
  std::vector<double> temps;
  for (double t = t_max; t > t_min * (1.0 + 1e-12); t *= ratio) temps.push_back(t);
  temps.push_back(t_min);
  return temps;
}

struct SolveConfig {
  int degree = 32;
  int grid = 256;
  std::vector<double> temperatures = default_temperatures();
  int multistart = 10;
  std::uint64_t seed = 7;
  int max_iterations = 400;       // per anneal stage
  double coeff_tolerance = 1e-10; // step-size part of the stopping rule
  double start_scale = 0.5;       // gaussian perturbation scale, decays 2^-j with degree
  bool real_coefficients = false; // restrict to the conjugate-symmetric subspace
  std::optional<AnalyticMap> warm_start;

  void validate(int n) const {
    if (degree < 0) throw ConfigError("degree must be nonnegative");
    if (grid < 4 * std::max(1, degree))
      throw ConfigError("grid must satisfy M >= 4 N (aliasing guard), got M = " +
                        std::to_string(grid) + ", N = " + std::to_string(degree));
    if (multistart < 1) throw ConfigError("multistart count must be >= 1");
    if (temperatures.empty()) throw ConfigError("temperature schedule is empty");
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
      if (!(temperatures[i] > 0)) throw ConfigError("temperatures must be positive");
      if (i > 0 && !(temperatures[i] < temperatures[i - 1]))
        throw ConfigError("temperatures must be strictly decreasing");
    }
    if (warm_start && warm_start->n != n)
      throw ConfigError("warm start dimension does not match the scenario");
    if (warm_start && warm_start->degree() > degree)
      throw ConfigError("warm start degree exceeds the configured degree");
  }
};

// ---------------------------------------------------------------------------
// L-BFGS with Armijo backtracking
// ---------------------------------------------------------------------------

struct LbfgsOptions {
  int max_iterations = 400;
  int history = 8;
  double grad_tol = 1e-11;
  double step_tol = 1e-10;
  double f_tol = 1e-12;
  int patience = 5;  // consecutive tiny-progress iterations before stopping
};

struct LbfgsOutcome {
  RVec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// fg(x, grad) -> objective value, fills grad.
template <class F>
LbfgsOutcome lbfgs_minimize(F&& fg, RVec x0, const LbfgsOptions& opt) {
  const Eigen::Index dim = x0.size();
  RVec x = std::move(x0), g(dim), g_new(dim);
  double f = fg(x, g);
  std::deque<RVec> s_hist, y_hist;
  std::deque<double> rho_hist;
  int quiet = 0;
  LbfgsOutcome out;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= opt.grad_tol) {
      out.converged = true;
      break;
    }
    // two-loop recursion
    RVec q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] =
          rho_hist[static_cast<std::size_t>(i)] * s_hist[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
    }
    if (!s_hist.empty()) {
      const RVec& sl = s_hist.back();
      const RVec& yl = y_hist.back();
      q *= sl.dot(yl) / yl.squaredNorm();
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    RVec d = -q;
    double gd = g.dot(d);
    if (!(gd < 0) || !d.allFinite()) {  // not a descent direction: restart
      d = -g;
      gd = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    // Armijo backtracking
    double step = (it == 0 && s_hist.empty()) ? 1.0 / std::max(1.0, g.norm()) : 1.0;
    double f_new = f;
    RVec x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      x_new = x + step * d;
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search exhausted; treat as stationary
    const RVec s_vec = x_new - x;
    const RVec y_vec = g_new - g;
    const double sy = s_vec.dot(y_vec);
    if (sy > 1e-14 * s_vec.norm() * y_vec.norm()) {
      s_hist.push_back(s_vec);
      y_hist.push_back(y_vec);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double decrease = f - f_new;
    const double step_inf = s_vec.lpNorm<Eigen::Infinity>();
    x = x_new;
    f = f_new;
    g = g_new;
    if (step_inf < opt.step_tol && decrease < opt.f_tol)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= opt.patience) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.x = std::move(x);
  out.f = f;
  out.iterations = it;
  return out;
}

// ---------------------------------------------------------------------------
// Graph parametrization and the smoothed min-max objective
// ---------------------------------------------------------------------------

namespace detail {

// Optimizes over analytic graphs f(z) = base + beta(z) * sum_j c_j z^j.
// The plain problem uses base = 0, beta = 1; interpolation-constrained hull
// queries use base = w0, beta = (z - z0) so the constraint is built into the
// parametrization. Coefficients are packed (Re, Im) per component per degree.
struct GraphProblem {
  const FiberScenario* scenario = nullptr;
  CircleGrid grid;
  int degree = 0;
  CPoint base;
  std::vector<Complex> beta;
  CMat powers;  // powers(k, j) = z_k^j
  bool real_coefficients = false;

  GraphProblem(const FiberScenario& s, int grid_size, int deg, CPoint base_point,
               std::function<Complex(Complex)> beta_fn, bool real_coeffs)
      : scenario(&s), grid(grid_size), degree(deg), base(std::move(base_point)),
        real_coefficients(real_coeffs) {
    const int m = grid.size;
    beta.resize(static_cast<std::size_t>(m));
    powers.resize(m, degree + 1);
    for (int k = 0; k < m; ++k) {
      const Complex z = grid.node(k);
      beta[static_cast<std::size_t>(k)] = beta_fn ? beta_fn(z) : Complex(1, 0);
      Complex p(1, 0);
      for (int j = 0; j <= degree; ++j) {
        powers(k, j) = p;
        p *= z;
      }
    }
  }

  Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(2 * scenario->n * (degree + 1));
  }

  CPoint coefficient(const RVec& x, int j) const {
    const int n = scenario->n;
    CPoint c(n);
    for (int l = 0; l < n; ++l) {
      const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(j) * n + l);
      c[l] = Complex(x[idx], real_coefficients ? 0.0 : x[idx + 1]);
    }
    return c;
  }

  RVec pack(const std::vector<CPoint>& coeffs) const {
    RVec x = RVec::Zero(dimension());
    const int n = scenario->n;
    for (int j = 0; j <= degree && j < static_cast<int>(coeffs.size()); ++j)
      for (int l = 0; l < n; ++l) {
        const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(j) * n + l);
        x[idx] = coeffs[static_cast<std::size_t>(j)][l].real();
        x[idx + 1] = real_coefficients ? 0.0 : coeffs[static_cast<std::size_t>(j)][l].imag();
      }
    return x;
  }

  CPoint value_at(const RVec& x, int k) const {
    CPoint series = CPoint::Zero(scenario->n);
    for (int j = 0; j <= degree; ++j) series += coefficient(x, j) * powers(k, j);
    return base + beta[static_cast<std::size_t>(k)] * series;
  }

  // Smoothed objective T log sum_k exp(rho_k / T) (max-stabilized); also
  // reports the raw grid max. Gradient via the scenario's Wirtinger gradient
  // and the chain rule.
  double objective(const RVec& x, double temperature, RVec* grad, double* raw_max) const {
    const int m = grid.size;
    const int n = scenario->n;
    std::vector<double> rho_vals(static_cast<std::size_t>(m));
    std::vector<CPoint> values(static_cast<std::size_t>(m));
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      CPoint f = value_at(x, k);
      const double r = scenario->rho(grid.node(k), f);
      if (!std::isfinite(r)) throw NonFiniteError("scenario returned a non-finite value");
      rho_vals[static_cast<std::size_t>(k)] = r;
      values[static_cast<std::size_t>(k)] = std::move(f);
      top = std::max(top, r);
    }
    if (raw_max) *raw_max = top;
    double sum = 0.0;
    for (int k = 0; k < m; ++k)
      sum += std::exp((rho_vals[static_cast<std::size_t>(k)] - top) / temperature);
    const double obj = top + temperature * std::log(sum);
    if (grad) {
      grad->setZero(dimension());
      CMat t(m, n);  // t(k, l) = softmax_k * beta_k * drho/dw_l at (z_k, f_k)
      for (int k = 0; k < m; ++k) {
        const double sk =
            std::exp((rho_vals[static_cast<std::size_t>(k)] - top) / temperature) / sum;
        const CPoint g = scenario->grad_w(grid.node(k), values[static_cast<std::size_t>(k)]);
        if (!g.allFinite()) throw NonFiniteError("scenario gradient returned a non-finite value");
        for (int l = 0; l < n; ++l) t(k, l) = sk * beta[static_cast<std::size_t>(k)] * g[l];
      }
      for (int j = 0; j <= degree; ++j)
        for (int l = 0; l < n; ++l) {
          Complex u(0, 0);
          for (int k = 0; k < m; ++k) u += t(k, l) * powers(k, j);
          const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(j) * n + l);
          (*grad)[idx] = 2.0 * u.real();
          (*grad)[idx + 1] = real_coefficients ? 0.0 : -2.0 * u.imag();
        }
    }
    return obj;
  }

  double raw_grid_max(const RVec& x) const {
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.size; ++k)
      top = std::max(top, scenario->rho(grid.node(k), value_at(x, k)));
    return top;
  }

  // coefficients of the full map base + beta * series, as an AnalyticMap
  AnalyticMap expand(const RVec& x, Complex pin_z0, bool pinned) const {
    const int n = scenario->n;
    if (!pinned) {
      AnalyticMap f = AnalyticMap::zero(n, degree);
      for (int j = 0; j <= degree; ++j) f.coeffs[static_cast<std::size_t>(j)] = coefficient(x, j);
      return f;
    }
    // f = w0 + (z - z0) g with deg g = degree
    AnalyticMap f = AnalyticMap::zero(n, degree + 1);
    f.coeffs[0] = base - pin_z0 * coefficient(x, 0);
    for (int j = 1; j <= degree; ++j)
      f.coeffs[static_cast<std::size_t>(j)] = coefficient(x, j - 1) - pin_z0 * coefficient(x, j);
    f.coeffs[static_cast<std::size_t>(degree + 1)] = coefficient(x, degree);
    return f;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Solve results
// ---------------------------------------------------------------------------

struct StageTrace {
  double temperature = 0.0;
  double objective = 0.0;  // smoothed objective at stage end
};

struct StartResult {
  AnalyticMap phi;
  double gamma = 0.0;  // raw grid max at the best evaluated iterate
  bool converged = false;
  bool stalled = false;
  int iterations = 0;
  std::vector<StageTrace> trace;
};

struct SolveResult {
  double gamma_hat = 0.0;
  AnalyticMap phi_hat;
  double flatness_residual = 0.0;
  double multistart_dispersion = 0.0;  // max pairwise coefficient distance, converged runs
  std::optional<double> symmetry_residual;
  bool any_stalled = false;
  int best_start = 0;
  std::vector<StartResult> starts;
  int grid = 0;
  int degree = 0;
};

inline double flatness_report(const FiberScenario& s, const AnalyticMap& phi,
                              const CircleGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Complex& z : grid.nodes) {
    const double r = s.rho(z, phi.eval(z));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

namespace detail {

// One annealed multistage descent from a fixed start. Tracks the raw grid max
// of every evaluated iterate and returns the arg-best, which is what makes
// warm starts an unconditional upper bound on the reported value.
inline StartResult run_annealed_start(const GraphProblem& problem, const SolveConfig& config,
                                      RVec x0) {
  StartResult res;
  RVec best_x = x0;
  double best_raw = problem.raw_grid_max(x0);
  RVec x = std::move(x0);
  bool converged = true;
  int total_iterations = 0;
  for (double temperature : config.temperatures) {
    auto fg = [&](const RVec& xx, RVec& grad) {
      double raw = 0.0;
      const double obj = problem.objective(xx, temperature, &grad, &raw);
      if (raw < best_raw) {
        best_raw = raw;
        best_x = xx;
      }
      return obj;
    };
    LbfgsOptions opt;
    opt.max_iterations = config.max_iterations;
    opt.step_tol = config.coeff_tolerance;
    LbfgsOutcome out = lbfgs_minimize(fg, x, opt);
    x = std::move(out.x);
    total_iterations += out.iterations;
    converged = out.converged;  // final stage decides the flag
    res.trace.push_back({temperature, out.f});
  }
  res.gamma = best_raw;
  res.converged = converged;
  res.stalled = !converged;
  res.iterations = total_iterations;
  res.phi = problem.expand(best_x, Complex(0, 0), false);
  return res;
}

inline RVec start_vector(const GraphProblem& problem, const SolveConfig& config, int start_index,
                         const RVec& base_start) {
  if (start_index == 0) return base_start;
  SplitMix64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(start_index)));
  RVec x = base_start;
  const int n = problem.scenario->n;
  for (int j = 0; j <= problem.degree; ++j) {
    const double scale = config.start_scale * std::pow(2.0, -j);
    for (int l = 0; l < n; ++l) {
      const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(j) * n + l);
      x[idx] += scale * rng.gaussian();
      if (!problem.real_coefficients) x[idx + 1] += scale * rng.gaussian();
    }
  }
  return x;
}

inline SolveResult solve_over_problem(const GraphProblem& problem, const SolveConfig& config,
                                      bool pinned, Complex pin_z0) {
  RVec base_start = RVec::Zero(problem.dimension());
  if (config.warm_start && !pinned) base_start = problem.pack(config.warm_start->coeffs);

  std::vector<std::future<StartResult>> futures;
  futures.reserve(static_cast<std::size_t>(config.multistart));
  for (int s = 0; s < config.multistart; ++s)
    futures.push_back(std::async(std::launch::async, [&problem, &config, s, &base_start] {
      return run_annealed_start(problem, config, start_vector(problem, config, s, base_start));
    }));

  SolveResult result;
  result.grid = problem.grid.size;
  result.degree = pinned ? problem.degree + 1 : problem.degree;
  result.starts.reserve(futures.size());
  for (auto& f : futures) result.starts.push_back(f.get());

  int best = 0;
  for (int s = 1; s < static_cast<int>(result.starts.size()); ++s)
    if (result.starts[static_cast<std::size_t>(s)].gamma <
        result.starts[static_cast<std::size_t>(best)].gamma)
      best = s;
  result.best_start = best;
  for (const StartResult& sr : result.starts) result.any_stalled |= sr.stalled;

  // re-expand the winner in final coordinates
  const StartResult& winner = result.starts[static_cast<std::size_t>(best)];
  RVec xbest = problem.pack(winner.phi.coeffs);
  result.phi_hat = problem.expand(xbest, pin_z0, pinned);
  result.gamma_hat = problem.raw_grid_max(xbest);

  result.flatness_residual = flatness_report(*problem.scenario, result.phi_hat, problem.grid);

  double disp = 0.0;
  for (std::size_t a = 0; a < result.starts.size(); ++a)
    for (std::size_t b = a + 1; b < result.starts.size(); ++b) {
      if (result.starts[a].stalled || result.starts[b].stalled) continue;
      disp = std::max(disp, coefficient_distance(result.starts[a].phi, result.starts[b].phi));
    }
  result.multistart_dispersion = disp;

  if (problem.scenario->conjugate_symmetric) {
    result.symmetry_residual =
        sup_distance_on_grid(result.phi_hat, conjugate_symmetrize(result.phi_hat), problem.grid);
  }
  return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

// gamma_hat = inf over degree-N analytic maps of the grid max of rho(z, f(z)),
// by annealed smoothed-max descent over multistarts. gamma_hat always equals
// the grid max of the returned phi_hat.
inline SolveResult solve_gamma(const FiberScenario& scenario, const SolveConfig& config) {
  config.validate(scenario.n);
  detail::GraphProblem problem(scenario, config.grid, config.degree, CPoint::Zero(scenario.n),
                               nullptr, config.real_coefficients);
  return detail::solve_over_problem(problem, config, false, Complex(0, 0));
}

struct UniquenessProbe {
  double dispersion = 0.0;  // max pairwise sup-norm distance on the grid, converged runs
  int converged_count = 0;
  std::vector<bool> stalled;
};

inline UniquenessProbe uniqueness_probe(const FiberScenario& scenario, const SolveConfig& config) {
  if (config.multistart < 2) throw ConfigError("uniqueness probe needs multistart >= 2");
  const SolveResult res = solve_gamma(scenario, config);
  UniquenessProbe probe;
  const CircleGrid grid(config.grid);
  for (const StartResult& sr : res.starts) {
    probe.stalled.push_back(sr.stalled);
    if (!sr.stalled) ++probe.converged_count;
  }
  for (std::size_t a = 0; a < res.starts.size(); ++a)
    for (std::size_t b = a + 1; b < res.starts.size(); ++b) {
      if (res.starts[a].stalled || res.starts[b].stalled) continue;
      probe.dispersion =
          std::max(probe.dispersion, sup_distance_on_grid(res.starts[a].phi, res.starts[b].phi, grid));
    }
  return probe;
}

}  // namespace hullscope

#endif  // HULLSCOPE_SOLVER_HPP
