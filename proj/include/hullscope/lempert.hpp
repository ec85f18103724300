#ifndef HULLSCOPE_LEMPERT_HPP
#define HULLSCOPE_LEMPERT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hullscope/errors.hpp"
#include "hullscope/sampling.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// ---------------------------------------------------------------------------
// Model fibers: balls and ellipsoids, where every extremal-disc identity has
// a closed form. A ball is stored as an ellipsoid with equal semi-axes.
// ---------------------------------------------------------------------------

enum class FiberKind { ball, ellipsoid };

struct ModelFiber {
  FiberKind kind = FiberKind::ball;
  CPoint center;               // pole S
  std::vector<double> axes;    // semi-axes a_j (all equal for a ball)

  int n() const { return static_cast<int>(center.size()); }

  static ModelFiber make_ball(CPoint center, double radius) {
    if (!(radius > 0)) throw ConfigError("ball radius must be positive");
    ModelFiber f;
    f.kind = FiberKind::ball;
    f.axes.assign(static_cast<std::size_t>(center.size()), radius);
    f.center = std::move(center);
    return f;
  }

  static ModelFiber make_ellipsoid(CPoint center, std::vector<double> semi_axes) {
    if (semi_axes.size() != static_cast<std::size_t>(center.size()))
      throw ConfigError("ellipsoid needs one semi-axis per dimension");
    for (double a : semi_axes)
      if (!(a > 0)) throw ConfigError("ellipsoid semi-axes must be positive");
    ModelFiber f;
    f.kind = FiberKind::ellipsoid;
    f.center = std::move(center);
    f.axes = std::move(semi_axes);
    return f;
  }

  // defining function: 1 on the model boundary, 0 at the pole
  double defining(const CPoint& w) const {
    double acc = 0.0;
    for (int j = 0; j < n(); ++j)
      acc += std::norm(w[j] - center[j]) / (axes[static_cast<std::size_t>(j)] *
                                            axes[static_cast<std::size_t>(j)]);
    return acc;
  }

  double inradius() const { return *std::min_element(axes.begin(), axes.end()); }

  // scaled coordinates y = D^-1 (w - S) in which the fiber is the unit ball
  CPoint to_ball(const CPoint& w) const {
    CPoint y(n());
    for (int j = 0; j < n(); ++j) y[j] = (w[j] - center[j]) / axes[static_cast<std::size_t>(j)];
    return y;
  }

  CPoint from_ball(const CPoint& y) const {
    CPoint w(n());
    for (int j = 0; j < n(); ++j) w[j] = center[j] + axes[static_cast<std::size_t>(j)] * y[j];
    return w;
  }
};

// ---------------------------------------------------------------------------
// Extremal discs through the pole and their holomorphic left inverses
// ---------------------------------------------------------------------------

// For the unit ball the extremal disc through the center in direction nu is
// the linear disc lambda -> lambda nu with left inverse <w, nu>; general model
// fibers are carried to that case by the diagonal biholomorphism.
struct ExtremalDisc {
  ModelFiber fiber;
  CPoint direction;       // nu, |nu| = 1
  CPoint ball_direction;  // nu' = normalize(D^-1 nu)

  CPoint disc(Complex lambda) const { return fiber.from_ball(lambda * ball_direction); }

  Complex left_inverse(const CPoint& w) const { return hdot(fiber.to_ball(w), ball_direction); }

  // f'(0) = D nu', a positive multiple of nu
  CPoint derivative_at_zero() const {
    CPoint d(fiber.n());
    for (int j = 0; j < fiber.n(); ++j)
      d[j] = fiber.axes[static_cast<std::size_t>(j)] * ball_direction[j];
    return d;
  }
};

inline ExtremalDisc extremal_disc(const ModelFiber& fiber, const CPoint& nu) {
  if (std::abs(nu.norm() - 1.0) > 1e-12)
    throw BadDirectionError("extremal disc direction must be a unit vector, |nu| = " +
                            std::to_string(nu.norm()));
  ExtremalDisc d;
  d.fiber = fiber;
  d.direction = nu;
  CPoint scaled(fiber.n());
  for (int j = 0; j < fiber.n(); ++j) scaled[j] = nu[j] / fiber.axes[static_cast<std::size_t>(j)];
  d.ball_direction = scaled / scaled.norm();
  return d;
}

// ---------------------------------------------------------------------------
// The Green-type function u1 = exp(2 tau), tau = max_nu log |F_nu|
// ---------------------------------------------------------------------------

namespace detail {

// Deterministic projected gradient ascent of a smooth function on the unit
// sphere of C^n; numerical Wirtinger gradient, backtracking inside each step.
template <class F>
std::pair<double, CPoint> sphere_ascend(F&& objective, CPoint nu, int steps) {
  double best = objective(nu);
  double step_size = 0.25;
  const double fd = 1e-6;
  const Eigen::Index n = nu.size();
  for (int it = 0; it < steps; ++it) {
    RVec grad(2 * n);
    for (Eigen::Index r = 0; r < 2 * n; ++r) {
      CPoint p = nu, m = nu;
      const Complex dh = (r % 2 == 0) ? Complex(fd, 0) : Complex(0, fd);
      p[r / 2] += dh;
      m[r / 2] -= dh;
      grad[r] = (objective(p / p.norm()) - objective(m / m.norm())) / (2.0 * fd);
    }
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      CPoint cand = embed_complex(RVec(embed_real(nu) + step_size * grad));
      const double cn = cand.norm();
      if (!(cn > 1e-12)) break;
      cand /= cn;
      const double v = objective(cand);
      if (v > best + 1e-15) {
        best = v;
        nu = cand;
        improved = true;
        step_size *= 1.5;
        break;
      }
      step_size *= 0.5;
    }
    if (!improved && step_size < 1e-14) break;
  }
  return {best, nu};
}

}  // namespace detail

struct GreenData {
  ModelFiber fiber;

  // closed form: on model fibers u1 coincides with the defining function
  double value(const CPoint& w) const { return fiber.defining(w); }

  CPoint pole() const { return fiber.center; }

  // independent route: max over sampled extremal directions of |F_nu(w)|^2,
  // refined by projected ascent on the direction sphere
  double sampled_value(const CPoint& w, int nu_count, int ascent_steps = 20) const {
    const CPoint y = fiber.to_ball(w);
    auto objective = [&](const CPoint& nu) {
      CPoint scaled(fiber.n());
      for (int j = 0; j < fiber.n(); ++j)
        scaled[j] = nu[j] / fiber.axes[static_cast<std::size_t>(j)];
      return std::norm(hdot(y, scaled / scaled.norm()));
    };
    double best = -1.0;
    CPoint best_nu;
    for (const CPoint& nu : unit_sphere_directions(fiber.n(), nu_count)) {
      const double v = objective(nu);
      if (v > best) {
        best = v;
        best_nu = nu;
      }
    }
    if (ascent_steps > 0) best = detail::sphere_ascend(objective, best_nu, ascent_steps).first;
    return best;
  }
};

inline GreenData green_u1(const ModelFiber& fiber) { return GreenData{fiber}; }

// ---------------------------------------------------------------------------
// The epsilon-modified left inverse and its direction maximum
// ---------------------------------------------------------------------------

struct EpsilonInverse {
  ModelFiber fiber;
  double epsilon = 0.0;

  // F_nu^eps(w)^2 = |F_nu(w)|^2 + eps |w - f_nu(F_nu(w))|^2
  double value_sq(const CPoint& w, const CPoint& nu) const {
    const ExtremalDisc d = extremal_disc(fiber, nu / nu.norm());
    const Complex lambda = d.left_inverse(w);
    return std::norm(lambda) + epsilon * (w - d.disc(lambda)).squaredNorm();
  }
};

struct EpsilonMaxResult {
  double value = 0.0;
  bool region_violation = false;  // u1(w) > 1/2: outside the guaranteed-equality region
  CPoint arg_nu;
};

inline EpsilonMaxResult epsilon_inverse_max(const ModelFiber& fiber, double epsilon,
                                            const CPoint& w, int nu_count,
                                            int ascent_steps = 20) {
  const CPoint y = fiber.to_ball(w);
  auto objective = [&](const CPoint& nu) {
    // value_sq on ball coordinates (avoids revalidating |nu| per evaluation)
    CPoint scaled(fiber.n());
    for (int j = 0; j < fiber.n(); ++j)
      scaled[j] = nu[j] / fiber.axes[static_cast<std::size_t>(j)];
    const CPoint bd = scaled / scaled.norm();
    const Complex lambda = hdot(y, bd);
    const CPoint diff = w - fiber.from_ball(lambda * bd);
    return std::norm(lambda) + epsilon * diff.squaredNorm();
  };
  EpsilonMaxResult res;
  res.region_violation = fiber.defining(w) > 0.5;
  double best = -1.0;
  CPoint best_nu;
  for (const CPoint& nu : unit_sphere_directions(fiber.n(), nu_count)) {
    const double v = objective(nu);
    if (v > best) {
      best = v;
      best_nu = nu;
    }
  }
  if (ascent_steps > 0) {
    auto [v, nu] = detail::sphere_ascend(objective, best_nu, ascent_steps);
    best = v;
    best_nu = nu;
  }
  res.value = best;
  res.arg_nu = best_nu;
  return res;
}

// Admissible epsilon: a quarter of the minimal tangent-Hessian eigenvalue of
// u1 over the shell 1/3 <= u1 <= 2/3, halved until the sandwich
// u1 <= max_nu (F^eps)^2 <= u1 holds on the region u1 <= 1/2 at probe points.
inline double select_epsilon(const ModelFiber& fiber, int probe_count = 1000,
                             double tol = 1e-4) {
  const GreenData green = green_u1(fiber);
  // tangent-Hessian minimum of u1 on the shell (u1 is quadratic; evaluate the
  // restriction at sampled shell points)
  const int n = fiber.n();
  CMat Hwwb = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    Hwwb(j, j) = 1.0 / (fiber.axes[static_cast<std::size_t>(j)] *
                        fiber.axes[static_cast<std::size_t>(j)]);
  const RMat H = assemble_real_hessian(CMat::Zero(n, n), Hwwb);
  double min_eig = std::numeric_limits<double>::infinity();
  const auto dirs = unit_sphere_directions(n, 64);
  for (double level : {1.0 / 3.0, 0.45, 0.5, 0.55, 2.0 / 3.0}) {
    for (const CPoint& d : dirs) {
      const CPoint w = fiber.from_ball(std::sqrt(level) * d);
      CPoint g(n);
      for (int j = 0; j < n; ++j)
        g[j] = std::conj(w[j] - fiber.center[j]) / (fiber.axes[static_cast<std::size_t>(j)] *
                                                    fiber.axes[static_cast<std::size_t>(j)]);
      const auto basis = orthonormal_tangent_basis(g);
      if (basis.empty()) continue;
      min_eig = std::min(min_eig, restricted_hessian_min(H, basis).first);
    }
  }
  double eps = 0.25 * min_eig;
  // probe points filling u1 <= 1/2 (five radii per direction)
  const int dir_count = std::max(8, probe_count / 5);
  const auto probe_dirs = unit_sphere_directions(n, dir_count, 0xfeedu);
  for (int halvings = 0; halvings < 24; ++halvings) {
    bool ok = true;
    for (const CPoint& d : probe_dirs) {
      for (double t : {0.15, 0.3, 0.45, 0.6, 0.7071067811865476}) {
        const CPoint w = fiber.from_ball(t * d);
        const double u1 = green.value(w);
        if (u1 > 0.5 + 1e-12) continue;
        const double m = epsilon_inverse_max(fiber, eps, w, 128, 20).value;
        if (m < u1 - tol || m > u1 + tol) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return eps;
    eps *= 0.5;
  }
  throw ConfigError("epsilon selection failed to satisfy the sandwich property");
}

// Minimal eigenvalue of the real Hessian of u1 over probes in the punctured
// ball 0 < |w - S| < delta. The Hessian is differenced from the evaluator so
// the check is not circular against the closed form.
inline double pole_convexity_check(const ModelFiber& fiber, double delta, int probes) {
  if (!(delta > 0) || delta >= fiber.inradius())
    throw ConfigError("delta must lie in (0, inradius)");
  const GreenData green = green_u1(fiber);
  const int n = fiber.n();
  auto u1 = [&](const CPoint& w) { return green.value(w); };
  double min_eig = std::numeric_limits<double>::infinity();
  const auto dirs = unit_sphere_directions(n, std::max(1, probes / 3));
  const double h = 1e-4;
  for (const CPoint& d : dirs) {
    for (double frac : {0.25, 0.5, 0.75}) {
      const CPoint w = fiber.center + (frac * delta) * d;
      RMat H(2 * n, 2 * n);
      auto shifted = [&](Eigen::Index r, double t) {
        CPoint v = w;
        if (r % 2 == 0)
          v[r / 2] += t;
        else
          v[r / 2] += Complex(0, t);
        return v;
      };
      const double f0 = u1(w);
      for (Eigen::Index r = 0; r < 2 * n; ++r) {
        H(r, r) = (u1(shifted(r, h)) - 2 * f0 + u1(shifted(r, -h))) / (h * h);
        for (Eigen::Index s2 = r + 1; s2 < 2 * n; ++s2) {
          auto shift2 = [&](double hr, double hs) {
            CPoint v = shifted(r, hr);
            if (s2 % 2 == 0)
              v[s2 / 2] += hs;
            else
              v[s2 / 2] += Complex(0, hs);
            return u1(v);
          };
          const double m = (shift2(h, h) - shift2(h, -h) - shift2(-h, h) + shift2(-h, -h)) /
                           (4 * h * h);
          H(r, s2) = m;
          H(s2, r) = m;
        }
      }
      Eigen::SelfAdjointEigenSolver<RMat> es(H);
      min_eig = std::min(min_eig, es.eigenvalues()[0]);
    }
  }
  return min_eig;
}

}  // namespace hullscope

#endif  // HULLSCOPE_LEMPERT_HPP
