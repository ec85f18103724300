#ifndef HULLSCOPE_FIBER_GEOMETRY_HPP
#define HULLSCOPE_FIBER_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hullscope/circle_grid.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/sampling.hpp"
#include "hullscope/scenario.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// ---------------------------------------------------------------------------
// Complex tangent frames and the strict-hypoconvexity margin
// ---------------------------------------------------------------------------

struct TangentFrame {
  Complex z;
  CPoint w;
  std::vector<CPoint> basis;  // n-1 Hermitian-orthonormal vectors u with sum u_j drho/dw_j = 0
  double margin = 0.0;        // min of the tangent-restricted Hessian form at (z, w)
  CPoint witness;             // unit tangent direction attaining the margin
};

// Margin of a single level-set point: minimum of D2rho[(0,u),(0,u)] over unit
// complex-tangent directions, computed exactly as the smallest eigenvalue of
// the Hessian restricted to the real span of the tangent basis.
inline TangentFrame complex_tangent_basis(const FiberScenario& s, Complex z, const CPoint& w) {
  const CPoint g = s.grad_w(z, w);
  const double gn = g.norm();
  if (!std::isfinite(gn) || gn < 1e-12)
    throw DegenerateGradientError("gradient magnitude " + std::to_string(gn) +
                                  " at or near the singular locus");
  TangentFrame frame;
  frame.z = z;
  frame.w = w;
  frame.basis = orthonormal_tangent_basis(g);
  if (static_cast<int>(frame.basis.size()) != s.n - 1)
    throw DegenerateGradientError("tangent basis construction degenerated");
  auto [eig, dir] = restricted_hessian_min(s.hess_w(z, w), frame.basis);
  frame.margin = eig;
  frame.witness = dir;
  return frame;
}

// ---------------------------------------------------------------------------
// Level-set sampling by radial root finding from the fiber anchor
// ---------------------------------------------------------------------------

// Bisection along w = anchor + t * direction for rho = level; tolerance 1e-12
// relative in t, at most 200 iterations.
inline CPoint level_crossing(const FiberScenario& s, Complex z, const CPoint& direction) {
  const CPoint a = s.anchor(z);
  const double c = s.level;
  if (!(s.rho(z, a) < c))
    throw RootFindFailureError("anchor is not strictly inside the fiber (rho(anchor) >= level)");
  double lo = 0.0, hi = 1.0;
  int expand = 0;
  while (s.rho(z, a + hi * direction) < c) {
    lo = hi;
    hi *= 2.0;
    if (++expand > 60)
      throw RootFindFailureError("ray from the fiber anchor never crosses the level set");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s.rho(z, a + mid * direction) < c)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  return a + 0.5 * (lo + hi) * direction;
}

inline std::vector<CPoint> sample_fiber_boundary(const FiberScenario& s, Complex z, int count,
                                                 std::uint64_t seed = 0x51e0u) {
  std::vector<CPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const CPoint& d : unit_sphere_directions(s.n, count, seed))
    out.push_back(level_crossing(s, z, d));
  return out;
}

// ---------------------------------------------------------------------------
// Hypoconvexity certification at sampled resolution
// ---------------------------------------------------------------------------

struct LevelSample {
  int z_index = 0;
  CPoint w;
  double kappa = 0.0;
  CPoint witness;
};

struct HypoconvexityReport {
  int grid_size = 0;
  int fiber_samples = 0;
  int tangent_probes = 0;
  std::vector<LevelSample> samples;
  double kappa_min = 0.0;
  LevelSample witness;
  bool strictly_hypoconvex = false;
};

// kappa_min = min over level-set samples (and, as a cross-check, over probed
// unit tangent directions) of the tangent Hessian form. The eigen-restricted
// minimum per sample already dominates any probe, so probes can only confirm.
inline HypoconvexityReport hypoconvexity_margin(const FiberScenario& s, const CircleGrid& grid,
                                                int fiber_samples, int tangent_probes) {
  HypoconvexityReport rep;
  rep.grid_size = grid.size;
  rep.fiber_samples = fiber_samples;
  rep.tangent_probes = tangent_probes;
  const auto dirs = unit_sphere_directions(s.n, fiber_samples);
  rep.samples.reserve(grid.nodes.size() * dirs.size());
  bool first = true;
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const Complex z = grid.nodes[k];
    for (const CPoint& d : dirs) {
      const CPoint w = level_crossing(s, z, d);
      const TangentFrame frame = complex_tangent_basis(s, z, w);
      double kappa = frame.margin;
      CPoint witness = frame.witness;
      if (tangent_probes > 0 && s.n > 1) {
        // sampled directions inside the tangent space
        const auto tdirs = unit_sphere_directions(s.n - 1, tangent_probes,
                                                  derive_seed(0x7a9e, k));
        const RMat H = s.hess_w(z, w);
        for (const CPoint& t : tdirs) {
          CPoint u = CPoint::Zero(s.n);
          for (std::size_t a = 0; a < frame.basis.size(); ++a)
            u += t[static_cast<Eigen::Index>(a)] * frame.basis[a];
          const RVec x = embed_real(u);
          const double q = x.dot(H * x);
          if (q < kappa) {
            kappa = q;
            witness = u;
          }
        }
      }
      LevelSample sample{static_cast<int>(k), w, kappa, witness};
      if (first || kappa < rep.kappa_min) {
        rep.kappa_min = kappa;
        rep.witness = sample;
        first = false;
      }
      rep.samples.push_back(std::move(sample));
    }
  }
  rep.strictly_hypoconvex = rep.kappa_min > 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Center selector: push a boundary point a short distance inward
// ---------------------------------------------------------------------------

struct CenterField {
  int grid_size = 0;
  double push_depth = 0.0;
  std::vector<CPoint> values;  // S(z_k)
};

// S(z) = b(z) + r n(z, b(z)) with b a boundary point (radial root find along
// the first coordinate axis) and n the inward unit normal -conj(grad)/|grad|.
inline CenterField center_selector(const FiberScenario& s, const CircleGrid& grid,
                                   double push_depth) {
  if (!(push_depth > 0)) throw ConfigError("push depth must be positive");
  CenterField field;
  field.grid_size = grid.size;
  field.push_depth = push_depth;
  field.values.reserve(grid.nodes.size());
  const CPoint e1 = unit_vector(s.n, 0);
  for (const Complex& z : grid.nodes) {
    const CPoint b = level_crossing(s, z, e1);
    const CPoint g = s.grad_w(z, b);
    const double gn = g.norm();
    if (!std::isfinite(gn) || gn < 1e-12)
      throw DegenerateGradientError("degenerate gradient at fiber boundary point");
    const CPoint inward = -g.conjugate() / gn;
    const CPoint sz = b + push_depth * inward;
    if (!(s.rho(z, sz) < s.level))
      throw PushTooDeepError("pushed point left the fiber; shrink the push depth");
    field.values.push_back(sz);
  }
  return field;
}

// ---------------------------------------------------------------------------
// Smooth max surgery in the value domain
// ---------------------------------------------------------------------------

namespace detail {

// Convolution of |t| with the quartic kernel (15/16w)(1 - (u/w)^2)^2 on
// [-w, w]: equals |t| exactly for |t| >= w, is C^4 at the band edges, C^inf
// inside, convex, and >= |t|. Closed forms throughout.
inline double smooth_abs(double t, double width) {
  const double x = t / width;
  if (std::abs(x) >= 1.0) return std::abs(t);
  const double x2 = x * x;
  return width * ((15.0 / 8.0) * (x2 / 2.0 - x2 * x2 / 6.0 + x2 * x2 * x2 / 30.0) + 5.0 / 16.0);
}

inline double smooth_abs_d1(double t, double width) {
  const double x = t / width;
  if (x >= 1.0) return 1.0;
  if (x <= -1.0) return -1.0;
  return (15.0 / 8.0) * (x - 2.0 * x * x * x / 3.0 + std::pow(x, 5) / 5.0);
}

inline double smooth_abs_d2(double t, double width) {
  const double x = t / width;
  if (std::abs(x) >= 1.0) return 0.0;
  const double y = 1.0 - x * x;
  return (15.0 / 8.0) * y * y / width;
}

}  // namespace detail

// C^2+ combination agreeing with max(rho1, rho2) exactly outside the band
// |rho1 - rho2| <= width:  m(a, b) = (a+b)/2 + S(a-b), S = smooth_abs/2.
// S is convex and |S'| <= 1/2, so m is jointly convex, nondecreasing in each
// argument and shift-equivariant; the midpoint inequality of either input
// survives with the same constant.
inline FiberScenario smooth_max_combine(const FiberScenario& rho1, const FiberScenario& rho2,
                                        double width) {
  if (rho1.n != rho2.n) throw ConfigError("smooth max: scenarios have different dimensions");
  if (!(width > 0)) throw ConfigError("smooth max: mollification width must be positive");
  if (std::abs(rho1.level - rho2.level) > 1e-9 * std::max(1.0, std::abs(rho1.level)))
    throw ConfigError("smooth max: scenarios must share the constraint level");
  const double c = rho1.level;

  // Lemma-style gradient ordering |D rho1| >= |D rho2| on the shared level
  // set, checked at sampled points (strict reversal beyond slack rejects).
  {
    const CircleGrid grid(64);
    const auto dirs = unit_sphere_directions(rho1.n, 8);
    for (const Complex& z : grid.nodes) {
      for (const CPoint& d : dirs) {
        const CPoint w = level_crossing(rho1, z, d);
        if (std::abs(rho2.rho(z, w) - c) > 1e-6 * std::max(1.0, std::abs(c)))
          throw ConfigError("smooth max: inputs do not share the level set");
        const double g1 = rho1.grad_w(z, w).norm();
        const double g2 = rho2.grad_w(z, w).norm();
        if (g2 > g1 + 1e-9)
          throw GradientOrderViolationError(
              "gradient ordering |D rho1| >= |D rho2| fails on the level set (" +
              std::to_string(g1) + " < " + std::to_string(g2) + ")");
      }
    }
  }

  auto r1 = std::make_shared<FiberScenario>(rho1);
  auto r2 = std::make_shared<FiberScenario>(rho2);

  FiberScenario s;
  s.n = rho1.n;
  s.level = c;
  s.family_id = "smooth-max(" + rho1.family_id + "," + rho2.family_id + ")";
  s.params = CustomParams{};
  s.conjugate_symmetric = rho1.conjugate_symmetric && rho2.conjugate_symmetric;
  s.analytic_derivatives = rho1.analytic_derivatives && rho2.analytic_derivatives;
  // outside the band the branch is selected literally, so equality with the
  // pointwise max is bitwise, not within rounding of the blend formula
  s.rho = [r1, r2, width](Complex z, const CPoint& w) {
    const double a = r1->rho(z, w), b = r2->rho(z, w);
    if (std::abs(a - b) >= width) return std::max(a, b);
    return 0.5 * (a + b) + 0.5 * detail::smooth_abs(a - b, width);
  };
  s.grad_w = [r1, r2, width](Complex z, const CPoint& w) -> CPoint {
    const double a = r1->rho(z, w), b = r2->rho(z, w);
    if (a - b >= width) return r1->grad_w(z, w);
    if (b - a >= width) return r2->grad_w(z, w);
    const double sp = 0.5 * detail::smooth_abs_d1(a - b, width);
    return (0.5 + sp) * r1->grad_w(z, w) + (0.5 - sp) * r2->grad_w(z, w);
  };
  s.hess_w = [r1, r2, width](Complex z, const CPoint& w) -> RMat {
    const double a = r1->rho(z, w), b = r2->rho(z, w);
    if (a - b >= width) return r1->hess_w(z, w);
    if (b - a >= width) return r2->hess_w(z, w);
    const double sp = 0.5 * detail::smooth_abs_d1(a - b, width);
    const double spp = 0.5 * detail::smooth_abs_d2(a - b, width);
    const RVec dg = real_gradient(r1->grad_w(z, w)) - real_gradient(r2->grad_w(z, w));
    RMat H = (0.5 + sp) * r1->hess_w(z, w) + (0.5 - sp) * r2->hess_w(z, w);
    H += spp * (dg * dg.transpose());
    return H;
  };
  s.anchor = [r1](Complex z) { return r1->anchor(z); };
  return s;
}

// ---------------------------------------------------------------------------
// Midpoint convexity probes (collar checks for smooth-max outputs)
// ---------------------------------------------------------------------------

struct MidpointConvexityCheck {
  double h = 0.0;          // probe step
  CPoint v;                // unit probe direction
  double angle_tol = 0.0;  // admissible angle to the complex tangent space
  double constant = 0.0;   // required C in the h^2 lower bound
  double gain = 0.0;       // measured midpoint gain divided by h^2
  bool pass = false;
};

inline MidpointConvexityCheck midpoint_convexity_check(const FiberScenario& s, Complex z,
                                                       const CPoint& w, double h, const CPoint& v,
                                                       double constant, double angle_tol = 0.0) {
  MidpointConvexityCheck chk;
  chk.h = h;
  chk.v = v;
  chk.angle_tol = angle_tol;
  chk.constant = constant;
  const double lhs = 0.5 * (s.rho(z, w + h * v) + s.rho(z, w - h * v));
  chk.gain = (lhs - s.rho(z, w)) / (h * h);
  chk.pass = chk.gain >= constant;
  return chk;
}

// Unit directions within angle_tol of the complex tangent space at (z, w):
// tangent vectors tilted toward the normal by at most angle_tol.
inline std::vector<CPoint> tangent_cone_directions(const FiberScenario& s, Complex z,
                                                   const CPoint& w, double angle_tol, int count,
                                                   std::uint64_t seed = 0xbead) {
  const TangentFrame frame = complex_tangent_basis(s, z, w);
  const CPoint g = s.grad_w(z, w);
  const CPoint normal = g.conjugate() / g.norm();
  SplitMix64 rng(seed);
  std::vector<CPoint> dirs;
  const auto tdirs = unit_sphere_directions(s.n - 1, count, derive_seed(seed, 1));
  for (const CPoint& t : tdirs) {
    CPoint u = CPoint::Zero(s.n);
    for (std::size_t a = 0; a < frame.basis.size(); ++a)
      u += t[static_cast<Eigen::Index>(a)] * frame.basis[a];
    const double tilt = angle_tol * rng.uniform();
    CPoint d = std::cos(tilt) * u + std::sin(tilt) * normal;
    dirs.push_back(d / d.norm());
    if (static_cast<int>(dirs.size()) >= count) break;
  }
  return dirs;
}

// ---------------------------------------------------------------------------
// Dual-complement transform w -> grad(w) / sum_j w_j grad_j(w)
// ---------------------------------------------------------------------------

// Maps fiber boundary samples to dual fiber boundary samples. The fiber must
// be positioned star-shaped about the origin (translate by S(z) first); the
// map is invariant under rescaling of the defining function.
inline std::vector<CPoint> dual_transform(const FiberScenario& s, Complex z,
                                          const std::vector<CPoint>& boundary_samples) {
  std::vector<CPoint> out;
  out.reserve(boundary_samples.size());
  for (const CPoint& w : boundary_samples) {
    const CPoint g = s.grad_w(z, w);
    Complex denom(0, 0);
    for (Eigen::Index j = 0; j < w.size(); ++j) denom += w[j] * g[j];
    if (std::abs(denom) < 1e-12 * std::max(1.0, g.norm() * w.norm()))
      throw VanishingDenominatorError(
          "sum_j w_j drho/dw_j vanished; fiber is not star-shaped about the origin here");
    out.push_back(g / denom);
  }
  return out;
}

}  // namespace hullscope

#endif  // HULLSCOPE_FIBER_GEOMETRY_HPP
