#ifndef HULLSCOPE_SCENARIO_HPP
#define HULLSCOPE_SCENARIO_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hullscope/errors.hpp"
#include "hullscope/laurent.hpp"
#include "hullscope/sampling.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// Affine-in-w form q(z, w) = b(z) + sum_j g_j(z) w_j.
struct AffineForm {
  LaurentPoly constant;  // b
  LaurentVec linear;     // g_j, size n

  Complex value(Complex z, const CPoint& w) const {
    Complex q = constant.eval_circle(z);
    for (std::size_t j = 0; j < linear.size(); ++j)
      q += linear[j].eval_circle(z) * w[static_cast<Eigen::Index>(j)];
    return q;
  }
};

// One term coef * (sum_j |q_j(z,w)|^2)^exponent of a defining function.
struct QuadrancePowerTerm {
  double coef = 1.0;
  double exponent = 1.0;
  std::vector<AffineForm> forms;
};

struct SumOfSquaresParams {
  double offset = 0.0;           // constant additive offset
  LaurentPoly offset_laurent;    // contributes Re(L(z)), z-only
  std::vector<QuadrancePowerTerm> terms;
  LaurentVec anchor;             // interior point of each fiber; empty => origin
};

struct BallParams {
  LaurentVec center;  // rho = |w - a(z)|^2
};

struct EllipsoidParams {
  std::vector<double> semi_axes;  // rho = sum_j |w_j - a_j(z)|^2 / s_j^2
  LaurentVec center;
};

struct ShiftedConjugateParams {};  // rho = |w - (conj z, 0, ..., 0)|

struct CircledRadiusParams {
  LaurentPoly log_radius;  // rho = |w|^2 / r(z)^2, r(z) = exp(Re p(z))
};

struct CustomParams {};  // callback-defined, not serializable

using FamilyParams = std::variant<BallParams, EllipsoidParams, ShiftedConjugateParams,
                                  CircledRadiusParams, SumOfSquaresParams, CustomParams>;

// A fibered defining function rho on Gamma x C^n together with its first and
// second w-derivatives and the constraint level c (the constraint set is the
// level set rho = c; the enclosed fiber is the sublevel set). Immutable after
// construction and safe to share across workers.
struct FiberScenario {
  int n = 2;
  double level = 1.0;
  std::string family_id;
  FamilyParams params;  // kept for serialization / recentering when representable
  bool conjugate_symmetric = false;
  bool analytic_derivatives = true;

  std::function<double(Complex, const CPoint&)> rho;
  // Wirtinger gradient (drho/dw_1, ..., drho/dw_n)
  std::function<CPoint(Complex, const CPoint&)> grad_w;
  // real symmetric 2n x 2n Hessian in coordinates (Re w1, Im w1, ...)
  std::function<RMat(Complex, const CPoint&)> hess_w;
  // point with rho(z, anchor(z)) < level, used to seed radial root finds
  std::function<CPoint(Complex)> anchor;
};

inline CPoint finite_difference_grad(const std::function<double(Complex, const CPoint&)>& rho,
                                     Complex z, const CPoint& w, double step = 1e-6) {
  const Eigen::Index n = w.size();
  CPoint g(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    CPoint wp = w, wm = w;
    wp[j] += step;
    wm[j] -= step;
    const double dx = (rho(z, wp) - rho(z, wm)) / (2.0 * step);
    wp = w;
    wm = w;
    wp[j] += Complex(0, step);
    wm[j] -= Complex(0, step);
    const double dy = (rho(z, wp) - rho(z, wm)) / (2.0 * step);
    g[j] = 0.5 * Complex(dx, -dy);
  }
  return g;
}

inline RMat finite_difference_hess(const std::function<double(Complex, const CPoint&)>& rho,
                                   Complex z, const CPoint& w, double step = 1e-4) {
  const Eigen::Index n2 = 2 * w.size();
  auto shifted = [&](Eigen::Index r, double h) {
    CPoint v = w;
    if (r % 2 == 0)
      v[r / 2] += h;
    else
      v[r / 2] += Complex(0, h);
    return v;
  };
  RMat H(n2, n2);
  const double f0 = rho(z, w);
  for (Eigen::Index r = 0; r < n2; ++r) {
    H(r, r) = (rho(z, shifted(r, step)) - 2.0 * f0 + rho(z, shifted(r, -step))) / (step * step);
    for (Eigen::Index s = r + 1; s < n2; ++s) {
      auto shift2 = [&](double hr, double hs) {
        CPoint v = shifted(r, hr);
        if (s % 2 == 0)
          v[s / 2] += hs;
        else
          v[s / 2] += Complex(0, hs);
        return rho(z, v);
      };
      const double m = (shift2(step, step) - shift2(step, -step) - shift2(-step, step) +
                        shift2(-step, -step)) /
                       (4.0 * step * step);
      H(r, s) = m;
      H(s, r) = m;
    }
  }
  return H;
}

namespace detail {

// Shared evaluator core for rho = offset + Re(L(z)) + sum_k coef_k A_k^m_k,
// A_k = sum_j |q_kj|^2 with q affine in w. Since the q are analytic in w,
// d2A/dw dw vanishes and the Wirtinger blocks have closed forms.
struct SosCore {
  int n;
  SumOfSquaresParams p;

  double value(Complex z, const CPoint& w) const {
    double acc = p.offset + p.offset_laurent.eval_circle(z).real();
    for (const auto& term : p.terms) {
      double a = 0.0;
      for (const auto& f : term.forms) a += std::norm(f.value(z, w));
      acc += term.coef * std::pow(a, term.exponent);
    }
    return acc;
  }

  CPoint grad(Complex z, const CPoint& w) const {
    CPoint g = CPoint::Zero(n);
    for (const auto& term : p.terms) {
      double a = 0.0;
      CPoint ai = CPoint::Zero(n);  // dA/dw_i = sum_j conj(q_j) g_ji
      for (const auto& f : term.forms) {
        const Complex q = f.value(z, w);
        a += std::norm(q);
        for (int i = 0; i < n; ++i)
          ai[i] += std::conj(q) * f.linear[static_cast<std::size_t>(i)].eval_circle(z);
      }
      const double m = term.exponent;
      double factor;
      if (a == 0.0)
        factor = (m == 1.0) ? term.coef : 0.0;  // subgradient choice at the singular locus
      else
        factor = term.coef * m * std::pow(a, m - 1.0);
      g += factor * ai;
    }
    return g;
  }

  RMat hess(Complex z, const CPoint& w) const {
    CMat Hww = CMat::Zero(n, n);
    CMat Hwwb = CMat::Zero(n, n);
    for (const auto& term : p.terms) {
      double a = 0.0;
      CPoint ai = CPoint::Zero(n);
      CMat b = CMat::Zero(n, n);  // B_il = sum_j g_ji conj(g_jl)
      for (const auto& f : term.forms) {
        const Complex q = f.value(z, w);
        a += std::norm(q);
        CPoint lin(n);
        for (int i = 0; i < n; ++i) lin[i] = f.linear[static_cast<std::size_t>(i)].eval_circle(z);
        ai += std::conj(q) * lin;
        b += lin * lin.adjoint();
      }
      const double m = term.exponent;
      const double pm1 = (a == 0.0) ? ((m == 1.0) ? 1.0 : 0.0) : std::pow(a, m - 1.0);
      const double pm2 = (a == 0.0) ? ((m == 2.0) ? 1.0 : 0.0) : std::pow(a, m - 2.0);
      const double c1 = term.coef * m * (m - 1.0) * pm2;
      const double c2 = term.coef * m * pm1;
      Hww += c1 * (ai * ai.transpose());
      Hwwb += c1 * (ai * ai.adjoint()) + c2 * b;
    }
    return assemble_real_hessian(Hww, Hwwb);
  }
};

}  // namespace detail

inline FiberScenario make_sum_of_squares(int n, double level, SumOfSquaresParams params,
                                         std::string family_id = "sum-of-squares") {
  if (n < 2) throw DimensionError("fiber dimension must satisfy n >= 2, got " + std::to_string(n));
  for (auto& term : params.terms) {
    if (!(term.exponent > 0)) throw SchemaError("term exponents must be positive");
    for (auto& f : term.forms)
      if (f.linear.size() != static_cast<std::size_t>(n))
        throw SchemaError("affine form linear part must have n components");
  }
  if (params.anchor.empty()) params.anchor = zero_laurent_vec(n);

  auto core = std::make_shared<detail::SosCore>(detail::SosCore{n, params});

  FiberScenario s;
  s.n = n;
  s.level = level;
  s.family_id = std::move(family_id);
  bool real = params.offset_laurent.real_coefficients() && real_coefficients(params.anchor);
  for (const auto& t : params.terms) {
    for (const auto& f : t.forms)
      if (!f.constant.real_coefficients() || !real_coefficients(f.linear)) real = false;
  }
  s.conjugate_symmetric = real;
  s.params = params;
  s.rho = [core](Complex z, const CPoint& w) { return core->value(z, w); };
  s.grad_w = [core](Complex z, const CPoint& w) { return core->grad(z, w); };
  s.hess_w = [core](Complex z, const CPoint& w) { return core->hess(z, w); };
  LaurentVec anchor = params.anchor;
  s.anchor = [anchor](Complex z) { return eval_circle(anchor, z); };
  return s;
}

inline FiberScenario make_ball(int n, double level, LaurentVec center = {}) {
  if (center.empty()) center = zero_laurent_vec(n);
  if (static_cast<int>(center.size()) != n) throw SchemaError("ball center must have n components");
  SumOfSquaresParams p;
  QuadrancePowerTerm term;
  term.coef = 1.0;
  term.exponent = 1.0;
  for (int j = 0; j < n; ++j) {
    AffineForm f;
    f.constant = Complex(-1.0, 0.0) * center[static_cast<std::size_t>(j)];
    f.linear = zero_laurent_vec(n);
    f.linear[static_cast<std::size_t>(j)] = LaurentPoly::constant(Complex(1, 0));
    term.forms.push_back(std::move(f));
  }
  p.terms.push_back(std::move(term));
  p.anchor = center;
  FiberScenario s = make_sum_of_squares(n, level, std::move(p), "ball");
  s.params = BallParams{center};
  return s;
}

inline FiberScenario make_ellipsoid(int n, double level, std::vector<double> semi_axes,
                                    LaurentVec center = {}) {
  if (static_cast<int>(semi_axes.size()) != n)
    throw SchemaError("ellipsoid needs n semi-axes");
  for (double a : semi_axes)
    if (!(a > 0)) throw SchemaError("ellipsoid semi-axes must be positive");
  if (center.empty()) center = zero_laurent_vec(n);
  if (static_cast<int>(center.size()) != n)
    throw SchemaError("ellipsoid center must have n components");
  SumOfSquaresParams p;
  QuadrancePowerTerm term;
  for (int j = 0; j < n; ++j) {
    AffineForm f;
    const double inv = 1.0 / semi_axes[static_cast<std::size_t>(j)];
    f.constant = Complex(-inv, 0.0) * center[static_cast<std::size_t>(j)];
    f.linear = zero_laurent_vec(n);
    f.linear[static_cast<std::size_t>(j)] = LaurentPoly::constant(Complex(inv, 0));
    term.forms.push_back(std::move(f));
  }
  p.terms.push_back(std::move(term));
  p.anchor = center;
  FiberScenario s = make_sum_of_squares(n, level, std::move(p), "ellipsoid");
  s.params = EllipsoidParams{std::move(semi_axes), center};
  return s;
}

inline FiberScenario make_shifted_conjugate(int n, double level) {
  SumOfSquaresParams p;
  QuadrancePowerTerm term;
  term.exponent = 0.5;  // rho is the distance, not its square
  for (int j = 0; j < n; ++j) {
    AffineForm f;
    if (j == 0) f.constant = LaurentPoly::monomial(-1, Complex(-1, 0));
    f.linear = zero_laurent_vec(n);
    f.linear[static_cast<std::size_t>(j)] = LaurentPoly::constant(Complex(1, 0));
    term.forms.push_back(std::move(f));
  }
  p.terms.push_back(std::move(term));
  p.anchor = zero_laurent_vec(n);
  p.anchor[0] = LaurentPoly::monomial(-1, Complex(1, 0));
  FiberScenario s = make_sum_of_squares(n, level, std::move(p), "shifted-conjugate");
  s.params = ShiftedConjugateParams{};
  s.conjugate_symmetric = true;  // |conj(w) - (z, 0)| = |w - (conj z, 0)|
  return s;
}

inline FiberScenario make_circled_radius(int n, double level, LaurentPoly log_radius) {
  if (n < 2) throw DimensionError("fiber dimension must satisfy n >= 2, got " + std::to_string(n));
  FiberScenario s;
  s.n = n;
  s.level = level;
  s.family_id = "circled-radius";
  s.conjugate_symmetric = log_radius.real_coefficients();
  s.params = CircledRadiusParams{log_radius};
  auto inv_r2 = [log_radius](Complex z) {
    return std::exp(-2.0 * log_radius.eval_circle(z).real());
  };
  s.rho = [inv_r2](Complex z, const CPoint& w) { return w.squaredNorm() * inv_r2(z); };
  s.grad_w = [inv_r2](Complex z, const CPoint& w) -> CPoint {
    return inv_r2(z) * w.conjugate();
  };
  const int nn = n;
  s.hess_w = [inv_r2, nn](Complex z, const CPoint&) {
    return RMat(2.0 * inv_r2(z) * RMat::Identity(2 * nn, 2 * nn));
  };
  s.anchor = [nn](Complex) { return CPoint(CPoint::Zero(nn)); };
  return s;
}

inline FiberScenario make_custom(
    int n, double level, std::function<double(Complex, const CPoint&)> rho,
    std::function<CPoint(Complex, const CPoint&)> grad,
    std::function<RMat(Complex, const CPoint&)> hess,
    std::function<CPoint(Complex)> anchor, bool conjugate_symmetric = false) {
  if (n < 2) throw DimensionError("fiber dimension must satisfy n >= 2, got " + std::to_string(n));
  FiberScenario s;
  s.n = n;
  s.level = level;
  s.family_id = "custom";
  s.params = CustomParams{};
  s.conjugate_symmetric = conjugate_symmetric;
  if (!grad) {
    auto r = rho;
    grad = [r](Complex z, const CPoint& w) { return finite_difference_grad(r, z, w); };
    s.analytic_derivatives = false;
  }
  if (!hess) {
    auto r = rho;
    hess = [r](Complex z, const CPoint& w) { return finite_difference_hess(r, z, w); };
    s.analytic_derivatives = false;
  }
  s.rho = std::move(rho);
  s.grad_w = std::move(grad);
  s.hess_w = std::move(hess);
  if (!anchor) {
    const int nn = n;
    anchor = [nn](Complex) { return CPoint(CPoint::Zero(nn)); };
  }
  s.anchor = std::move(anchor);
  return s;
}

// Samples rho(conj z, conj w) against rho(z, w); used to verify a declared
// conjugate symmetry before trusting it.
inline double conjugate_symmetry_defect(const FiberScenario& s, int probes = 100,
                                        std::uint64_t seed = 17) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const Complex z = std::polar(1.0, 2.0 * kPi * rng.uniform());
    CPoint w(s.n);
    for (int j = 0; j < s.n; ++j) w[j] = 2.0 * rng.gaussian_complex();
    const double a = s.rho(z, w);
    const double b = s.rho(std::conj(z), w.conjugate());
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

}  // namespace hullscope

#endif  // HULLSCOPE_SCENARIO_HPP
