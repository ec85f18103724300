// Test-side oracles, independent of the library implementation paths they
// check: a naive DFT, finite differences on rho alone, lattice brute force
// for small minimax problems, and Gauss-Legendre quadrature.
#ifndef HULLSCOPE_TESTS_ORACLES_HPP
#define HULLSCOPE_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "hullscope/scenario.hpp"
#include "hullscope/types.hpp"

namespace oracles {

using hullscope::Complex;
using hullscope::CPoint;
using hullscope::RMat;
using hullscope::RVec;

// O(M^2) DFT: X_m = sum_k x_k e^{-2 pi i k m / M}
inline std::vector<Complex> naive_dft(const std::vector<Complex>& x) {
  const std::size_t m = x.size();
  std::vector<Complex> out(m, Complex(0, 0));
  for (std::size_t f = 0; f < m; ++f)
    for (std::size_t k = 0; k < m; ++k)
      out[f] += x[k] * std::polar(1.0, -2.0 * hullscope::kPi * static_cast<double>(k * f) /
                                            static_cast<double>(m));
  return out;
}

// central differences straight on rho (independent of the library's own
// finite-difference helpers)
inline CPoint fd_wirtinger(const std::function<double(Complex, const CPoint&)>& rho, Complex z,
                           const CPoint& w, double h = 1e-5) {
  CPoint g(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    CPoint a = w, b = w;
    a[j] += h;
    b[j] -= h;
    const double dx = (rho(z, a) - rho(z, b)) / (2 * h);
    a = w;
    b = w;
    a[j] += Complex(0, h);
    b[j] -= Complex(0, h);
    const double dy = (rho(z, a) - rho(z, b)) / (2 * h);
    g[j] = 0.5 * Complex(dx, -dy);
  }
  return g;
}

inline RMat fd_real_hessian(const std::function<double(Complex, const CPoint&)>& rho, Complex z,
                            const CPoint& w, double h = 5e-4) {
  const Eigen::Index d = 2 * w.size();
  auto at = [&](Eigen::Index r, double t) {
    CPoint v = w;
    if (r % 2 == 0)
      v[r / 2] += t;
    else
      v[r / 2] += Complex(0, t);
    return v;
  };
  RMat H(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index s = 0; s < d; ++s) {
      if (r == s) {
        H(r, r) = (rho(z, at(r, h)) - 2 * rho(z, w) + rho(z, at(r, -h))) / (h * h);
      } else {
        auto at2 = [&](double tr, double ts) {
          CPoint v = at(r, tr);
          if (s % 2 == 0)
            v[s / 2] += ts;
          else
            v[s / 2] += Complex(0, ts);
          return rho(z, v);
        };
        H(r, s) = (at2(h, h) - at2(h, -h) - at2(-h, h) + at2(-h, -h)) / (4 * h * h);
      }
    }
  return H;
}

// Lattice brute force with zoom: minimize objective(x) over [lo, hi]^dim on a
// lattice, then repeat on a box two cells wide around the best point.
// Deterministic.
inline std::pair<double, RVec> lattice_minimize(const std::function<double(const RVec&)>& objective,
                                                int dim, double lo, double hi, int points_per_axis,
                                                int zoom_stages = 2) {
  RVec center = RVec::Constant(dim, 0.5 * (lo + hi));
  double half_width = 0.5 * (hi - lo);
  RVec best_x = center;
  double best = objective(best_x);
  for (int stage = 0; stage < zoom_stages; ++stage) {
    const RVec origin = (stage == 0) ? RVec(RVec::Constant(dim, lo)) : RVec(best_x.array() - half_width);
    const double step = 2.0 * half_width / (points_per_axis - 1);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    RVec stage_best_x = best_x;
    double stage_best = best;
    while (true) {
      RVec x(dim);
      for (int d = 0; d < dim; ++d) x[d] = origin[d] + idx[static_cast<std::size_t>(d)] * step;
      const double v = objective(x);
      if (v < stage_best) {
        stage_best = v;
        stage_best_x = x;
      }
      int d = 0;
      for (; d < dim; ++d) {
        if (++idx[static_cast<std::size_t>(d)] < points_per_axis) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
      if (d == dim) break;
    }
    best = stage_best;
    best_x = stage_best_x;
    half_width = step;  // two cells wide around the winner
  }
  return {best, best_x};
}

// nodes/weights for 32-point Gauss-Legendre on [-1, 1], computed by Newton on
// Legendre polynomials (good to ~1e-15)
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(hullscope::kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double d = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * d * d);
        break;
      }
    }
  }
}

// quadrature oracle for the smoothed |t|: integral of |t - u| against the
// quartic kernel (15/16w)(1 - (u/w)^2)^2 over [-w, w], split at the kink u = t
inline double smoothed_abs_quadrature(double t, double width) {
  if (std::abs(t) >= width) return std::abs(t);
  std::vector<double> nodes, weights;
  gauss_legendre(48, nodes, weights);
  auto panel = [&](double a, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double u = 0.5 * (a + b) + 0.5 * (b - a) * nodes[i];
      const double x = u / width;
      const double k = 15.0 / (16.0 * width) * std::pow(1.0 - x * x, 2);
      acc += 0.5 * (b - a) * weights[i] * k * std::abs(t - u);
    }
    return acc;
  };
  return panel(-width, t) + panel(t, width);
}

// Schwarz-Pick closed form: the minimal sup over the circle of
// |f1(z) - conj(z)| over analytic f1 with f1(0) = x >= 0 is m with
// m - 1/m = x, i.e. m = (x + sqrt(x^2 + 4)) / 2.
inline double shifted_conjugate_membership_value(double x) {
  return 0.5 * (x + std::sqrt(x * x + 4.0));
}

}  // namespace oracles

#endif  // HULLSCOPE_TESTS_ORACLES_HPP
