#ifndef HULLSCOPE_ANALYTIC_MAP_HPP
#define HULLSCOPE_ANALYTIC_MAP_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "hullscope/circle_grid.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// Degree-N truncated power series Delta -> C^n; the computational stand-in
// for bounded analytic maps. coeffs[j] is the C^n coefficient of z^j.
struct AnalyticMap {
  int n = 0;
  std::vector<CPoint> coeffs;

  static AnalyticMap zero(int n, int degree) {
    AnalyticMap f;
    f.n = n;
    f.coeffs.assign(static_cast<std::size_t>(degree + 1), CPoint::Zero(n));
    return f;
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  // Horner evaluation; exact for polynomials of degree <= N.
  CPoint eval(Complex z) const {
    if (std::abs(z) > 1.0 + 1e-12)
      throw OutsideDiskError("analytic map evaluated outside the closed disk, |z| = " +
                             std::to_string(std::abs(z)));
    CPoint acc = CPoint::Zero(n);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = z * acc + *it;
    return acc;
  }

  bool real_coefficients(double tol = 0.0) const {
    for (const CPoint& c : coeffs)
      for (Eigen::Index j = 0; j < c.size(); ++j)
        if (std::abs(c[j].imag()) > tol) return false;
    return true;
  }
};

inline std::vector<CPoint> sample_on_grid(const AnalyticMap& f, const CircleGrid& grid) {
  std::vector<CPoint> out(grid.nodes.size());
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) out[k] = f.eval(grid.nodes[k]);
  return out;
}

inline double sup_distance_on_grid(const AnalyticMap& f, const AnalyticMap& g,
                                   const CircleGrid& grid) {
  double d = 0.0;
  for (const Complex& z : grid.nodes) d = std::max(d, (f.eval(z) - g.eval(z)).norm());
  return d;
}

inline double sup_norm_on_grid(const AnalyticMap& f, const CircleGrid& grid) {
  double d = 0.0;
  for (const Complex& z : grid.nodes) d = std::max(d, f.eval(z).norm());
  return d;
}

// max over coefficients (both maps zero-padded to the longer degree)
inline double coefficient_distance(const AnalyticMap& f, const AnalyticMap& g) {
  const std::size_t m = std::max(f.coeffs.size(), g.coeffs.size());
  double d = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    CPoint a = j < f.coeffs.size() ? f.coeffs[j] : CPoint::Zero(f.n);
    CPoint b = j < g.coeffs.size() ? g.coeffs[j] : CPoint::Zero(g.n);
    d = std::max(d, (a - b).lpNorm<Eigen::Infinity>());
  }
  return d;
}

}  // namespace hullscope

#endif  // HULLSCOPE_ANALYTIC_MAP_HPP
