#ifndef HULLSCOPE_HARDY_HPP
#define HULLSCOPE_HARDY_HPP

#include <cmath>
#include <vector>

#include "hullscope/analytic_map.hpp"
#include "hullscope/circle_grid.hpp"
#include "hullscope/errors.hpp"
#include "hullscope/types.hpp"

namespace hullscope {

// In-place radix-2 Cooley-Tukey. Forward: X_m = sum_k x_k e^{-2 pi i k m / M}.
inline void fft_radix2(std::vector<Complex>& a, bool inverse = false) {
  const std::size_t m = a.size();
  if (m == 0 || (m & (m - 1)) != 0)
    throw ConfigError("fft size must be a power of two, got " + std::to_string(m));
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const Complex wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < m; i += len) {
      Complex w(1, 0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (Complex& c : a) c /= static_cast<double>(m);
}

// Non-negative-frequency part of boundary samples, truncated at degree
// M/2 - 1. The negative and Nyquist bins are discarded, so the operation is a
// projection (idempotent up to one resampling roundtrip of roundoff).
inline AnalyticMap project_analytic(const std::vector<CPoint>& samples) {
  const std::size_t m = samples.size();
  if (m < 4 || (m & (m - 1)) != 0)
    throw ConfigError("sample count must be a power of two >= 4");
  const int n = static_cast<int>(samples[0].size());
  const int degree = static_cast<int>(m) / 2 - 1;
  AnalyticMap f = AnalyticMap::zero(n, degree);
  std::vector<Complex> buf(m);
  for (int comp = 0; comp < n; ++comp) {
    for (std::size_t k = 0; k < m; ++k) buf[k] = samples[k][comp];
    fft_radix2(buf);
    for (int j = 0; j <= degree; ++j)
      f.coeffs[static_cast<std::size_t>(j)][comp] = buf[static_cast<std::size_t>(j)] / static_cast<double>(m);
  }
  return f;
}

// Harmonic extension of real boundary samples to an interior point, computed
// spectrally: u(z0) = a_0 + sum_{m>=1} 2 Re(a_m z0^m). Exact on sampled
// trigonometric polynomials of degree < M/2 (a direct Poisson-kernel sum is
// not: its aliases decay only like |z0|^(M/2)).
inline double harmonic_extension(const std::vector<double>& boundary, Complex z0) {
  if (std::abs(z0) >= 1.0)
    throw OutsideDiskError("harmonic extension requires |z0| < 1, got |z0| = " +
                           std::to_string(std::abs(z0)));
  const std::size_t m = boundary.size();
  if (m < 4 || (m & (m - 1)) != 0)
    throw ConfigError("boundary sample count must be a power of two >= 4");
  std::vector<Complex> buf(m);
  for (std::size_t k = 0; k < m; ++k) buf[k] = Complex(boundary[k], 0.0);
  fft_radix2(buf);
  double acc = buf[0].real() / static_cast<double>(m);
  Complex zp(1, 0);
  for (std::size_t j = 1; j < m / 2; ++j) {
    zp *= z0;
    acc += 2.0 * (buf[j] / static_cast<double>(m) * zp).real();
  }
  return acc;
}

// Projection onto series that are real on the real axis: c_j -> Re(c_j)
// componentwise. Fixed points are exactly the maps with conj(f(conj z)) = f(z).
inline AnalyticMap conjugate_symmetrize(const AnalyticMap& f) {
  AnalyticMap g = f;
  for (CPoint& c : g.coeffs)
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = Complex(c[j].real(), 0.0);
  return g;
}

}  // namespace hullscope

#endif  // HULLSCOPE_HARDY_HPP
