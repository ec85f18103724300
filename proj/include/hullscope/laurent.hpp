#ifndef HULLSCOPE_LAURENT_HPP
#define HULLSCOPE_LAURENT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "hullscope/types.hpp"

namespace hullscope {

// Laurent polynomial sum_k c_k z^(min_power + k), used for the z-dependence of
// fiber data on the circle. eval_disk extends each monomial harmonically into
// the disk (z^-m -> conj(z)^m), which is what z-bar-style centers mean there.
struct LaurentPoly {
  int min_power = 0;
  std::vector<Complex> coeffs;  // empty means identically zero

  static LaurentPoly zero() { return {}; }
  static LaurentPoly constant(Complex c) { return {0, {c}}; }
  static LaurentPoly monomial(int power, Complex c) { return {power, {c}}; }

  bool is_zero() const {
    for (const Complex& c : coeffs)
      if (c != Complex(0, 0)) return false;
    return true;
  }

  int max_power() const { return min_power + static_cast<int>(coeffs.size()) - 1; }

  Complex eval_circle(Complex z) const {
    if (coeffs.empty()) return {0, 0};
    // z^-1 == conj(z) on |z| = 1; exact for grid nodes built from polar().
    Complex p(1, 0);
    if (min_power >= 0) {
      for (int k = 0; k < min_power; ++k) p *= z;
    } else {
      for (int k = 0; k < -min_power; ++k) p *= std::conj(z);
    }
    Complex acc(0, 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      acc += coeffs[k] * p;
      p *= z;
    }
    return acc;
  }

  Complex eval_disk(Complex z) const {
    Complex acc(0, 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const int p = min_power + static_cast<int>(k);
      Complex m(1, 0);
      if (p >= 0)
        for (int i = 0; i < p; ++i) m *= z;
      else
        for (int i = 0; i < -p; ++i) m *= std::conj(z);
      acc += coeffs[k] * m;
    }
    return acc;
  }

  bool real_coefficients(double tol = 0.0) const {
    for (const Complex& c : coeffs)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }

  Complex coefficient(int power) const {
    const int k = power - min_power;
    if (k < 0 || k >= static_cast<int>(coeffs.size())) return {0, 0};
    return coeffs[static_cast<std::size_t>(k)];
  }
};

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.coeffs.empty()) return b;
  if (b.coeffs.empty()) return a;
  const int lo = std::min(a.min_power, b.min_power);
  const int hi = std::max(a.max_power(), b.max_power());
  LaurentPoly r{lo, std::vector<Complex>(static_cast<std::size_t>(hi - lo + 1), Complex(0, 0))};
  for (int p = lo; p <= hi; ++p)
    r.coeffs[static_cast<std::size_t>(p - lo)] = a.coefficient(p) + b.coefficient(p);
  return r;
}

inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return LaurentPoly::zero();
  LaurentPoly r{a.min_power + b.min_power,
                std::vector<Complex>(a.coeffs.size() + b.coeffs.size() - 1, Complex(0, 0))};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

inline LaurentPoly operator*(Complex s, const LaurentPoly& a) {
  LaurentPoly r = a;
  for (Complex& c : r.coeffs) c *= s;
  return r;
}

// z-dependent vector in C^n with Laurent components.
using LaurentVec = std::vector<LaurentPoly>;

inline LaurentVec zero_laurent_vec(int n) { return LaurentVec(static_cast<std::size_t>(n)); }

inline CPoint eval_circle(const LaurentVec& v, Complex z) {
  CPoint w(static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) w[static_cast<Eigen::Index>(j)] = v[j].eval_circle(z);
  return w;
}

inline CPoint eval_disk(const LaurentVec& v, Complex z) {
  CPoint w(static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) w[static_cast<Eigen::Index>(j)] = v[j].eval_disk(z);
  return w;
}

inline bool real_coefficients(const LaurentVec& v, double tol = 0.0) {
  for (const LaurentPoly& p : v)
    if (!p.real_coefficients(tol)) return false;
  return true;
}

}  // namespace hullscope

#endif  // HULLSCOPE_LAURENT_HPP
