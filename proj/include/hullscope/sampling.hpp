#ifndef HULLSCOPE_SAMPLING_HPP
#define HULLSCOPE_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "hullscope/types.hpp"

namespace hullscope {

// Tiny deterministic generator; identical stream on every platform (the
// standard distributions are implementation-defined, which would break the
// bit-reproducibility contract).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Box-Muller with cached spare
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  Complex gaussian_complex() { return Complex(gaussian(), gaussian()); }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 rng(master ^ (0x632be59bd9b4e019ull * (stream + 1)));
  return rng.next();
}

namespace detail {

inline double frac(double x) { return x - std::floor(x); }

// Hopf-coordinate low-discrepancy point on S^3 in C^2 (R3 additive sequence).
inline CPoint hopf_lattice_point(int k) {
  // inverse powers of the root of x^4 = x + 1 (R3 sequence constants)
  constexpr double a1 = 0.8191725133961644;
  constexpr double a2 = 0.6710436067037892;
  constexpr double a3 = 0.5497004779019701;
  const double t1 = frac((k + 0.5) * a1);
  const double t2 = frac((k + 0.5) * a2);
  const double t3 = frac((k + 0.5) * a3);
  const double alpha = 0.5 * std::acos(1.0 - 2.0 * t1);
  CPoint nu(2);
  nu[0] = std::cos(alpha) * std::polar(1.0, 2.0 * kPi * t2);
  nu[1] = std::sin(alpha) * std::polar(1.0, 2.0 * kPi * t3);
  return nu;
}

}  // namespace detail

// Deterministic unit directions in C^n. The first entries are structured
// (coordinate axes, i-rotated axes, pairwise diagonals) so that closed-form
// extrema sitting on coordinate loci are sampled exactly; the remainder is a
// low-discrepancy fill (Hopf lattice for n = 2, seeded gaussians otherwise).
inline std::vector<CPoint> unit_sphere_directions(int n, int count,
                                                  std::uint64_t seed = 0x51e0u) {
  std::vector<CPoint> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  const Complex I(0, 1);
  for (int j = 0; j < n && static_cast<int>(dirs.size()) < count; ++j)
    dirs.push_back(unit_vector(n, j));
  for (int j = 0; j < n && static_cast<int>(dirs.size()) < count; ++j)
    dirs.push_back(I * unit_vector(n, j));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n && static_cast<int>(dirs.size()) < count; ++j)
    for (int k = j + 1; k < n && static_cast<int>(dirs.size()) < count; ++k) {
      dirs.push_back(s * (unit_vector(n, j) + unit_vector(n, k)));
      if (static_cast<int>(dirs.size()) < count)
        dirs.push_back(s * (unit_vector(n, j) - unit_vector(n, k)));
      if (static_cast<int>(dirs.size()) < count)
        dirs.push_back(s * (unit_vector(n, j) + I * unit_vector(n, k)));
      if (static_cast<int>(dirs.size()) < count)
        dirs.push_back(s * (unit_vector(n, j) - I * unit_vector(n, k)));
    }
  SplitMix64 rng(seed);
  int lattice_index = 0;
  while (static_cast<int>(dirs.size()) < count) {
    CPoint v(n);
    if (n == 2) {
      v = detail::hopf_lattice_point(lattice_index++);
    } else {
      for (int j = 0; j < n; ++j) v[j] = rng.gaussian_complex();
      const double vn = v.norm();
      if (!(vn > 1e-12)) continue;
      v /= vn;
    }
    dirs.push_back(v);
  }
  return dirs;
}

}  // namespace hullscope

#endif  // HULLSCOPE_SAMPLING_HPP
