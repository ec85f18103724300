#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hullscope/hardy.hpp"
#include "hullscope/sampling.hpp"
#include "oracles.hpp"

using namespace hullscope;

namespace {

std::vector<CPoint> samples_of(const std::function<CPoint(Complex)>& f, const CircleGrid& grid) {
  std::vector<CPoint> out;
  out.reserve(grid.nodes.size());
  for (const Complex& z : grid.nodes) out.push_back(f(z));
  return out;
}

AnalyticMap random_map(int n, int degree, std::uint64_t seed) {
  SplitMix64 rng(seed);
  AnalyticMap f = AnalyticMap::zero(n, degree);
  for (CPoint& c : f.coeffs)
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = rng.gaussian_complex();
  return f;
}

}  // namespace

TEST_CASE("circle grid nodes are roots of unity") {
  CircleGrid grid(64);
  for (const Complex& z : grid.nodes) {
    Complex p(1, 0);
    for (int i = 0; i < 64; ++i) p *= z;
    REQUIRE(std::abs(p - Complex(1, 0)) < 1e-12);
  }
  REQUIRE_THROWS_AS(CircleGrid(48), ConfigError);
  REQUIRE_THROWS_AS(CircleGrid(2), ConfigError);
}

TEST_CASE("fft matches the naive dft") {
  SplitMix64 rng(11);
  std::vector<Complex> data(64);
  for (Complex& c : data) c = rng.gaussian_complex();
  std::vector<Complex> viaFft = data;
  fft_radix2(viaFft);
  const std::vector<Complex> viaNaive = oracles::naive_dft(data);
  for (std::size_t k = 0; k < data.size(); ++k)
    REQUIRE(std::abs(viaFft[k] - viaNaive[k]) < 1e-10);
  fft_radix2(viaFft, true);
  for (std::size_t k = 0; k < data.size(); ++k) REQUIRE(std::abs(viaFft[k] - data[k]) < 1e-12);
}

TEST_CASE("analytic projection drops negative frequencies") {
  CircleGrid grid(64);

  SECTION("conj z projects to zero") {
    auto f = project_analytic(samples_of(
        [](Complex z) {
          CPoint w(1);
          w[0] = std::conj(z);
          return w;
        },
        grid));
    for (const CPoint& c : f.coeffs) REQUIRE(std::abs(c[0]) < 1e-13);
  }

  SECTION("z^2 + conj(z)^3 projects to z^2") {
    auto f = project_analytic(samples_of(
        [](Complex z) {
          CPoint w(1);
          w[0] = z * z + std::pow(std::conj(z), 3);
          return w;
        },
        grid));
    REQUIRE(std::abs(f.coeffs[2][0] - Complex(1, 0)) < 1e-13);
    for (int j = 0; j <= f.degree(); ++j)
      if (j != 2) REQUIRE(std::abs(f.coeffs[static_cast<std::size_t>(j)][0]) < 1e-13);
  }

  SECTION("constants are kept") {
    auto f = project_analytic(samples_of(
        [](Complex) {
          CPoint w(1);
          w[0] = Complex(3, 4);
          return w;
        },
        grid));
    REQUIRE(std::abs(f.coeffs[0][0] - Complex(3, 4)) < 1e-13);
  }
}

TEST_CASE("projection round trip and idempotence") {
  CircleGrid grid(128);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    AnalyticMap f = random_map(2, 63, seed);  // degree M/2 - 1
    AnalyticMap g = project_analytic(sample_on_grid(f, grid));
    REQUIRE(coefficient_distance(f, g) < 1e-12);
    AnalyticMap h = project_analytic(sample_on_grid(g, grid));
    REQUIRE(coefficient_distance(g, h) < 1e-13);
  }
}

TEST_CASE("evaluation of truncated series") {
  SECTION("constant map") {
    AnalyticMap f = AnalyticMap::zero(2, 0);
    f.coeffs[0][0] = Complex(2, 1);
    REQUIRE((f.eval(Complex(0.3, 0.4)) - f.coeffs[0]).norm() < 1e-15);
  }

  SECTION("(z^2, 3z) at 0.5") {
    AnalyticMap f = AnalyticMap::zero(2, 2);
    f.coeffs[2][0] = Complex(1, 0);
    f.coeffs[1][1] = Complex(3, 0);
    const CPoint v = f.eval(Complex(0.5, 0));
    REQUIRE(std::abs(v[0] - Complex(0.25, 0)) < 1e-15);
    REQUIRE(std::abs(v[1] - Complex(1.5, 0)) < 1e-15);
  }

  SECTION("z^N on the grid matches the sampled value") {
    CircleGrid grid(64);
    AnalyticMap f = AnalyticMap::zero(1, 31);
    f.coeffs[31][0] = Complex(1, 0);
    for (const Complex& z : grid.nodes) {
      Complex p(1, 0);
      for (int i = 0; i < 31; ++i) p *= z;
      REQUIRE(std::abs(f.eval(z)[0] - p) < 1e-14);
    }
  }

  SECTION("outside the closed disk") {
    AnalyticMap f = AnalyticMap::zero(1, 1);
    REQUIRE_THROWS_AS(f.eval(Complex(1.1, 0)), OutsideDiskError);
  }
}

TEST_CASE("harmonic extension") {
  CircleGrid grid(64);

  SECTION("Re z extends to Re z0") {
    std::vector<double> boundary;
    for (const Complex& z : grid.nodes) boundary.push_back(z.real());
    const Complex z0(0.3, -0.2);
    REQUIRE(harmonic_extension(boundary, z0) == Catch::Approx(z0.real()).margin(1e-13));
  }

  SECTION("constants extend to themselves") {
    std::vector<double> boundary(64, 1.0);
    REQUIRE(harmonic_extension(boundary, Complex(0.7, 0.1)) == Catch::Approx(1.0).margin(1e-13));
  }

  SECTION("Re(alpha z) with alpha = 2 - i") {
    const Complex alpha(2, -1);
    std::vector<double> boundary;
    for (const Complex& z : grid.nodes) boundary.push_back((alpha * z).real());
    const Complex z0(0.3, 0.1);
    REQUIRE(harmonic_extension(boundary, z0) ==
            Catch::Approx((alpha * z0).real()).margin(1e-13));
    REQUIRE(harmonic_extension(boundary, z0) == Catch::Approx(0.7).margin(1e-13));
  }

  SECTION("mean value at the origin") {
    SplitMix64 rng(5);
    std::vector<double> boundary(128);
    double mean = 0;
    for (double& b : boundary) {
      b = rng.gaussian();
      mean += b;
    }
    mean /= static_cast<double>(boundary.size());
    REQUIRE(harmonic_extension(boundary, Complex(0, 0)) == Catch::Approx(mean).margin(1e-13));
  }

  SECTION("boundary point rejected") {
    std::vector<double> boundary(64, 0.0);
    REQUIRE_THROWS_AS(harmonic_extension(boundary, Complex(1.0, 0)), OutsideDiskError);
  }
}

TEST_CASE("conjugate symmetrization") {
  SECTION("real coefficients are fixed") {
    AnalyticMap f = AnalyticMap::zero(2, 3);
    f.coeffs[1][0] = Complex(2, 0);
    f.coeffs[3][1] = Complex(-1, 0);
    REQUIRE(coefficient_distance(conjugate_symmetrize(f), f) == 0.0);
  }

  SECTION("i z maps to zero") {
    AnalyticMap f = AnalyticMap::zero(1, 1);
    f.coeffs[1][0] = Complex(0, 1);
    REQUIRE(sup_norm_on_grid(conjugate_symmetrize(f), CircleGrid(16)) < 1e-15);
  }

  SECTION("(1+i) + (2-3i) z maps to 1 + 2z") {
    AnalyticMap f = AnalyticMap::zero(1, 1);
    f.coeffs[0][0] = Complex(1, 1);
    f.coeffs[1][0] = Complex(2, -3);
    AnalyticMap g = conjugate_symmetrize(f);
    REQUIRE(std::abs(g.coeffs[0][0] - Complex(1, 0)) < 1e-15);
    REQUIRE(std::abs(g.coeffs[1][0] - Complex(2, 0)) < 1e-15);
  }

  SECTION("linear idempotent projection; image is conjugate-symmetric") {
    SplitMix64 rng(7);
    AnalyticMap f = random_map(2, 12, 99);
    AnalyticMap g = conjugate_symmetrize(f);
    REQUIRE(coefficient_distance(conjugate_symmetrize(g), g) == 0.0);
    for (int probe = 0; probe < 50; ++probe) {
      const double r = std::sqrt(rng.uniform());
      const Complex z = r * std::polar(1.0, 2.0 * kPi * rng.uniform());
      const CPoint a = g.eval(z);
      const CPoint b = g.eval(std::conj(z)).conjugate();
      REQUIRE((a - b).norm() < 1e-12);
    }
  }
}
