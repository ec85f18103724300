#ifndef HULLSCOPE_TYPES_HPP
#define HULLSCOPE_TYPES_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace hullscope {

using Complex = std::complex<double>;
using CPoint = Eigen::VectorXcd;  // point in C^n
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Hermitian inner product <a,b> = sum_j a_j conj(b_j).
// (Eigen's dot() conjugates the *first* argument, hence the swap.)
inline Complex hdot(const CPoint& a, const CPoint& b) { return b.dot(a); }

inline CPoint unit_vector(int n, int j) {
  CPoint e = CPoint::Zero(n);
  e[j] = Complex(1.0, 0.0);
  return e;
}

// Real coordinates are ordered (Re w1, Im w1, Re w2, Im w2, ...).
inline RVec embed_real(const CPoint& u) {
  RVec x(2 * u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    x[2 * j] = u[j].real();
    x[2 * j + 1] = u[j].imag();
  }
  return x;
}

inline CPoint embed_complex(const RVec& x) {
  CPoint u(x.size() / 2);
  for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = Complex(x[2 * j], x[2 * j + 1]);
  return u;
}

// Real (Euclidean) gradient of a real-valued rho from its Wirtinger gradient
// g_j = drho/dw_j: drho/dx_j = 2 Re g_j, drho/dy_j = -2 Im g_j.
inline RVec real_gradient(const CPoint& wirtinger) {
  RVec g(2 * wirtinger.size());
  for (Eigen::Index j = 0; j < wirtinger.size(); ++j) {
    g[2 * j] = 2.0 * wirtinger[j].real();
    g[2 * j + 1] = -2.0 * wirtinger[j].imag();
  }
  return g;
}

// Assembles the real 2n x 2n Hessian from the Wirtinger second-derivative
// blocks Hww[i][l] = d2 rho / dw_i dw_l (complex symmetric) and
// Hwwb[i][l] = d2 rho / dw_i dconj(w_l) (Hermitian). The quadratic form on a
// complex direction u is 2 Re(u^T Hww u) + 2 sum Hwwb_il u_i conj(u_l).
inline RMat assemble_real_hessian(const CMat& Hww, const CMat& Hwwb) {
  const Eigen::Index n = Hww.rows();
  RMat H(2 * n, 2 * n);
  const Complex unit[2] = {Complex(1, 0), Complex(0, 1)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (int p = 0; p < 2; ++p)
      for (Eigen::Index l = 0; l < n; ++l)
        for (int q = 0; q < 2; ++q) {
          const Complex cr = unit[p], cs = unit[q];
          double v = 2.0 * (cr * cs * Hww(i, l)).real() +
                     2.0 * (cr * std::conj(cs) * Hwwb(i, l)).real();
          H(2 * i + p, 2 * l + q) = v;
        }
  // symmetrize away roundoff
  H = 0.5 * (H + H.transpose()).eval();
  return H;
}

// Orthonormal basis (Hermitian inner product) of the complex tangent space
// {u : sum_j u_j g_j = 0} of a level set with Wirtinger gradient g. Built from
// the standard basis by projecting out conj(g) and orthonormalizing in index
// order; deterministic. Returns n-1 vectors (empty if |g| ~ 0).
inline std::vector<CPoint> orthonormal_tangent_basis(const CPoint& g) {
  const Eigen::Index n = g.size();
  std::vector<CPoint> basis;
  const double gn = g.norm();
  if (!(gn > 0.0) || !std::isfinite(gn)) return basis;
  CPoint normal = g.conjugate() / gn;  // Hermitian normal direction
  for (Eigen::Index k = 0; k < n && static_cast<Eigen::Index>(basis.size()) < n - 1; ++k) {
    CPoint v = unit_vector(static_cast<int>(n), static_cast<int>(k));
    v -= hdot(v, normal) * normal;
    for (const CPoint& b : basis) v -= hdot(v, b) * b;
    const double vn = v.norm();
    if (vn > 1e-8) basis.push_back(v / vn);
  }
  return basis;
}

// Minimum of the quadratic form x^T H x over real-unit vectors in the real
// span of {u_a, i u_a} for a Hermitian-orthonormal complex basis. Returns the
// eigenvalue and the attaining complex direction.
inline std::pair<double, CPoint> restricted_hessian_min(const RMat& H,
                                                        const std::vector<CPoint>& basis) {
  const int m = static_cast<int>(basis.size());
  const Eigen::Index n2 = H.rows();
  RMat E(n2, 2 * m);
  for (int a = 0; a < m; ++a) {
    E.col(2 * a) = embed_real(basis[a]);
    E.col(2 * a + 1) = embed_real(Complex(0, 1) * basis[a]);
  }
  RMat B = E.transpose() * H * E;
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMat> es(B);
  const RVec v = es.eigenvectors().col(0);
  CPoint dir = CPoint::Zero(n2 / 2);
  for (int a = 0; a < m; ++a) dir += v[2 * a] * basis[a] + v[2 * a + 1] * (Complex(0, 1) * basis[a]);
  const double dn = dir.norm();
  if (dn > 0) dir /= dn;
  return {es.eigenvalues()[0], dir};
}

}  // namespace hullscope

#endif  // HULLSCOPE_TYPES_HPP
