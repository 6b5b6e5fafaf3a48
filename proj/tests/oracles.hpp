#pragma once

// Closed-form Bloch symbols and hand-written k-space invariants used as
// references. Nothing here calls the library's k-space code.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline Mat2 pauli(int i) {
  Mat2 s;
  const cplx I(0.0, 1.0);
  if (i == 0) s << 1, 0, 0, 1;
  if (i == 1) s << 0, 1, 1, 0;
  if (i == 2) s << 0, -I, I, 0;
  if (i == 3) s << 1, 0, 0, -1;
  return s;
}

inline Mat2 qwz(double m, double kx, double ky) {
  return std::sin(kx) * pauli(1) + std::sin(ky) * pauli(2) + (m - std::cos(kx) - std::cos(ky)) * pauli(3);
}

inline Mat2 ssh(double m, double k) { return (m + std::cos(k)) * pauli(1) + std::sin(k) * pauli(2); }

// off-diagonal block <up| h(k) |down> of the SSH symbol
inline cplx ssh_block(double m, double k) { return m + std::exp(cplx(0.0, -k)); }

// lower-band eigenvector of a 2x2 Hermitian matrix
inline Eigen::Vector2cd lower_state(const Mat2& h) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  return es.eigenvectors().col(0);
}

// Chern number of the lower band with A = i<u|grad u>. The link phase
// arg<u_k|u_k+d> is -d.A to first order, so the plaquette sum carries a minus.
inline double lower_band_chern(const std::function<Mat2(double, double)>& h, int n) {
  const double dk = 2.0 * std::numbers::pi / n;
  auto u = [&](int i, int j) { return lower_state(h(i * dk, j * dk)); };
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto a = u(i, j), b = u(i + 1, j), c = u(i + 1, j + 1), d = u(i, j + 1);
      const cplx loop = a.dot(b) * b.dot(c) * c.dot(d) * d.dot(a);
      total += std::arg(loop);
    }
  return -total / (2.0 * std::numbers::pi);
}

// winding number of k -> f(k) around the origin over [0, 2 pi)
inline double winding(const std::function<cplx(double)>& f, int n) {
  const double dk = 2.0 * std::numbers::pi / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += std::arg(f((i + 1) * dk) / f(i * dk));
  return total / (2.0 * std::numbers::pi);
}

// QWZ: -1 for 0 < m < 2, +1 for -2 < m < 0, 0 for |m| > 2 in this orientation
inline int qwz_chern(double m) { return static_cast<int>(std::lround(lower_band_chern([m](double a, double b) { return qwz(m, a, b); }, 60))); }

inline int ssh_winding(double m) { return static_cast<int>(std::lround(winding([m](double k) { return ssh_block(m, k); }, 400))); }

}  // namespace oracle
