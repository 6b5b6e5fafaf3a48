#include "ncbloch/kspace.hpp"

#include <cmath>
#include <numbers>

#include "ncbloch/error.hpp"
#include "ncbloch/spectral.hpp"

namespace ncbloch {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx unit_link(const Matrix& a, const Matrix& b) {
  const cplx det = (a.adjoint() * b).determinant();
  if (std::abs(det) < 1e-12) throw Error(ErrorKind::Gapless, "vanishing overlap between neighbouring k points");
  return det / std::abs(det);
}

}  // namespace

double kspace_chern_2d_value(const BlochFunction2D& h, int grid, double E_F) {
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must have at least 2 points");
  std::vector<Matrix> occ(static_cast<std::size_t>(grid) * grid);
  Eigen::Index bands = -1;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      const Matrix hk = h(two_pi * a / grid, two_pi * b / grid);
      Eigen::SelfAdjointEigenSolver<Matrix> es(hk);
      const RealVector& e = es.eigenvalues();
      const double tol = 1e-8 * std::max(1.0, max_abs(hk));
      Eigen::Index n = 0;
      for (Eigen::Index k = 0; k < e.size(); ++k) {
        if (std::abs(e[k] - E_F) <= tol) throw Error(ErrorKind::Gapless, "band touches the Fermi level on the grid");
        n += e[k] < E_F;
      }
      if (bands >= 0 && n != bands) throw Error(ErrorKind::Gapless, "number of filled bands changes across the grid");
      bands = n;
      occ[static_cast<std::size_t>(a) * grid + b] = es.eigenvectors().leftCols(n);
    }
  if (bands == 0) return 0.0;
  auto at = [&](int a, int b) -> const Matrix& {
    return occ[static_cast<std::size_t>((a + grid) % grid) * grid + (b + grid) % grid];
  };
  double flux = 0.0;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      const cplx loop = unit_link(at(a, b), at(a + 1, b)) * unit_link(at(a + 1, b), at(a + 1, b + 1)) *
                        unit_link(at(a + 1, b + 1), at(a, b + 1)) * unit_link(at(a, b + 1), at(a, b));
      flux += std::arg(loop);
    }
  // the loop product measures the flux of <u|grad u>; the curvature of
  // A = i <u|grad u> carries the opposite sign
  return -flux / two_pi;
}

int kspace_chern_2d(const BlochFunction2D& h, int grid, double E_F) {
  return static_cast<int>(std::lround(kspace_chern_2d_value(h, grid, E_F)));
}

int kspace_winding_1d(const BlochFunction1D& u, int grid) {
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must have at least 2 points");
  std::vector<cplx> det(grid);
  for (int a = 0; a < grid; ++a) {
    const Matrix uk = u(two_pi * a / grid);
    det[a] = uk.rows() == 0 ? cplx(1.0, 0.0) : uk.determinant();
    if (std::abs(det[a]) < 1e-12 * std::max(1.0, max_abs(uk)))
      throw Error(ErrorKind::Gapless, "chiral block is singular on the grid");
  }
  double phase = 0.0;
  for (int a = 0; a < grid; ++a) phase += std::arg(det[(a + 1) % grid] / det[a]);
  return static_cast<int>(std::lround(phase / two_pi));
}

BlochFunction2D bloch_function_2d(const ModelSpec& spec) {
  if (spec.dim() != 2) throw Error(ErrorKind::WrongParity, "expected a two-dimensional model");
  return [spec](double kx, double ky) { return bloch_hamiltonian(spec, {kx, ky}); };
}

BlochFunction1D chiral_block_1d(const ModelSpec& spec) {
  if (spec.dim() != 1) throw Error(ErrorKind::WrongParity, "expected a one-dimensional model");
  if (!spec.chiral) throw Error(ErrorKind::NotChiral, "model has no chiral structure");
  const Matrix Wm = eigenspace_basis(spec.chiral->S, -1.0);
  const Matrix R = spec.chiral->R;
  return [spec, Wm, R](double k) -> Matrix { return Wm.adjoint() * R * bloch_hamiltonian(spec, {k}) * Wm; };
}

}  // namespace ncbloch
