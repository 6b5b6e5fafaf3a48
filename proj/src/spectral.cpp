#include "ncbloch/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ncbloch/error.hpp"

namespace ncbloch {

namespace {

void require_hermitian(const Matrix& H) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
  if (max_abs(H - H.adjoint()) > 1e-10 * std::max(1.0, max_abs(H)))
    throw Error(ErrorKind::InvalidArgument, "matrix is not Hermitian");
}

void fix_phases(Matrix& V) {
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    const double floor = 1e-8 * V.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      const double a = std::abs(V(r, c));
      if (a > floor) {
        V.col(c) *= std::conj(V(r, c)) / a;
        V(r, c) = a;
        break;
      }
    }
  }
}

}  // namespace

EigenSystem eigendecompose(const Matrix& H) {
  require_hermitian(H);
  EigenSystem es;
  if (H.rows() == 0) return es;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::InvalidArgument, "eigensolver did not converge");
  es.eigenvalues = solver.eigenvalues();
  es.eigenvectors = solver.eigenvectors();
  fix_phases(es.eigenvectors);
  return es;
}

EigenSystem eigendecompose(const DenseOperator& H) { return eigendecompose(H.matrix); }

double default_spectral_tolerance(const Matrix& H) { return 1e-8 * max_abs(H); }

DenseOperator fermi_projector(const DenseOperator& H, const EigenSystem& es, double E_F, std::optional<double> tol) {
  const double t = tol.value_or(default_spectral_tolerance(H.matrix));
  Eigen::Index occupied = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double e = es.eigenvalues[k];
    if (std::abs(e - E_F) <= t)
      throw Error(ErrorKind::FermiLevelOnSpectrum, "eigenvalue " + std::to_string(e) + " within tolerance of E_F");
    if (e < E_F) ++occupied;
  }
  const auto V = es.eigenvectors.leftCols(occupied);
  Matrix P = V * V.adjoint();
  return DenseOperator(std::move(P), H.geometry, H.orbitals);
}

DenseOperator fermi_projector(const DenseOperator& H, double E_F, std::optional<double> tol) {
  return fermi_projector(H, eigendecompose(H), E_F, tol);
}

DenseOperator hamiltonian_sign(const DenseOperator& H, std::optional<double> tol) {
  DenseOperator P = fermi_projector(H, 0.0, tol);
  P.matrix = Matrix::Identity(P.size(), P.size()) - 2.0 * P.matrix;
  return P;
}

Matrix eigenspace_basis(const Matrix& S, double sign) {
  const Eigen::Index n = S.rows();
  Matrix proj = 0.5 * (Matrix::Identity(n, n) + sign * S);
  // Gram-Schmidt on the columns of the projector keeps a canonical,
  // basis-ordered choice (unit vectors when S is diagonal)
  Matrix basis(n, 0);
  for (Eigen::Index c = 0; c < n; ++c) {
    Vector v = proj.col(c);
    if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
    const double nv = v.norm();
    if (nv > 1e-8) {
      basis.conservativeResize(n, basis.cols() + 1);
      basis.col(basis.cols() - 1) = v / nv;
    }
  }
  return basis;
}

FlatBandUnitary flat_band_unitary(const DenseOperator& Q, const ChiralStructure& cs) {
  const Eigen::Index N = Q.orbitals;
  if (cs.S.rows() != N) throw Error(ErrorKind::InvalidArgument, "chiral structure does not match orbitals");
  const Eigen::Index n = Q.size();
  const Matrix S = site_diagonal(Q.geometry, cs.S);
  if (max_abs(Q.matrix * Q.matrix - Matrix::Identity(n, n)) > 1e-8)
    throw Error(ErrorKind::NotChiral, "Q is not an involution");
  if (max_abs(Q.matrix * S + S * Q.matrix) > 1e-8) throw Error(ErrorKind::NotChiral, "Q does not anticommute with S");

  const Matrix R = site_diagonal(Q.geometry, cs.R);
  const Matrix Sm = site_diagonal(Q.geometry, cs.S_minus);
  const Matrix Sp = site_diagonal(Q.geometry, cs.S_plus);
  FlatBandUnitary out;
  out.full = DenseOperator(R * Q.matrix * Sm + Sp, Q.geometry, static_cast<int>(N));

  const Matrix Wm = eigenspace_basis(cs.S, -1.0);
  const Matrix W = site_diagonal(Q.geometry, Wm);
  out.reduced = DenseOperator(W.adjoint() * out.full.matrix * W, Q.geometry, static_cast<int>(Wm.cols()));
  return out;
}

}  // namespace ncbloch
