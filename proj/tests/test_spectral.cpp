#include <catch2/catch.hpp>

#include "ncbloch/error.hpp"
#include "ncbloch/lattice.hpp"
#include "ncbloch/spectral.hpp"

using namespace ncbloch;

TEST_CASE("eigendecomposition of a small Hermitian matrix") {
  Matrix H(2, 2);
  H << 1, cplx(0, -2), cplx(0, 2), 1;
  const EigenSystem es = eigendecompose(H);
  CHECK(es.eigenvalues(0) == Approx(-1.0));
  CHECK(es.eigenvalues(1) == Approx(3.0));
  CHECK(max_abs(H * es.eigenvectors - es.eigenvectors * es.eigenvalues.cast<cplx>().asDiagonal()) < 1e-13);
  for (int j = 0; j < 2; ++j) CHECK(es.eigenvectors(0, j).imag() == 0.0);
  Matrix bad = H;
  bad(0, 1) = 5.0;
  CHECK_THROWS_AS(eigendecompose(bad), Error);
}

TEST_CASE("Fermi projector of gapped QWZ") {
  const DenseOperator H = build_hamiltonian(gallery_model("qwz", 1.0, 6, Boundary::Periodic),
                                            DisorderSpec{DisorderKind::BondUniform, 0.5, 2}, 0);
  const DenseOperator P = fermi_projector(H);
  const Matrix& p = P.matrix;
  CHECK(max_abs(p * p - p) < 1e-12);
  CHECK(max_abs(p - p.adjoint()) < 1e-12);
  CHECK(p.trace().real() == Approx(36.0));
  CHECK(max_abs(p * H.matrix - H.matrix * p) < 1e-12);
  const Matrix Q = hamiltonian_sign(H).matrix;
  CHECK(max_abs(Q - (Matrix::Identity(72, 72) - 2.0 * p)) < 1e-12);
}

TEST_CASE("Fermi level on the spectrum is reported") {
  // even periodic SSH at m = 1 has exact zero modes at k = pi
  const DenseOperator H = build_hamiltonian(gallery_model("ssh", 1.0, 8, Boundary::Periodic));
  try {
    fermi_projector(H);
    FAIL("expected fermi-level-on-spectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FermiLevelOnSpectrum);
  }
  CHECK_NOTHROW(fermi_projector(H, 0.5));
}

TEST_CASE("flat-band unitary of SSH") {
  const ModelSpec spec = gallery_model("ssh", 0.5, 10, Boundary::Periodic);
  const DenseOperator H = build_hamiltonian(spec, DisorderSpec{DisorderKind::BondUniform, 0.5, 4}, 1);
  const FlatBandUnitary U = flat_band_unitary(hamiltonian_sign(H), *spec.chiral);
  const Matrix& u = U.reduced.matrix;
  CHECK(u.rows() == 10);
  CHECK(U.reduced.orbitals == 1);
  CHECK(max_abs(u * u.adjoint() - Matrix::Identity(10, 10)) < 1e-12);
  CHECK(max_abs(U.full.matrix * U.full.matrix.adjoint() - Matrix::Identity(20, 20)) < 1e-12);
}

TEST_CASE("non-chiral input is rejected") {
  const ModelSpec ssh = gallery_model("ssh", 0.5, 8, Boundary::Periodic);
  const DenseOperator H = build_hamiltonian(ssh, DisorderSpec{DisorderKind::OnsiteUniform, 1.0, 4}, 0);
  try {
    flat_band_unitary(hamiltonian_sign(H), *ssh.chiral);
    FAIL("expected not-chiral");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotChiral);
  }
}

TEST_CASE("eigenspace basis of an involution") {
  Matrix S = Matrix::Zero(4, 4);
  S.diagonal() << 1, -1, 1, -1;
  const Matrix Wp = eigenspace_basis(S, 1.0), Wm = eigenspace_basis(S, -1.0);
  CHECK(Wp.cols() == 2);
  CHECK(Wm.cols() == 2);
  CHECK(max_abs(S * Wm + Wm) < 1e-14);
  CHECK(max_abs(Wp.adjoint() * Wp - Matrix::Identity(2, 2)) < 1e-14);
  CHECK(std::abs(Wp(0, 0)) == Approx(1.0));
}

namespace {

DenseOperator single_site(const Matrix& h) { return DenseOperator(h, Geometry(1, 1, Boundary::Open), static_cast<int>(h.rows())); }

Matrix pauli(int i) {
  Matrix s = Matrix::Zero(2, 2);
  if (i == 1) s << 0, 1, 1, 0;
  if (i == 3) s << 1, 0, 0, -1;
  return s;
}

}  // namespace

TEST_CASE("small spectra") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const RealVector e = eigendecompose(d).eigenvalues;
  CHECK(e(0) == 1.0);
  CHECK(e(1) == 2.0);
  CHECK(e(2) == 3.0);
  const RealVector p = eigendecompose(pauli(1)).eigenvalues;
  CHECK(p(0) == Approx(-1.0));
  CHECK(p(1) == Approx(1.0));
}

TEST_CASE("SSH gap is 2 |1 - m|") {
  const RealVector e = eigendecompose(build_hamiltonian(gallery_model("ssh", 0.5, 50, Boundary::Periodic))).eigenvalues;
  CHECK(e(50) - e(49) == Approx(1.0).margin(1e-6));
  const DenseOperator P = fermi_projector(build_hamiltonian(gallery_model("ssh", 0.5, 50, Boundary::Periodic)));
  CHECK(P.matrix.trace().real() == Approx(50.0));
}

TEST_CASE("projector and sign of one-site examples") {
  Matrix pz = Matrix::Zero(2, 2);
  pz(1, 1) = 1.0;
  CHECK(max_abs(fermi_projector(single_site(pauli(3))).matrix - pz) < 1e-15);
  CHECK(max_abs(fermi_projector(single_site(pauli(3)), -2.0).matrix) == 0.0);
  CHECK(max_abs(hamiltonian_sign(single_site(pauli(3))).matrix - pauli(3)) < 1e-15);
  CHECK(max_abs(hamiltonian_sign(single_site(5.0 * pauli(1))).matrix - pauli(1)) < 1e-14);

  const FlatBandUnitary U = flat_band_unitary(hamiltonian_sign(single_site(pauli(1))),
                                              ChiralStructure::make(pauli(3), pauli(1)));
  CHECK(U.reduced.matrix.rows() == 1);
  CHECK(std::abs(U.reduced.matrix(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("sign of SSH anticommutes with the chiral operator") {
  const ModelSpec spec = gallery_model("ssh", 0.5, 20, Boundary::Periodic);
  const Matrix Q = hamiltonian_sign(build_hamiltonian(spec)).matrix;
  const Matrix S = site_diagonal(spec.geometry, spec.chiral->S);
  CHECK(max_abs(S * Q * S + Q) < 1e-10);
}
