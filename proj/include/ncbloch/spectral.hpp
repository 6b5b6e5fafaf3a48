#pragma once

#include <optional>

#include "ncbloch/lattice.hpp"

namespace ncbloch {

struct EigenSystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, first non-negligible component real positive
};

EigenSystem eigendecompose(const Matrix& H);
EigenSystem eigendecompose(const DenseOperator& H);

// 1e-8 * max |H_ij|
double default_spectral_tolerance(const Matrix& H);

// Projector on the states below E_F. Throws fermi-level-on-spectrum when an
// eigenvalue lies within tol of E_F.
DenseOperator fermi_projector(const DenseOperator& H, double E_F = 0.0, std::optional<double> tol = {});
DenseOperator fermi_projector(const DenseOperator& H, const EigenSystem& es, double E_F = 0.0,
                              std::optional<double> tol = {});

// Q = 1 - 2P at E_F = 0
DenseOperator hamiltonian_sign(const DenseOperator& H, std::optional<double> tol = {});

struct FlatBandUnitary {
  DenseOperator full;     // (1 x R) Q (1 x S-) + 1 x S+
  DenseOperator reduced;  // block of U on the S- sector, N/2 orbitals per site
};

// Throws not-chiral when Q^2 != 1 or {Q, 1 x S} != 0 beyond 1e-8.
FlatBandUnitary flat_band_unitary(const DenseOperator& Q, const ChiralStructure& cs);

// Orthonormal columns spanning the +1 / -1 eigenspace of a Hermitian
// involution, ordered by index of first support.
Matrix eigenspace_basis(const Matrix& S, double sign);

}  // namespace ncbloch
