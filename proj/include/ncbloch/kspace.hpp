#pragma once

#include <functional>

#include "ncbloch/lattice.hpp"

namespace ncbloch {

using BlochFunction2D = std::function<Matrix(double, double)>;
using BlochFunction1D = std::function<Matrix(double)>;

// Plaquette-field Chern number of the bands below E_F, oriented as
// (1/2 pi) int Omega with A = i <u|grad u>. Throws gapless when a band
// touches E_F on the grid.
double kspace_chern_2d_value(const BlochFunction2D& h, int grid, double E_F = 0.0);
int kspace_chern_2d(const BlochFunction2D& h, int grid, double E_F = 0.0);

// (1 / 2 pi i) sum over the grid of the phase increments of det u(k).
// Throws gapless when det u vanishes on the grid.
int kspace_winding_1d(const BlochFunction1D& u, int grid);

BlochFunction2D bloch_function_2d(const ModelSpec& spec);
// chiral block W-^dagger R H(k) W- of an AIII model, the symbol of the
// reduced flat-band unitary up to normalization
BlochFunction1D chiral_block_1d(const ModelSpec& spec);

}  // namespace ncbloch
