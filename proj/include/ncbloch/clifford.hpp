#pragma once

#include <optional>
#include <vector>

#include "ncbloch/types.hpp"

namespace ncbloch {

struct CliffordRep {
  int n = 0;
  int spinor_dim = 0;
  std::vector<Matrix> generators;
  std::optional<Matrix> grading;  // present iff n is even
};

// Irreducible representation of C_{n,0}. Odd n are built from sigma_1 = 1 by
// alternating block embedding (odd -> even) and the product generator
// (even -> odd); an even rep carries the next product generator as grading.
CliffordRep build_clifford_rep(int n);

int spinor_dimension(int n);

// max |G_i G_j + G_j G_i - 2 delta_ij| plus Hermiticity of every generator
double anticommutation_residual(const CliffordRep& rep);

// max deviation of grading^2 = 1, grading = grading^dagger and
// {grading, G_i} = 0; returns 0 when the rep has no grading
double grading_residual(const CliffordRep& rep);

}  // namespace ncbloch
