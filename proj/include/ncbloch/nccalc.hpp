#pragma once

#include <vector>

#include "ncbloch/lattice.hpp"

namespace ncbloch {

struct TraceStrategy {
  enum class Mode { PeriodicSawtooth, OpenBulk };
  Mode mode = Mode::PeriodicSawtooth;
  double bulk_fraction = 1.0;

  static TraceStrategy periodic() { return {}; }
  static TraceStrategy open_bulk(double fraction);
};

const char* to_string(TraceStrategy::Mode m);
TraceStrategy::Mode parse_trace_mode(const std::string& s);

// sites of the centred sub-box with ceil(fraction * L) sites per direction
std::vector<int> bulk_sites(const Geometry& g, double fraction);

// Tr(Pi A Pi) / #sites(Pi)
cplx nc_trace(const DenseOperator& A, const TraceStrategy& s);

// i[X_j, A]; entries i (x_j - y_j) A_xy, with the nearest-image difference
// for the sawtooth strategy
DenseOperator nc_derivative(const DenseOperator& A, int j, const TraceStrategy& s);

// |T(A d_j B) + T(d_j A B)|
double integration_by_parts_check(const DenseOperator& A, const DenseOperator& B, int j, const TraceStrategy& s);

// sqrt(T(f f^dagger))
double gns_norm(const DenseOperator& f, const TraceStrategy& s);

struct DecayFit {
  double amplitude = 0.0;
  double rate = 0.0;  // +inf when every off-diagonal shell vanishes
  std::vector<double> shells;  // mean block norm per integer distance shell
};

// Bins the site blocks of A by (nearest-image on a torus) Euclidean distance
// rounded to an integer and fits log(mean) = log(amplitude) - rate * r over
// the shells r >= 1 above the round-off floor.
DecayFit localization_profile(const DenseOperator& A);

}  // namespace ncbloch
