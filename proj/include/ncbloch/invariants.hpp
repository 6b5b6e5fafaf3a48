#pragma once

#include <optional>
#include <vector>

#include "ncbloch/clifford.hpp"
#include "ncbloch/lattice.hpp"
#include "ncbloch/nccalc.hpp"

namespace ncbloch {

struct InvariantResult {
  cplx value{0.0, 0.0};
  long nearest_integer = 0;
  double deviation = 0.0;
  int realizations = 1;
  int x0_samples = 0;
  double std_error = 0.0;

  static InvariantResult from_value(cplx v);
};

// Mean of the real parts (imaginary parts averaged alongside) with the
// standard error of the mean; counts are summed.
InvariantResult aggregate(const std::vector<InvariantResult>& parts);

// Lambda_d sum_rho sgn(rho) T(P prod_i d_rho(i) P), Lambda_d = (2 pi i)^{d/2} / (d/2)!
InvariantResult chern_even(const DenseOperator& P, const TraceStrategy& s = TraceStrategy::periodic());

// Lambda~_d sum_rho sgn(rho) T(prod_i U^-1 d_rho(i) U), Lambda~_d = i (-i pi)^{(d-1)/2} / d!!
InvariantResult chern_odd(const DenseOperator& U, const TraceStrategy& s = TraceStrategy::periodic());

double even_chern_constant_abs(int d);
cplx even_chern_constant(int d);
cplx odd_chern_constant(int d);

struct DiracPhase {
  std::vector<double> x0;
  DenseOperator op;  // lattice (x) spinor, site-diagonal
  CliffordRep clifford;
};

// Site-diagonal multiplication by (c(x) + x0).Gamma / |c(x) + x0| with c the
// centred coordinate. Odd d uses the odd rep sigma, even d the rep gamma with
// grading. Where c(x) + x0 = 0 the value sum_i Gamma_i / sqrt(d) is used.
DiracPhase dirac_phase(const Geometry& g, const std::vector<double>& x0);

// per_direction points (k + 1/2) / per_direction in every direction
std::vector<std::vector<double>> x0_grid(int d, int per_direction = 2);

// sites with |c(x) + x0| < radius (radius <= 0 selects L/4)
std::vector<char> core_mask(const Geometry& g, const std::vector<double>& x0, double radius = -1.0);

struct FredholmOptions {
  double threshold = 1e-2;
  double core_radius = -1.0;  // L/4
};

struct FredholmResult {
  int index = 0;
  int kernel_dim = 0;
  int cokernel_dim = 0;
  int near_zero = 0;  // singular values below threshold, any location
  double largest_below = 0.0;
  double smallest_above = 0.0;
};

// Index of P- F P+ between range(P (x) Pi+) and range(P (x) Pi-).
FredholmResult fredholm_index_even(const DenseOperator& P, const DiracPhase& F, const FredholmOptions& opt = {});

// Index of E (U (x) 1) E on range(E), E = (1 + F) / 2.
FredholmResult fredholm_index_odd(const DenseOperator& U, const DiracPhase& F, const FredholmOptions& opt = {});

// c_d Tr(chi G f0 [F, f1] ... [F, fd]) for one phase F, operators lifted as
// f (x) 1_spinor. G = 1 and c_d = i^{d+1} / 2^d for odd d; G = grading and
// c_d = -1 for even d. chi restricts the trace to the core around the origin
// of F.
cplx cocycle_eval(const std::vector<DenseOperator>& f, const DiracPhase& F, double core_radius = -1.0);

// cocycle averaged over x0 samples and realizations (outer index)
InvariantResult cocycle_average(const std::vector<std::vector<DenseOperator>>& f_by_realization,
                                const std::vector<std::vector<double>>& x0_samples, double core_radius = -1.0);

// <[u], tau~_d> = tau~_d(u^-1 - 1, u - 1, ..., u^-1 - 1, u - 1)
InvariantResult odd_pairing(const std::vector<DenseOperator>& u_by_realization,
                            const std::vector<std::vector<double>>& x0_samples, double core_radius = -1.0);

// <[p], tau_d> = tau_d(p, ..., p)
InvariantResult even_pairing(const std::vector<DenseOperator>& p_by_realization,
                             const std::vector<std::vector<double>>& x0_samples, double core_radius = -1.0);

enum class IndexConvention {
  Independent,  // x_{d+1} is the last given point
  Cyclic,       // x_{d+1} = x_1
};

struct IdentityResult {
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double residual = 0.0;  // |lhs - rhs| / (1 + |rhs|)
};

// Midpoint quadrature over [-R, R]^d of
//   tr{ G prod_{i=1..d} (unit(x_i + x) - unit(x_{i+1} + x)).Gamma }
// against the closed form c_d det[x_i - x_{d+1}]. For the cyclic reading the
// closed form is taken literally, c_d det[x_1 .. x_d].
IdentityResult geometric_identity_residual(int d, const std::vector<std::vector<double>>& points, double R,
                                           double step, IndexConvention conv = IndexConvention::Independent);

// Tr |[F, f (x) 1]|^q
double schatten_summability(const DenseOperator& f, const DiracPhase& F, double q);

}  // namespace ncbloch
