#include <catch2/catch.hpp>

#include <random>

#include "ncbloch/error.hpp"
#include "ncbloch/nccalc.hpp"
#include "ncbloch/spectral.hpp"
#include "ncbloch/verify.hpp"

using namespace ncbloch;

namespace {

DenseOperator random_short_range(const Geometry& g, int N, int range, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix A = Matrix::Zero(g.num_sites() * N, g.num_sites() * N);
  for (int x = 0; x < g.num_sites(); ++x)
    for (int y = 0; y < g.num_sites(); ++y) {
      bool near = true;
      for (int j = 0; j < g.dim; ++j) near = near && std::abs(g.nearest_image(g.coords(x)[j] - g.coords(y)[j])) <= range;
      if (near)
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) A(x * N + a, y * N + b) = cplx(gauss(rng), gauss(rng));
    }
  return DenseOperator(A, g, N);
}

}  // namespace

TEST_CASE("trace per volume") {
  const Geometry g(2, 6, Boundary::Periodic);
  const DenseOperator one(Matrix::Identity(72, 72), g, 2);
  CHECK(nc_trace(one, TraceStrategy::periodic()).real() == Approx(2.0));
  CHECK(nc_trace(one, TraceStrategy::open_bulk(0.5)).real() == Approx(2.0));
  CHECK(bulk_sites(g, 0.5).size() == 9);
  CHECK(bulk_sites(Geometry(1, 10, Boundary::Open), 0.3).size() == 3);
  CHECK_THROWS_AS(TraceStrategy::open_bulk(0.0), Error);
  CHECK_THROWS_AS(TraceStrategy::open_bulk(1.5), Error);
}

TEST_CASE("derivative of the shift") {
  // S_xy = 1 when x = y + 1, so i[X, S] = i S
  const Geometry g(1, 8, Boundary::Periodic);
  Matrix S = Matrix::Zero(8, 8);
  for (int y = 0; y < 8; ++y) S((y + 1) % 8, y) = 1.0;
  const DenseOperator dS = nc_derivative(DenseOperator(S, g, 1), 0, TraceStrategy::periodic());
  CHECK(max_abs(dS.matrix - I_unit * S) < 1e-15);

  // open strategy uses raw positions, the seam entry picks up -7 i
  const DenseOperator dO = nc_derivative(DenseOperator(S, g, 1), 0, TraceStrategy::open_bulk(1.0));
  CHECK(dO.matrix(0, 7) == cplx(0.0, -7.0));
}

TEST_CASE("calculus identities on random range-1 operators") {
  const Geometry g(2, 16, Boundary::Periodic);
  const DenseOperator A = random_short_range(g, 1, 1, 5), B = random_short_range(g, 1, 1, 6);
  const auto s = TraceStrategy::periodic();
  CHECK(std::abs(nc_trace(DenseOperator(A.matrix * B.matrix, g, 1), s) -
                 nc_trace(DenseOperator(B.matrix * A.matrix, g, 1), s)) < 1e-12);
  for (int j = 0; j < 2; ++j) {
    CHECK(integration_by_parts_check(A, B, j, s) < 1e-12);
    const Matrix lhs = nc_derivative(DenseOperator(A.matrix * B.matrix, g, 1), j, s).matrix;
    const Matrix rhs = nc_derivative(A, j, s).matrix * B.matrix + A.matrix * nc_derivative(B, j, s).matrix;
    CHECK(max_abs(lhs - rhs) < 1e-12);
  }
  CHECK(check_cyclicity().passed);
  CHECK(check_integration_by_parts().passed);
  CHECK(check_leibniz().passed);
}

TEST_CASE("integration by parts fails once ranges wrap") {
  // range 4 on L = 8 reaches the sawtooth discontinuity
  const Geometry g(1, 8, Boundary::Periodic);
  const DenseOperator A = random_short_range(g, 1, 4, 7), B = random_short_range(g, 1, 4, 8);
  CHECK(integration_by_parts_check(A, B, 0, TraceStrategy::periodic()) > 1e-6);
}

TEST_CASE("norm and localization of a gapped projector") {
  const DenseOperator P = fermi_projector(build_hamiltonian(gallery_model("ssh", 0.3, 40, Boundary::Periodic)));
  // |P|_2^2 = T(P) = 1 per cell
  CHECK(gns_norm(P, TraceStrategy::periodic()) == Approx(1.0));
  const DecayFit fit = localization_profile(P);
  CHECK(fit.rate > 0.5);
  CHECK(fit.shells.size() >= 10);

  const Geometry g(1, 8, Boundary::Periodic);
  CHECK(std::isinf(localization_profile(DenseOperator(Matrix::Identity(8, 8), g, 1)).rate));
}

TEST_CASE("trivial traces and derivatives") {
  const Geometry g(2, 4, Boundary::Periodic);
  Matrix sz = Matrix::Zero(2, 2);
  sz.diagonal() << 1, -1;
  const DenseOperator Z(site_diagonal(g, sz), g, 2);
  CHECK(std::abs(nc_trace(Z, TraceStrategy::periodic())) < 1e-15);
  CHECK(max_abs(nc_derivative(Z, 1, TraceStrategy::periodic()).matrix) == 0.0);
  const DenseOperator one(Matrix::Identity(32, 32), g, 2);
  CHECK(integration_by_parts_check(one, one, 0, TraceStrategy::periodic()) == 0.0);
}

TEST_CASE("Schwarz bound for the trace") {
  const Geometry g(2, 6, Boundary::Periodic);
  const auto s = TraceStrategy::periodic();
  for (unsigned seed = 0; seed < 5; ++seed) {
    const DenseOperator A = random_short_range(g, 2, 2, seed), B = random_short_range(g, 2, 2, seed + 100);
    const DenseOperator AB(A.matrix * B.matrix, g, 2);
    CHECK(std::abs(nc_trace(AB, s)) <= gns_norm(A, s) * gns_norm(DenseOperator(B.matrix.adjoint(), g, 2), s) + 1e-12);
  }
}

TEST_CASE("open-bulk boundary term shrinks with L") {
  // localized projectors of the open chain, reported across sizes
  std::vector<double> r;
  for (int L : {12, 16, 20}) {
    const Geometry g(2, L, Boundary::Open);
    const DenseOperator P = fermi_projector(build_hamiltonian(gallery_model("qwz", 3.0, L, Boundary::Open)));
    r.push_back(integration_by_parts_check(P, P, 0, TraceStrategy::open_bulk(0.5)));
  }
  INFO("residuals " << r[0] << " " << r[1] << " " << r[2]);
  CHECK(r[2] < r[0]);
}

TEST_CASE("localization rate tracks the gap") {
  auto rate = [](double m, int L) {
    return localization_profile(fermi_projector(build_hamiltonian(gallery_model("ssh", m, L, Boundary::Periodic)))).rate;
  };
  CHECK(rate(0.5, 40) > rate(0.9, 40));
  CHECK(rate(0.9, 40) > 0.0);
  // gapped: a fixed decay length; critical (odd L keeps k = pi off the grid):
  // the fitted rate keeps falling with the box, there is no decay length
  CHECK(rate(0.5, 80) == Approx(rate(0.5, 40)).epsilon(0.1));
  CHECK(rate(1.0, 101) < 0.7 * rate(1.0, 51));
}
