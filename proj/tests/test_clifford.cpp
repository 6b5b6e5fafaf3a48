#include <catch2/catch.hpp>

#include <chrono>

#include "ncbloch/clifford.hpp"
#include "ncbloch/error.hpp"
#include "ncbloch/verify.hpp"

using namespace ncbloch;

TEST_CASE("n = 2 gives the Pauli pair with sigma_z grading") {
  const CliffordRep rep = build_clifford_rep(2);
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  REQUIRE(rep.spinor_dim == 2);
  CHECK(max_abs(rep.generators[0] - sx) == 0.0);
  CHECK(max_abs(rep.generators[1] - sy) == 0.0);
  REQUIRE(rep.grading);
  CHECK(max_abs(*rep.grading - sz) == 0.0);
}

TEST_CASE("n = 1 and n = 3") {
  const CliffordRep one = build_clifford_rep(1);
  CHECK(one.spinor_dim == 1);
  CHECK(one.generators[0](0, 0) == cplx(1.0, 0.0));
  CHECK_FALSE(one.grading);

  // the third generator is the grading of the n = 2 rep
  const CliffordRep three = build_clifford_rep(3);
  CHECK(three.spinor_dim == 2);
  CHECK(max_abs(three.generators[2] - *build_clifford_rep(2).grading) == 0.0);
}

TEST_CASE("relations hold for n = 1..10") {
  for (int n = 1; n <= 10; ++n) {
    const CliffordRep rep = build_clifford_rep(n);
    CHECK(rep.spinor_dim == (1 << (n / 2)));
    CHECK(static_cast<int>(rep.generators.size()) == n);
    CHECK(rep.grading.has_value() == (n % 2 == 0));
    CHECK(anticommutation_residual(rep) <= 1e-12);
    CHECK(grading_residual(rep) <= 1e-12);
  }
}

TEST_CASE("grading of rep(4) is diag(1, 1, -1, -1)") {
  const CliffordRep rep = build_clifford_rep(4);
  Matrix g = Matrix::Zero(4, 4);
  g.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs(*rep.grading - g) == 0.0);
}

TEST_CASE("bad n is rejected") {
  CHECK_THROWS_AS(build_clifford_rep(0), Error);
  CHECK_THROWS_AS(build_clifford_rep(-3), Error);
}

TEST_CASE("corrupted sign is caught by the check") {
  auto corrupt = [](int n) {
    CliffordRep rep = build_clifford_rep(n);
    if (n == 5) {
      Matrix& g = rep.generators[3];
      for (Eigen::Index i = 0; i < g.size(); ++i)
        if (std::abs(g(i)) > 0.5) {
          g(i) = -g(i);
          break;
        }
    }
    return rep;
  };
  CHECK(check_clifford(8).passed);
  const CheckResult bad = check_clifford(8, corrupt);
  CHECK_FALSE(bad.passed);
  CHECK(bad.residual > 0.1);
}

TEST_CASE("third generator of n = 3 by hand") {
  // (-i) gamma_1 gamma_2 = (-i) [[i, 0], [0, -i]] = diag(1, -1)
  Matrix s3 = Matrix::Zero(2, 2);
  s3.diagonal() << 1, -1;
  CHECK(max_abs(build_clifford_rep(3).generators[2] - s3) == 0.0);
}

TEST_CASE("spinor dimensions") {
  CHECK(spinor_dimension(1) == 1);
  CHECK(spinor_dimension(2) == 2);
  CHECK(spinor_dimension(5) == 4);
  CHECK(spinor_dimension(8) == 16);
}

TEST_CASE("verify suite") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto quick = verify_suite(VerifyLevel::Quick);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
  REQUIRE(quick.size() >= 8);
  for (const auto& r : quick) {
    INFO(r.name << " " << r.residual);
    CHECK(r.passed);
  }
  CHECK(check_geometric_identity(40.0, 0.05).detail.find("R = 40") != std::string::npos);
}
