#include "ncbloch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ncbloch/error.hpp"
#include "ncbloch/invariants.hpp"
#include "ncbloch/kspace.hpp"
#include "ncbloch/spectral.hpp"

namespace ncbloch {

namespace {

CheckResult finish(std::string name, double residual, double tol, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.passed = std::isfinite(residual) && residual <= tol;
  r.detail = std::move(detail);
  return r;
}

// random operator with blocks on |x - y|_inf <= 1 (nearest image)
DenseOperator random_range_one(const Geometry& g, int N, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int sites = g.num_sites();
  Matrix A = Matrix::Zero(sites * N, sites * N);
  for (int x = 0; x < sites; ++x) {
    const LatticeVector cx = g.coords(x);
    for (int y = 0; y < sites; ++y) {
      const LatticeVector cy = g.coords(y);
      bool near = true;
      for (int j = 0; j < g.dim; ++j) near = near && std::abs(g.nearest_image(cx[j] - cy[j])) <= 1;
      if (!near) continue;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) A(x * N + a, y * N + b) = cplx(uni(rng), uni(rng));
    }
  }
  return DenseOperator(std::move(A), g, N);
}

}  // namespace

CheckResult check_clifford(int n_max, const std::function<CliffordRep(int)>& builder) {
  double worst = 0.0;
  std::ostringstream detail;
  for (int n = 1; n <= n_max; ++n) {
    const CliffordRep rep = builder(n);
    double r = std::max(anticommutation_residual(rep), grading_residual(rep));
    if (rep.spinor_dim != spinor_dimension(n) || static_cast<int>(rep.generators.size()) != n ||
        rep.grading.has_value() != (n % 2 == 0))
      r = std::max(r, 1.0);
    worst = std::max(worst, r);
  }
  detail << "n = 1.." << n_max;
  return finish("clifford_relations", worst, 1e-12, detail.str());
}

CheckResult check_covariance(double flux) {
  ModelSpec spec = gallery_model("qwz", 1.0, 8, Boundary::Periodic);
  spec.magnetic_form = RealMatrix::Zero(2, 2);
  spec.magnetic_form(0, 1) = flux;
  spec.magnetic_form(1, 0) = -flux;
  const DisorderSpec dis{DisorderKind::BondUniform, 0.5, 7};
  const DisorderRealization w = realize_disorder(spec, dis, 0);
  const DenseOperator H = build_hamiltonian(spec, w);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick(0, spec.L() - 1);
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    const LatticeVector a{pick(rng), pick(rng)};
    const DenseOperator Ua = magnetic_translation(spec, a, w.holonomy);
    const DenseOperator Ht = build_hamiltonian(spec, translate_disorder(spec, w, a));
    worst = std::max(worst, max_abs(Ua.matrix * H.matrix * Ua.matrix.adjoint() - Ht.matrix));
  }
  std::ostringstream detail;
  detail << "flux per plaquette " << flux;
  return finish(flux == 0.0 ? "covariance_zero_flux" : "covariance_flux", worst, 1e-12, detail.str());
}

CheckResult check_cyclicity() {
  const Geometry g(2, 16, Boundary::Periodic);
  std::mt19937_64 rng(11);
  const DenseOperator A = random_range_one(g, 2, rng), B = random_range_one(g, 2, rng);
  const TraceStrategy s = TraceStrategy::periodic();
  const cplx ab = nc_trace(DenseOperator(A.matrix * B.matrix, g, 2), s);
  const cplx ba = nc_trace(DenseOperator(B.matrix * A.matrix, g, 2), s);
  return finish("trace_cyclicity", std::abs(ab - ba), 1e-12, "L = 16, range 1");
}

CheckResult check_integration_by_parts() {
  const Geometry g(2, 16, Boundary::Periodic);
  std::mt19937_64 rng(12);
  const DenseOperator A = random_range_one(g, 2, rng), B = random_range_one(g, 2, rng);
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) worst = std::max(worst, integration_by_parts_check(A, B, j, TraceStrategy::periodic()));
  return finish("integration_by_parts", worst, 1e-12, "L = 16, range 1");
}

CheckResult check_leibniz() {
  const Geometry g(2, 16, Boundary::Periodic);
  std::mt19937_64 rng(13);
  const DenseOperator A = random_range_one(g, 2, rng), B = random_range_one(g, 2, rng);
  const TraceStrategy s = TraceStrategy::periodic();
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    const Matrix lhs = nc_derivative(DenseOperator(A.matrix * B.matrix, g, 2), j, s).matrix;
    const Matrix rhs = nc_derivative(A, j, s).matrix * B.matrix + A.matrix * nc_derivative(B, j, s).matrix;
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return finish("leibniz_rule", worst, 1e-12, "L = 16, range 1");
}

CheckResult check_dirac_phase() {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const Geometry g(d, 6, Boundary::Open);
    for (int t = 0; t < 3; ++t) {
      std::vector<double> x0(d);
      for (auto& v : x0) v = t == 0 ? 0.0 : uni(rng);
      const DiracPhase F = dirac_phase(g, x0);
      const Matrix& f = F.op.matrix;
      worst = std::max(worst, max_abs(f * f - Matrix::Identity(f.rows(), f.cols())));
      worst = std::max(worst, max_abs(f - f.adjoint()));
      if (F.clifford.grading) {
        const Matrix G = site_diagonal(g, *F.clifford.grading);
        worst = std::max(worst, max_abs(f * G + G * f));
      }
    }
  }
  return finish("dirac_phase", worst, 1e-12, "d = 1..3, L = 6");
}

CheckResult check_geometric_identity(double R, double step) {
  double worst = 0.0;
  worst = std::max(worst, geometric_identity_residual(1, {{2.0}, {-1.0}}, R, step).residual);
  const std::vector<std::vector<std::vector<double>>> sets = {
      {{0, 0}, {1, 0}, {0, 1}}, {{0, 0}, {2, 1}, {-1, 1}}, {{1, -1}, {0, 2}, {-2, 0}}};
  for (const auto& pts : sets) worst = std::max(worst, geometric_identity_residual(2, pts, R, step).residual);
  std::ostringstream detail;
  detail << "R = " << R << ", step = " << step;
  return finish("geometric_identities", worst, 2e-2, detail.str());
}

std::vector<CheckResult> verify_suite(VerifyLevel level) {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, const std::function<CheckResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      CheckResult r;
      r.name = name;
      r.passed = false;
      r.residual = std::numeric_limits<double>::infinity();
      r.detail = e.what();
      out.push_back(r);
    }
  };
  guarded("clifford_relations", [] { return check_clifford(8); });
  guarded("covariance_zero_flux", [] { return check_covariance(0.0); });
  guarded("covariance_flux", [] { return check_covariance(2.0 * std::numbers::pi / 64.0); });
  guarded("trace_cyclicity", check_cyclicity);
  guarded("integration_by_parts", check_integration_by_parts);
  guarded("leibniz_rule", check_leibniz);
  guarded("dirac_phase", check_dirac_phase);
  if (level == VerifyLevel::Quick) {
    guarded("geometric_identities", [] { return check_geometric_identity(10.0, 0.1); });
  } else {
    guarded("geometric_identities", [] { return check_geometric_identity(40.0, 0.05); });
    guarded("clean_chern_qwz", [] {
      const ModelSpec spec = gallery_model("qwz", 1.0, 12, Boundary::Periodic);
      const InvariantResult ch = chern_even(fermi_projector(build_hamiltonian(spec)));
      const int oracle = kspace_chern_2d(bloch_function_2d(spec), 48);
      return finish("clean_chern_qwz", std::abs(ch.value.real() - oracle), 0.05, "L = 12 against the plaquette oracle");
    });
  }
  return out;
}

}  // namespace ncbloch
