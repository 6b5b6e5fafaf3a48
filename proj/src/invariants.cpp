#include "ncbloch/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include "ncbloch/error.hpp"
#include "ncbloch/spectral.hpp"

namespace ncbloch {

namespace {

constexpr double pi = std::numbers::pi;

struct Permutation {
  std::vector<int> p;
  int sign;
};

std::vector<Permutation> permutations(int d) {
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    int inv = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) inv += p[i] > p[j];
    out.push_back({p, inv % 2 == 0 ? 1 : -1});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

cplx i_power(int p) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((p % 4) + 4) % 4];
}

// T(A B) without forming A B
cplx trace_product(const Matrix& A, const Matrix& B, const Geometry& g, int orbitals, const TraceStrategy& s) {
  const Eigen::Index N = orbitals;
  if (s.mode == TraceStrategy::Mode::PeriodicSawtooth) {
    return A.cwiseProduct(B.transpose()).sum() / static_cast<double>(g.num_sites());
  }
  const std::vector<int> sites = bulk_sites(g, s.bulk_fraction);
  cplx t = 0.0;
  for (int x : sites)
    for (Eigen::Index a = 0; a < N; ++a) {
      const Eigen::Index i = x * N + a;
      t += A.row(i).transpose().cwiseProduct(B.col(i)).sum();
    }
  return t / static_cast<double>(sites.size());
}

void require_projector(const Matrix& P) {
  if (max_abs(P * P - P) > 1e-8) throw Error(ErrorKind::InvalidArgument, "operator is not a projector");
}

// f (x) 1_s with index (i, b) -> i * s + b
Matrix lift_operator(const Matrix& f, int s) {
  if (s == 1) return f;
  Matrix out = Matrix::Zero(f.rows() * s, f.cols() * s);
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      const cplx v = f(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      for (int b = 0; b < s; ++b) out(i * s + b, j * s + b) = v;
    }
  return out;
}

// site-diagonal spinor operator F (site blocks s x s) lifted to
// sites (x) orbitals (x) spinor
Matrix lift_phase(const DiracPhase& F, int orbitals) {
  const int s = F.clifford.spinor_dim;
  const int sites = F.op.geometry.num_sites();
  const Eigen::Index n = static_cast<Eigen::Index>(sites) * orbitals * s;
  Matrix out = Matrix::Zero(n, n);
  for (int x = 0; x < sites; ++x) {
    const auto blk = F.op.matrix.block(x * s, x * s, s, s);
    for (int a = 0; a < orbitals; ++a) {
      const Eigen::Index o = (static_cast<Eigen::Index>(x) * orbitals + a) * s;
      out.block(o, o, s, s) = blk;
    }
  }
  return out;
}

void require_same_geometry(const Geometry& a, const Geometry& b) {
  if (a.dim != b.dim || a.L != b.L) throw Error(ErrorKind::InvalidArgument, "operators live on different lattices");
}

// number of directions in span(W) whose weight on the core exceeds 1/2;
// W has orthonormal columns, so degenerate zero modes are counted basis-free
int core_dimension(const Matrix& W, const std::vector<char>& core, Eigen::Index per_site) {
  if (W.cols() == 0) return 0;
  Matrix Wc = W;
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    if (!core[i / per_site]) Wc.row(i).setZero();
  const Matrix M = W.adjoint() * Wc;
  const RealVector w = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (M + M.adjoint())).eigenvalues();
  return static_cast<int>((w.array() > 0.5).count());
}

FredholmResult count_index(const Matrix& T, const Matrix& B_right, const Matrix& B_left, const std::vector<char>& core,
                           Eigen::Index per_site, double threshold) {
  FredholmResult res;
  res.largest_below = 0.0;
  res.smallest_above = std::numeric_limits<double>::infinity();
  if (T.size() == 0) return res;
  Eigen::BDCSVD<Matrix> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  std::vector<Eigen::Index> zero;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] >= threshold) {
      res.smallest_above = std::min(res.smallest_above, sv[k]);
      continue;
    }
    res.largest_below = std::max(res.largest_below, sv[k]);
    zero.push_back(k);
  }
  res.near_zero = static_cast<int>(zero.size());
  Matrix right(B_right.rows(), res.near_zero), left(B_left.rows(), res.near_zero);
  for (int i = 0; i < res.near_zero; ++i) {
    right.col(i) = B_right * svd.matrixV().col(zero[i]);
    left.col(i) = B_left * svd.matrixU().col(zero[i]);
  }
  res.kernel_dim = core_dimension(right, core, per_site);
  res.cokernel_dim = core_dimension(left, core, per_site);
  res.index = res.kernel_dim - res.cokernel_dim;
  return res;
}

}  // namespace

InvariantResult InvariantResult::from_value(cplx v) {
  InvariantResult r;
  r.value = v;
  r.nearest_integer = std::lround(v.real());
  r.deviation = std::abs(v.real() - static_cast<double>(r.nearest_integer));
  return r;
}

InvariantResult aggregate(const std::vector<InvariantResult>& parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to aggregate");
  const double n = static_cast<double>(parts.size());
  cplx mean = 0.0;
  for (const auto& p : parts) mean += p.value;
  mean /= n;
  double var = 0.0;
  for (const auto& p : parts) var += (p.value.real() - mean.real()) * (p.value.real() - mean.real());
  InvariantResult r = InvariantResult::from_value(mean);
  r.realizations = 0;
  r.x0_samples = 0;
  for (const auto& p : parts) {
    r.realizations += p.realizations;
    r.x0_samples = std::max(r.x0_samples, p.x0_samples);
  }
  r.std_error = parts.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return r;
}

cplx even_chern_constant(int d) {
  return std::pow(cplx(0.0, 2.0 * pi), d / 2) / factorial(d / 2);
}

double even_chern_constant_abs(int d) { return std::abs(even_chern_constant(d)); }

cplx odd_chern_constant(int d) {
  return I_unit * std::pow(cplx(0.0, -pi), (d - 1) / 2) / double_factorial(d);
}

InvariantResult chern_even(const DenseOperator& P, const TraceStrategy& s) {
  const int d = P.geometry.dim;
  if (d % 2 != 0) throw Error(ErrorKind::WrongParity, "even Chern number needs even dimension");
  require_projector(P.matrix);
  std::vector<Matrix> dP;
  for (int j = 0; j < d; ++j) dP.push_back(nc_derivative(P, j, s).matrix);
  cplx sum = 0.0;
  for (const auto& perm : permutations(d)) {
    Matrix M = P.matrix;
    for (int i = 0; i + 1 < d; ++i) M = M * dP[perm.p[i]];
    sum += static_cast<double>(perm.sign) * trace_product(M, dP[perm.p[d - 1]], P.geometry, P.orbitals, s);
  }
  return InvariantResult::from_value(even_chern_constant(d) * sum);
}

InvariantResult chern_odd(const DenseOperator& U, const TraceStrategy& s) {
  const int d = U.geometry.dim;
  if (d % 2 == 0) throw Error(ErrorKind::WrongParity, "odd Chern number needs odd dimension");
  Eigen::BDCSVD<Matrix> svd(U.matrix);
  if (U.size() == 0 || svd.singularValues().minCoeff() <= 1e-8)
    throw Error(ErrorKind::NotInvertible, "unitary block is singular");
  const Matrix Uinv = U.matrix.partialPivLu().inverse();
  std::vector<Matrix> A;
  for (int j = 0; j < d; ++j) A.push_back(Uinv * nc_derivative(U, j, s).matrix);
  cplx sum = 0.0;
  for (const auto& perm : permutations(d)) {
    if (d == 1) {
      sum += nc_trace(DenseOperator(A[0], U.geometry, U.orbitals), s);
      continue;
    }
    Matrix M = A[perm.p[0]];
    for (int i = 1; i + 1 < d; ++i) M = M * A[perm.p[i]];
    sum += static_cast<double>(perm.sign) * trace_product(M, A[perm.p[d - 1]], U.geometry, U.orbitals, s);
  }
  return InvariantResult::from_value(odd_chern_constant(d) * sum);
}

DiracPhase dirac_phase(const Geometry& g, const std::vector<double>& x0) {
  const int d = g.dim;
  if (static_cast<int>(x0.size()) != d) throw Error(ErrorKind::InvalidArgument, "x0 has wrong dimension");
  DiracPhase F;
  F.x0 = x0;
  F.clifford = build_clifford_rep(d);
  const int s = F.clifford.spinor_dim;
  const int sites = g.num_sites();
  Matrix op = Matrix::Zero(static_cast<Eigen::Index>(sites) * s, static_cast<Eigen::Index>(sites) * s);
  for (int x = 0; x < sites; ++x) {
    const LatticeVector c = g.coords(x);
    std::vector<double> v(d);
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      v[j] = g.centered(c[j]) + x0[j];
      r2 += v[j] * v[j];
    }
    Matrix blk = Matrix::Zero(s, s);
    if (r2 == 0.0) {
      for (int j = 0; j < d; ++j) blk += F.clifford.generators[j];
      blk /= std::sqrt(static_cast<double>(d));
    } else {
      const double r = std::sqrt(r2);
      for (int j = 0; j < d; ++j) blk += (v[j] / r) * F.clifford.generators[j];
    }
    op.block(static_cast<Eigen::Index>(x) * s, static_cast<Eigen::Index>(x) * s, s, s) = blk;
  }
  F.op = DenseOperator(std::move(op), g, s);
  return F;
}

std::vector<std::vector<double>> x0_grid(int d, int per_direction) {
  if (d < 1 || per_direction < 1) throw Error(ErrorKind::InvalidArgument, "x0 grid needs d >= 1 and >= 1 point");
  std::vector<std::vector<double>> out;
  int total = 1;
  for (int j = 0; j < d; ++j) total *= per_direction;
  for (int t = 0; t < total; ++t) {
    std::vector<double> x(d);
    int r = t;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = (r % per_direction + 0.5) / per_direction;
      r /= per_direction;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<char> core_mask(const Geometry& g, const std::vector<double>& x0, double radius) {
  const double R = radius > 0.0 ? radius : g.L / 4.0;
  std::vector<char> mask(g.num_sites());
  for (int x = 0; x < g.num_sites(); ++x) {
    const LatticeVector c = g.coords(x);
    double r2 = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      const double v = g.centered(c[j]) + x0[j];
      r2 += v * v;
    }
    mask[x] = std::sqrt(r2) < R;
  }
  return mask;
}

FredholmResult fredholm_index_even(const DenseOperator& P, const DiracPhase& F, const FredholmOptions& opt) {
  const int d = P.geometry.dim;
  if (d % 2 != 0 || !F.clifford.grading) throw Error(ErrorKind::WrongParity, "even index needs an even Fredholm module");
  require_same_geometry(P.geometry, F.op.geometry);
  require_projector(P.matrix);
  const int s = F.clifford.spinor_dim;
  const int h = s / 2;
  const int No = P.orbitals;
  const int sites = P.geometry.num_sites();

  // orthonormal basis of range(P)
  const EigenSystem es = eigendecompose(P.matrix);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) rank += es.eigenvalues[k] > 0.5;
  const Matrix Vo = es.eigenvectors.rightCols(rank);

  const Matrix Wp = eigenspace_basis(*F.clifford.grading, 1.0);
  const Matrix Wm = eigenspace_basis(*F.clifford.grading, -1.0);

  const Eigen::Index n = static_cast<Eigen::Index>(sites) * No * h;
  const Matrix B = lift_operator(Vo, h);  // range(P) (x) C^h
  Matrix GB(n, B.cols());                 // F_{-+} block applied to B
  for (int x = 0; x < sites; ++x) {
    const Matrix fx = Wm.adjoint() * F.op.matrix.block(static_cast<Eigen::Index>(x) * s, static_cast<Eigen::Index>(x) * s, s, s) * Wp;
    for (int a = 0; a < No; ++a) {
      const Eigen::Index o = (static_cast<Eigen::Index>(x) * No + a) * h;
      GB.middleRows(o, h) = fx * B.middleRows(o, h);
    }
  }
  const Matrix T = B.adjoint() * GB;
  const std::vector<char> core = core_mask(P.geometry, F.x0, opt.core_radius);
  return count_index(T, B, B, core, static_cast<Eigen::Index>(No) * h, opt.threshold);
}

FredholmResult fredholm_index_odd(const DenseOperator& U, const DiracPhase& F, const FredholmOptions& opt) {
  const int d = U.geometry.dim;
  if (d % 2 == 0 || F.clifford.grading) throw Error(ErrorKind::WrongParity, "odd index needs an odd Fredholm module");
  require_same_geometry(U.geometry, F.op.geometry);
  if (max_abs(U.matrix.adjoint() * U.matrix - Matrix::Identity(U.size(), U.size())) > 1e-8)
    throw Error(ErrorKind::InvalidArgument, "operator is not unitary");
  const int s = F.clifford.spinor_dim;
  const int No = U.orbitals;
  const int sites = U.geometry.num_sites();

  // isometry onto range(E), E = (1 + F) / 2, site by site
  std::vector<Matrix> Ex(sites);
  Eigen::Index cols = 0;
  for (int x = 0; x < sites; ++x) {
    Ex[x] = eigenspace_basis(F.op.matrix.block(static_cast<Eigen::Index>(x) * s, static_cast<Eigen::Index>(x) * s, s, s), 1.0);
    cols += Ex[x].cols() * No;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(sites) * No * s;
  Matrix B = Matrix::Zero(n, cols);
  Eigen::Index c = 0;
  for (int x = 0; x < sites; ++x)
    for (int a = 0; a < No; ++a) {
      const Eigen::Index o = (static_cast<Eigen::Index>(x) * No + a) * s;
      B.block(o, c, s, Ex[x].cols()) = Ex[x];
      c += Ex[x].cols();
    }
  const Matrix T = B.adjoint() * (lift_operator(U.matrix, s) * B);
  const std::vector<char> core = core_mask(U.geometry, F.x0, opt.core_radius);
  return count_index(T, B, B, core, static_cast<Eigen::Index>(No) * s, opt.threshold);
}

cplx cocycle_eval(const std::vector<DenseOperator>& f, const DiracPhase& F, double core_radius) {
  const Geometry& g = F.op.geometry;
  const int d = g.dim;
  if (static_cast<int>(f.size()) != d + 1) throw Error(ErrorKind::InvalidArgument, "cocycle needs d + 1 operators");
  const bool even = d % 2 == 0;
  if (even != F.clifford.grading.has_value()) throw Error(ErrorKind::WrongParity, "Fredholm module parity mismatch");
  const int No = f.front().orbitals;
  for (const auto& op : f) {
    require_same_geometry(op.geometry, g);
    if (op.orbitals != No) throw Error(ErrorKind::InvalidArgument, "cocycle operators differ in size");
  }
  const int s = F.clifford.spinor_dim;
  const Matrix Fl = lift_phase(F, No);
  Matrix eta = lift_operator(f[0].matrix, s);
  for (int i = 1; i <= d; ++i) {
    const Matrix fi = lift_operator(f[i].matrix, s);
    eta = eta * (Fl * fi - fi * Fl);
  }
  const std::vector<char> core = core_mask(g, F.x0, core_radius);
  const Eigen::Index per_site = static_cast<Eigen::Index>(No) * s;
  cplx tr = 0.0;
  for (Eigen::Index i = 0; i < eta.rows(); ++i) {
    if (!core[i / per_site]) continue;
    if (even) {
      const Eigen::Index spin = i % s;
      const Eigen::Index base = i - spin;
      for (int b = 0; b < s; ++b) tr += (*F.clifford.grading)(spin, b) * eta(base + b, i);
    } else {
      tr += eta(i, i);
    }
  }
  const cplx prefactor = even ? cplx(-1.0, 0.0) : i_power(d + 1) / std::pow(2.0, d);
  return prefactor * tr;
}

InvariantResult cocycle_average(const std::vector<std::vector<DenseOperator>>& f_by_realization,
                                const std::vector<std::vector<double>>& x0_samples, double core_radius) {
  if (f_by_realization.empty() || x0_samples.empty())
    throw Error(ErrorKind::InvalidArgument, "cocycle average needs realizations and x0 samples");
  std::vector<InvariantResult> parts;
  for (const auto& f : f_by_realization) {
    cplx acc = 0.0;
    for (const auto& x0 : x0_samples) acc += cocycle_eval(f, dirac_phase(f.front().geometry, x0), core_radius);
    InvariantResult r = InvariantResult::from_value(acc / static_cast<double>(x0_samples.size()));
    r.x0_samples = static_cast<int>(x0_samples.size());
    parts.push_back(r);
  }
  return aggregate(parts);
}

InvariantResult odd_pairing(const std::vector<DenseOperator>& u_by_realization,
                            const std::vector<std::vector<double>>& x0_samples, double core_radius) {
  std::vector<std::vector<DenseOperator>> fs;
  for (const auto& u : u_by_realization) {
    const int d = u.geometry.dim;
    if (d % 2 == 0) throw Error(ErrorKind::WrongParity, "odd pairing needs odd dimension");
    const Matrix id = Matrix::Identity(u.size(), u.size());
    const DenseOperator a(u.matrix.partialPivLu().inverse() - id, u.geometry, u.orbitals);
    const DenseOperator b(u.matrix - id, u.geometry, u.orbitals);
    std::vector<DenseOperator> f;
    for (int i = 0; i <= d; ++i) f.push_back(i % 2 == 0 ? a : b);
    fs.push_back(std::move(f));
  }
  return cocycle_average(fs, x0_samples, core_radius);
}

InvariantResult even_pairing(const std::vector<DenseOperator>& p_by_realization,
                             const std::vector<std::vector<double>>& x0_samples, double core_radius) {
  std::vector<std::vector<DenseOperator>> fs;
  for (const auto& p : p_by_realization) {
    const int d = p.geometry.dim;
    if (d % 2 != 0) throw Error(ErrorKind::WrongParity, "even pairing needs even dimension");
    fs.emplace_back(d + 1, p);
  }
  return cocycle_average(fs, x0_samples, core_radius);
}

IdentityResult geometric_identity_residual(int d, const std::vector<std::vector<double>>& points, double R, double step,
                                           IndexConvention conv) {
  if (d < 1 || d > 3) throw Error(ErrorKind::InvalidArgument, "geometric identities need d in 1..3");
  if (static_cast<int>(points.size()) != d + 1) throw Error(ErrorKind::InvalidArgument, "need d + 1 points");
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != d) throw Error(ErrorKind::InvalidArgument, "point has wrong dimension");
  if (!(R > 0.0) || !(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature box and step must be positive");

  IdentityResult res;
  if (std::all_of(points.begin(), points.end(), [&](const auto& p) { return p == points.front(); })) return res;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b]) throw Error(ErrorKind::InvalidArgument, "points must be distinct");

  std::vector<std::vector<double>> x(points.begin(), points.begin() + d);
  x.push_back(conv == IndexConvention::Independent ? points[d] : points[0]);

  // tr{G Gamma_a1 ... Gamma_ad} for all index tuples
  const CliffordRep rep = build_clifford_rep(d);
  const Matrix G = rep.grading ? *rep.grading : Matrix::Identity(rep.spinor_dim, rep.spinor_dim);
  int tuples = 1;
  for (int i = 0; i < d; ++i) tuples *= d;
  std::vector<cplx> coef(tuples);
  for (int t = 0; t < tuples; ++t) {
    Matrix M = G;
    int r = t;
    for (int i = 0; i < d; ++i) {
      M = M * rep.generators[r % d];
      r /= d;
    }
    coef[t] = M.trace();
  }

  const long M = std::lround(2.0 * R / step);
  long total = 1;
  for (int i = 0; i < d; ++i) total *= M;
  cplx lhs = 0.0;
  std::vector<double> u((d + 1) * d), w(d * d), q(d);
  for (long t = 0; t < total; ++t) {
    long r = t;
    for (int j = d - 1; j >= 0; --j) {
      q[j] = -R + step * (static_cast<double>(r % M) + 0.5);
      r /= M;
    }
    for (int i = 0; i <= d; ++i) {
      double n2 = 0.0;
      for (int j = 0; j < d; ++j) {
        u[i * d + j] = x[i][j] + q[j];
        n2 += u[i * d + j] * u[i * d + j];
      }
      const double inv = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 0.0;
      for (int j = 0; j < d; ++j) u[i * d + j] *= inv;
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[i * d + j] = u[i * d + j] - u[(i + 1) * d + j];
    cplx acc = 0.0;
    for (int tt = 0; tt < tuples; ++tt) {
      double prod = 1.0;
      int rr = tt;
      for (int i = 0; i < d; ++i) {
        prod *= w[i * d + rr % d];
        rr /= d;
      }
      acc += coef[tt] * prod;
    }
    lhs += acc;
  }
  lhs *= std::pow(step, d);

  RealMatrix D(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      D(i, j) = conv == IndexConvention::Independent ? x[i][j] - x[d][j] : x[i][j];
  cplx c;
  if (d % 2 == 1) {
    c = std::pow(2.0, (d + 1) / 2.0) * std::pow(2.0 * pi, (d - 1) / 2.0) / (i_power((d - 1) / 2) * double_factorial(d));
  } else {
    c = -std::pow(2.0 * pi, d / 2.0) / (i_power(d / 2) * factorial(d / 2));
  }
  res.lhs = lhs;
  res.rhs = c * D.determinant();
  res.residual = std::abs(res.lhs - res.rhs) / (1.0 + std::abs(res.rhs));
  return res;
}

double schatten_summability(const DenseOperator& f, const DiracPhase& F, double q) {
  if (!(q >= 1.0)) throw Error(ErrorKind::InvalidArgument, "Schatten exponent must be >= 1");
  require_same_geometry(f.geometry, F.op.geometry);
  const Matrix Fl = lift_phase(F, f.orbitals);
  const Matrix fl = lift_operator(f.matrix, F.clifford.spinor_dim);
  const Matrix C = Fl * fl - fl * Fl;
  Eigen::BDCSVD<Matrix> svd(C);
  double sum = 0.0;
  const RealVector sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) sum += std::pow(sv[k], q);
  return sum;
}

}  // namespace ncbloch
