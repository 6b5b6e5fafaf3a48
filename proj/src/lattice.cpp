#include "ncbloch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncbloch/clifford.hpp"
#include "ncbloch/error.hpp"

namespace ncbloch {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// counter-based draw, uniform on [-1/2, 1/2)
double draw(std::uint64_t seed, std::uint64_t index, std::uint64_t owner, std::uint64_t cls) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ owner);
  h = splitmix64(h ^ cls);
  return static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool lex_positive(const LatticeVector& r) {
  for (int c : r) {
    if (c != 0) return c > 0;
  }
  return false;
}

bool is_zero(const LatticeVector& r) {
  return std::all_of(r.begin(), r.end(), [](int c) { return c == 0; });
}

LatticeVector negate(const LatticeVector& r) {
  LatticeVector out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = -r[i];
  return out;
}

template <class A, class B>
double wedge(const RealMatrix& Bf, const A& x, const B& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < Bf.rows(); ++i)
    for (Eigen::Index j = 0; j < Bf.cols(); ++j) s += x[i] * Bf(i, j) * y[j];
  return 0.5 * s;
}

// phase chi with psi(p + L n) = e^{i chi} psi(p) in the sector
// psi(p + L e_j) = e^{i theta_j} e^{-i L e_j^p} psi(p)
double sector_phase(const RealMatrix& Bf, const std::vector<double>& theta, LatticeVector p, LatticeVector n, int L) {
  const int d = static_cast<int>(p.size());
  double phase = 0.0;
  for (int j = 0; j < d; ++j) {
    while (n[j] != 0) {
      double ej_p = 0.0;
      for (int k = 0; k < d; ++k) ej_p += 0.5 * Bf(j, k) * p[k];
      if (n[j] > 0) {
        phase += theta[j] - L * ej_p;
        p[j] += L;
        --n[j];
      } else {
        phase += -theta[j] + L * ej_p;
        p[j] -= L;
        ++n[j];
      }
    }
  }
  return phase;
}

std::vector<double> holonomy_or_zero(const std::vector<double>& h, int d) {
  if (h.empty()) return std::vector<double>(d, 0.0);
  if (static_cast<int>(h.size()) != d) throw Error(ErrorKind::InvalidArgument, "holonomy has wrong dimension");
  return h;
}

void check_vector(const Geometry& g, const LatticeVector& a) {
  if (static_cast<int>(a.size()) != g.dim) throw Error(ErrorKind::InvalidArgument, "lattice vector has wrong dimension");
}

}  // namespace

const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw Error(ErrorKind::InvalidArgument, "unknown boundary '" + s + "'");
}

const char* to_string(DisorderKind k) { return k == DisorderKind::BondUniform ? "bond" : "onsite"; }

DisorderKind parse_disorder_kind(const std::string& s) {
  if (s == "bond") return DisorderKind::BondUniform;
  if (s == "onsite") return DisorderKind::OnsiteUniform;
  throw Error(ErrorKind::InvalidArgument, "unknown disorder kind '" + s + "'");
}

Geometry::Geometry(int dim_, int L_, Boundary b) : dim(dim_), L(L_), boundary(b) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "L must be positive");
}

int Geometry::num_sites() const {
  int n = 1;
  for (int i = 0; i < dim; ++i) n *= L;
  return n;
}

LatticeVector Geometry::coords(int r) const {
  LatticeVector x(dim);
  for (int i = dim - 1; i >= 0; --i) {
    x[i] = r % L;
    r /= L;
  }
  return x;
}

int Geometry::rank(const LatticeVector& x) const {
  int r = 0;
  for (int i = 0; i < dim; ++i) r = r * L + x[i];
  return r;
}

LatticeVector Geometry::wrap(const LatticeVector& x) const {
  LatticeVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = ((x[i] % L) + L) % L;
  return y;
}

int Geometry::nearest_image(int delta) const {
  int r = ((delta % L) + L) % L;  // [0, L)
  if (2 * r > L) r -= L;
  return r;
}

double Geometry::centered(int coord) const { return static_cast<double>(coord - L / 2); }

ChiralStructure ChiralStructure::make(const Matrix& S, const Matrix& R) {
  ChiralStructure cs;
  const Eigen::Index n = S.rows();
  cs.S = S;
  cs.R = R;
  cs.S_plus = 0.5 * (Matrix::Identity(n, n) + S);
  cs.S_minus = 0.5 * (Matrix::Identity(n, n) - S);
  return cs;
}

double ChiralStructure::residual() const {
  const Eigen::Index n = S.rows();
  const Matrix id = Matrix::Identity(n, n);
  double worst = max_abs(S * S - id);
  worst = std::max(worst, max_abs(S - S.adjoint()));
  worst = std::max(worst, std::abs(S.trace()));  // rank(S+) = rank(S-)
  worst = std::max(worst, max_abs(R.adjoint() * R - id));
  worst = std::max(worst, max_abs(R * S_plus * R.adjoint() - S_minus));
  return worst;
}

double DisorderRealization::value(int owner_rank, int cls) const {
  return values[static_cast<std::size_t>(owner_rank) * bond_classes.size() + cls];
}

DenseOperator::DenseOperator(Matrix m, Geometry g, int orb) : matrix(std::move(m)), geometry(g), orbitals(orb) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != static_cast<Eigen::Index>(g.num_sites()) * orb)
    throw Error(ErrorKind::InvalidArgument, "operator size does not match geometry");
}

void validate_model(const ModelSpec& spec) {
  const int d = spec.dim();
  const int N = spec.orbitals;
  if (N < 1) throw Error(ErrorKind::InvalidModel, "orbitals must be positive");
  if (spec.magnetic_form.size() != 0) {
    if (spec.magnetic_form.rows() != d || spec.magnetic_form.cols() != d)
      throw Error(ErrorKind::InvalidModel, "magnetic form must be d x d");
    if ((spec.magnetic_form + spec.magnetic_form.transpose()).cwiseAbs().maxCoeff() != 0.0)
      throw Error(ErrorKind::InvalidModel, "magnetic form must be antisymmetric");
  }
  for (const auto& [r, t] : spec.hoppings) {
    if (static_cast<int>(r.size()) != d) throw Error(ErrorKind::InvalidModel, "hopping vector has wrong dimension");
    if (t.rows() != N || t.cols() != N) throw Error(ErrorKind::InvalidModel, "hopping matrix has wrong size");
    for (int c : r) {
      if (spec.boundary() == Boundary::Periodic && 2 * std::abs(c) >= spec.L())
        throw Error(ErrorKind::InvalidModel, "hopping range must stay below L/2 on a torus");
      if (std::abs(c) >= spec.L()) throw Error(ErrorKind::InvalidModel, "hopping range exceeds the box");
    }
    auto it = spec.hoppings.find(negate(r));
    const double scale = std::max(1.0, max_abs(t));
    if (it == spec.hoppings.end()) {
      if (max_abs(t) != 0.0) throw Error(ErrorKind::InvalidModel, "hopping table is not Hermitian");
    } else if (max_abs(it->second - t.adjoint()) > 1e-12 * scale) {
      throw Error(ErrorKind::InvalidModel, "hopping table is not Hermitian");
    }
  }
}

RealMatrix effective_magnetic_form(const ModelSpec& spec) {
  const int d = spec.dim();
  if (spec.magnetic_form.size() == 0) return RealMatrix::Zero(d, d);
  RealMatrix B = spec.magnetic_form;
  if (spec.boundary() == Boundary::Periodic) {
    const double quantum = 2.0 * std::numbers::pi / (static_cast<double>(spec.L()) * spec.L());
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        B(i, j) = std::round(B(i, j) / quantum) * quantum;
        B(j, i) = -B(i, j);
      }
  }
  return B;
}

std::vector<LatticeVector> bond_classes(const ModelSpec& spec) {
  std::vector<LatticeVector> out;
  for (const auto& [r, t] : spec.hoppings) {
    LatticeVector rp = (is_zero(r) || lex_positive(r)) ? r : negate(r);
    if (std::find(out.begin(), out.end(), rp) == out.end()) out.push_back(rp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DisorderRealization realize_disorder(const ModelSpec& spec, const DisorderSpec& dis, int realization_index) {
  if (dis.strength < 0.0) throw Error(ErrorKind::InvalidArgument, "disorder strength must be >= 0");
  if (realization_index < 0) throw Error(ErrorKind::InvalidArgument, "realization index must be >= 0");
  DisorderRealization w;
  w.kind = dis.kind;
  w.strength = dis.strength;
  w.seed_used = dis.seed;
  w.index = realization_index;
  w.holonomy.assign(spec.dim(), 0.0);
  if (dis.kind == DisorderKind::BondUniform) {
    w.bond_classes = bond_classes(spec);
  } else {
    w.bond_classes = {LatticeVector(spec.dim(), 0)};
  }
  const int sites = spec.geometry.num_sites();
  const int nc = w.num_classes();
  w.values.resize(static_cast<std::size_t>(sites) * nc);
  const std::uint64_t kind_tag = dis.kind == DisorderKind::BondUniform ? 0 : 0x5a5a5a5a5a5a5a5aULL;
  for (int s = 0; s < sites; ++s)
    for (int c = 0; c < nc; ++c)
      w.values[static_cast<std::size_t>(s) * nc + c] =
          draw(dis.seed ^ kind_tag, static_cast<std::uint64_t>(realization_index), static_cast<std::uint64_t>(s),
               static_cast<std::uint64_t>(c));
  return w;
}

DenseOperator build_hamiltonian(const ModelSpec& spec, const DisorderRealization& omega) {
  validate_model(spec);
  const Geometry& g = spec.geometry;
  const int d = g.dim;
  const int L = g.L;
  const int N = spec.orbitals;
  const int sites = g.num_sites();
  const bool periodic = g.boundary == Boundary::Periodic;
  const RealMatrix B = effective_magnetic_form(spec);
  const std::vector<double> theta = holonomy_or_zero(omega.holonomy, d);
  const bool bond = omega.kind == DisorderKind::BondUniform && omega.strength != 0.0;
  const bool onsite = omega.kind == DisorderKind::OnsiteUniform && omega.strength != 0.0;
  if ((bond || onsite) && omega.values.size() != static_cast<std::size_t>(sites) * omega.bond_classes.size())
    throw Error(ErrorKind::InvalidArgument, "disorder realization does not match the model");

  std::map<LatticeVector, int> class_of;
  for (int c = 0; c < omega.num_classes(); ++c) class_of[omega.bond_classes[c]] = c;

  Matrix H = Matrix::Zero(static_cast<Eigen::Index>(sites) * N, static_cast<Eigen::Index>(sites) * N);
  for (int xr = 0; xr < sites; ++xr) {
    const LatticeVector x = g.coords(xr);
    for (const auto& [r, t] : spec.hoppings) {
      LatticeVector y(d), n(d, 0);
      bool inside = true;
      for (int j = 0; j < d; ++j) {
        y[j] = x[j] - r[j];
        if (y[j] < 0 || y[j] >= L) inside = false;
      }
      if (!periodic && !inside) continue;
      LatticeVector yt = y;
      if (periodic) {
        for (int j = 0; j < d; ++j) {
          n[j] = floor_div(y[j], L);
          yt[j] = y[j] - L * n[j];
        }
      }
      double phase = wedge(B, x, y);
      if (periodic) phase += sector_phase(B, theta, yt, n, L);
      double factor = 1.0;
      if (bond) {
        int owner;
        LatticeVector rp;
        if (is_zero(r) || !lex_positive(r)) {
          owner = xr;
          rp = is_zero(r) ? r : negate(r);
        } else {
          owner = g.rank(yt);
          rp = r;
        }
        factor += omega.strength * omega.value(owner, class_of.at(rp));
      }
      H.block(static_cast<Eigen::Index>(xr) * N, static_cast<Eigen::Index>(g.rank(yt)) * N, N, N) +=
          factor * std::exp(I_unit * phase) * t;
    }
    if (onsite) {
      const double v = omega.strength * omega.value(xr, 0);
      for (int a = 0; a < N; ++a) H(static_cast<Eigen::Index>(xr) * N + a, static_cast<Eigen::Index>(xr) * N + a) += v;
    }
  }
  if (max_abs(H - H.adjoint()) > 1e-12 * std::max(1.0, max_abs(H)))
    throw Error(ErrorKind::InvalidModel, "assembled Hamiltonian is not Hermitian");
  return DenseOperator(std::move(H), g, N);
}

DenseOperator build_hamiltonian(const ModelSpec& spec, const DisorderSpec& dis, int realization_index) {
  return build_hamiltonian(spec, realize_disorder(spec, dis, realization_index));
}

DenseOperator build_hamiltonian(const ModelSpec& spec) {
  DisorderRealization clean;
  clean.holonomy.assign(spec.dim(), 0.0);
  return build_hamiltonian(spec, clean);
}

DisorderRealization translate_disorder(const ModelSpec& spec, const DisorderRealization& omega, const LatticeVector& a) {
  const Geometry& g = spec.geometry;
  if (g.boundary != Boundary::Periodic)
    throw Error(ErrorKind::UnsupportedBoundary, "disorder translations are defined on the torus only");
  check_vector(g, a);
  DisorderRealization out = omega;
  const int nc = omega.num_classes();
  if (!omega.values.empty()) {
    for (int o = 0; o < g.num_sites(); ++o) {
      LatticeVector x = g.coords(o);
      for (int j = 0; j < g.dim; ++j) x[j] += a[j];
      const int src = g.rank(g.wrap(x));
      for (int c = 0; c < nc; ++c)
        out.values[static_cast<std::size_t>(o) * nc + c] = omega.values[static_cast<std::size_t>(src) * nc + c];
    }
  }
  const RealMatrix B = effective_magnetic_form(spec);
  std::vector<double> theta = holonomy_or_zero(omega.holonomy, g.dim);
  for (int j = 0; j < g.dim; ++j) {
    double shift = 0.0;
    for (int k = 0; k < g.dim; ++k) shift += a[k] * B(k, j);
    if (shift != 0.0) theta[j] = std::remainder(theta[j] + g.L * shift, 2.0 * std::numbers::pi);
  }
  out.holonomy = theta;
  return out;
}

DenseOperator magnetic_translation(const ModelSpec& spec, const LatticeVector& a, const std::vector<double>& holonomy) {
  const Geometry& g = spec.geometry;
  if (g.boundary != Boundary::Periodic)
    throw Error(ErrorKind::UnsupportedBoundary, "magnetic translations are defined on the torus only");
  check_vector(g, a);
  const int d = g.dim;
  const int N = spec.orbitals;
  const RealMatrix B = effective_magnetic_form(spec);
  const std::vector<double> theta = holonomy_or_zero(holonomy, d);
  const int sites = g.num_sites();
  Matrix U = Matrix::Zero(static_cast<Eigen::Index>(sites) * N, static_cast<Eigen::Index>(sites) * N);
  for (int xr = 0; xr < sites; ++xr) {
    const LatticeVector x = g.coords(xr);
    LatticeVector z(d), n(d), zt(d);
    for (int j = 0; j < d; ++j) {
      z[j] = x[j] + a[j];
      n[j] = floor_div(z[j], g.L);
      zt[j] = z[j] - g.L * n[j];
    }
    const double phase = wedge(B, a, x) + sector_phase(B, theta, zt, n, g.L);
    const cplx c = std::exp(I_unit * phase);
    for (int k = 0; k < N; ++k)
      U(static_cast<Eigen::Index>(xr) * N + k, static_cast<Eigen::Index>(g.rank(zt)) * N + k) = c;
  }
  return DenseOperator(std::move(U), g, N);
}

std::vector<std::string> gallery_names() { return {"ssh", "qwz", "chiral3d"}; }

int gallery_dimension(const std::string& name) {
  if (name == "ssh") return 1;
  if (name == "qwz") return 2;
  if (name == "chiral3d") return 3;
  throw Error(ErrorKind::InvalidArgument, "unknown gallery model '" + name + "'");
}

ModelSpec gallery_model(const std::string& name, double m, int L, Boundary boundary) {
  const int d = gallery_dimension(name);
  if (L < 4) throw Error(ErrorKind::InvalidArgument, "gallery models need L >= 4");
  ModelSpec spec;
  spec.name = name;
  spec.geometry = Geometry(d, L, boundary);
  spec.magnetic_form = RealMatrix::Zero(d, d);
  spec.params["m"] = m;
  const cplx half_i = 0.5 * I_unit;
  if (name == "ssh") {
    const CliffordRep pauli = build_clifford_rep(3);
    const Matrix &sx = pauli.generators[0], &sy = pauli.generators[1], &sz = pauli.generators[2];
    spec.orbitals = 2;
    spec.hoppings[{0}] = m * sx;
    spec.hoppings[{1}] = 0.5 * (sx + I_unit * sy);
    spec.hoppings[{-1}] = 0.5 * (sx - I_unit * sy);
    spec.chiral = ChiralStructure::make(sz, sx);
  } else if (name == "qwz") {
    const CliffordRep pauli = build_clifford_rep(3);
    const Matrix &sx = pauli.generators[0], &sy = pauli.generators[1], &sz = pauli.generators[2];
    spec.orbitals = 2;
    spec.hoppings[{0, 0}] = m * sz;
    spec.hoppings[{1, 0}] = half_i * sx - 0.5 * sz;
    spec.hoppings[{-1, 0}] = -half_i * sx - 0.5 * sz;
    spec.hoppings[{0, 1}] = half_i * sy - 0.5 * sz;
    spec.hoppings[{0, -1}] = -half_i * sy - 0.5 * sz;
  } else {
    const CliffordRep gam = build_clifford_rep(4);
    const Matrix& mass = gam.generators[3];
    spec.orbitals = 4;
    spec.hoppings[{0, 0, 0}] = m * mass;
    for (int j = 0; j < 3; ++j) {
      LatticeVector e(3, 0);
      e[j] = 1;
      spec.hoppings[e] = half_i * gam.generators[j] - 0.5 * mass;
      spec.hoppings[negate(e)] = -half_i * gam.generators[j] - 0.5 * mass;
    }
    Matrix R = Matrix::Zero(4, 4);
    R.topRightCorner(2, 2) = Matrix::Identity(2, 2);
    R.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
    spec.chiral = ChiralStructure::make(*gam.grading, R);
  }
  if (spec.chiral && spec.chiral->residual() > 1e-12)
    throw Error(ErrorKind::InvalidModel, "gallery chiral structure is inconsistent");
  return spec;
}

Matrix site_diagonal(const Geometry& g, const Matrix& local) {
  const Eigen::Index r = local.rows(), c = local.cols();
  const int sites = g.num_sites();
  Matrix out = Matrix::Zero(sites * r, sites * c);
  for (int s = 0; s < sites; ++s) out.block(s * r, s * c, r, c) = local;
  return out;
}

double chiral_symmetry_check(const DenseOperator& H, const ChiralStructure& cs) {
  if (cs.S.rows() != H.orbitals) throw Error(ErrorKind::InvalidArgument, "chiral structure does not match orbitals");
  const Eigen::Index N = H.orbitals;
  const int sites = H.geometry.num_sites();
  double worst = 0.0;
  // blockwise S H_xy S + H_xy
  for (int x = 0; x < sites; ++x)
    for (int y = 0; y < sites; ++y) {
      auto blk = H.matrix.block(x * N, y * N, N, N);
      worst = std::max(worst, max_abs(cs.S * blk * cs.S + blk));
    }
  return worst;
}

Matrix bloch_hamiltonian(const ModelSpec& spec, const std::vector<double>& k) {
  if (static_cast<int>(k.size()) != spec.dim()) throw Error(ErrorKind::InvalidArgument, "k has wrong dimension");
  Matrix h = Matrix::Zero(spec.orbitals, spec.orbitals);
  for (const auto& [r, t] : spec.hoppings) {
    double kr = 0.0;
    for (int j = 0; j < spec.dim(); ++j) kr += k[j] * r[j];
    h += std::exp(-I_unit * kr) * t;
  }
  return h;
}

}  // namespace ncbloch
