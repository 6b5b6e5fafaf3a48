#include "ncbloch/nccalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncbloch/error.hpp"

namespace ncbloch {

namespace {

int displacement(const Geometry& g, int xj, int yj, TraceStrategy::Mode mode) {
  return mode == TraceStrategy::Mode::PeriodicSawtooth ? g.nearest_image(xj - yj) : xj - yj;
}

}  // namespace

TraceStrategy TraceStrategy::open_bulk(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorKind::InvalidArgument, "bulk fraction must lie in (0, 1]");
  TraceStrategy s;
  s.mode = Mode::OpenBulk;
  s.bulk_fraction = fraction;
  return s;
}

const char* to_string(TraceStrategy::Mode m) {
  return m == TraceStrategy::Mode::PeriodicSawtooth ? "periodic" : "open_bulk";
}

TraceStrategy::Mode parse_trace_mode(const std::string& s) {
  if (s == "periodic") return TraceStrategy::Mode::PeriodicSawtooth;
  if (s == "open_bulk") return TraceStrategy::Mode::OpenBulk;
  throw Error(ErrorKind::InvalidArgument, "unknown trace strategy '" + s + "'");
}

std::vector<int> bulk_sites(const Geometry& g, double fraction) {
  int count = static_cast<int>(std::ceil(fraction * g.L - 1e-12));
  count = std::clamp(count, 1, g.L);
  const int start = (g.L - count) / 2;
  std::vector<int> out;
  for (int s = 0; s < g.num_sites(); ++s) {
    const LatticeVector x = g.coords(s);
    bool in = true;
    for (int c : x) in = in && c >= start && c < start + count;
    if (in) out.push_back(s);
  }
  return out;
}

cplx nc_trace(const DenseOperator& A, const TraceStrategy& s) {
  const Eigen::Index N = A.orbitals;
  if (s.mode == TraceStrategy::Mode::PeriodicSawtooth) return A.matrix.trace() / static_cast<double>(A.geometry.num_sites());
  const std::vector<int> sites = bulk_sites(A.geometry, s.bulk_fraction);
  cplx t = 0.0;
  for (int x : sites)
    for (Eigen::Index a = 0; a < N; ++a) t += A.matrix(x * N + a, x * N + a);
  return t / static_cast<double>(sites.size());
}

DenseOperator nc_derivative(const DenseOperator& A, int j, const TraceStrategy& s) {
  const Geometry& g = A.geometry;
  if (j < 0 || j >= g.dim) throw Error(ErrorKind::InvalidArgument, "derivative direction out of range");
  const Eigen::Index N = A.orbitals;
  const int sites = g.num_sites();
  std::vector<int> coord(sites);
  for (int x = 0; x < sites; ++x) coord[x] = g.coords(x)[j];
  Matrix out(A.matrix.rows(), A.matrix.cols());
  for (int y = 0; y < sites; ++y)
    for (int x = 0; x < sites; ++x) {
      const int dx = displacement(g, coord[x], coord[y], s.mode);
      out.block(x * N, y * N, N, N) = (I_unit * static_cast<double>(dx)) * A.matrix.block(x * N, y * N, N, N);
    }
  return DenseOperator(std::move(out), g, A.orbitals);
}

double integration_by_parts_check(const DenseOperator& A, const DenseOperator& B, int j, const TraceStrategy& s) {
  DenseOperator left(A.matrix * nc_derivative(B, j, s).matrix, A.geometry, A.orbitals);
  DenseOperator right(nc_derivative(A, j, s).matrix * B.matrix, A.geometry, A.orbitals);
  return std::abs(nc_trace(left, s) + nc_trace(right, s));
}

double gns_norm(const DenseOperator& f, const TraceStrategy& s) {
  DenseOperator ff(f.matrix * f.matrix.adjoint(), f.geometry, f.orbitals);
  return std::sqrt(std::max(0.0, nc_trace(ff, s).real()));
}

DecayFit localization_profile(const DenseOperator& A) {
  const Geometry& g = A.geometry;
  const Eigen::Index N = A.orbitals;
  const int sites = g.num_sites();
  const bool periodic = g.boundary == Boundary::Periodic;
  std::vector<LatticeVector> xs(sites);
  for (int x = 0; x < sites; ++x) xs[x] = g.coords(x);

  std::vector<double> sum, count;
  for (int x = 0; x < sites; ++x)
    for (int y = 0; y < sites; ++y) {
      double r2 = 0.0;
      for (int j = 0; j < g.dim; ++j) {
        const int dj = periodic ? g.nearest_image(xs[x][j] - xs[y][j]) : xs[x][j] - xs[y][j];
        r2 += static_cast<double>(dj) * dj;
      }
      const auto shell = static_cast<std::size_t>(std::lround(std::sqrt(r2)));
      if (shell >= sum.size()) {
        sum.resize(shell + 1, 0.0);
        count.resize(shell + 1, 0.0);
      }
      sum[shell] += A.matrix.block(x * N, y * N, N, N).norm();
      count[shell] += 1.0;
    }

  DecayFit fit;
  fit.shells.resize(sum.size(), 0.0);
  double top = 0.0;
  for (std::size_t r = 0; r < sum.size(); ++r) {
    fit.shells[r] = count[r] > 0 ? sum[r] / count[r] : 0.0;
    top = std::max(top, fit.shells[r]);
  }
  const double floor = 1e-12 * top;
  std::vector<double> rs, ls;
  for (std::size_t r = 1; r < fit.shells.size(); ++r)
    if (count[r] > 0 && fit.shells[r] > floor) {
      rs.push_back(static_cast<double>(r));
      ls.push_back(std::log(fit.shells[r]));
    }
  if (rs.empty()) {
    fit.amplitude = fit.shells.empty() ? 0.0 : fit.shells[0];
    fit.rate = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (rs.size() == 1) {
    if (fit.shells[0] > floor) {
      rs.insert(rs.begin(), 0.0);
      ls.insert(ls.begin(), std::log(fit.shells[0]));
    } else {
      fit.amplitude = std::exp(ls[0]);
      fit.rate = 0.0;
      return fit;
    }
  }
  const double n = static_cast<double>(rs.size());
  double mr = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    mr += rs[i] / n;
    ml += ls[i] / n;
  }
  double srr = 0.0, srl = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    srr += (rs[i] - mr) * (rs[i] - mr);
    srl += (rs[i] - mr) * (ls[i] - ml);
  }
  const double slope = srl / srr;
  fit.rate = -slope;
  fit.amplitude = std::exp(ml - slope * mr);
  return fit;
}

}  // namespace ncbloch
