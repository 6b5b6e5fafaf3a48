#include "ncbloch/clifford.hpp"

#include <algorithm>
#include <cmath>

#include "ncbloch/error.hpp"

namespace ncbloch {

namespace {

cplx minus_i_power(int p) {
  static const cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return table[((p % 4) + 4) % 4];
}

// sigma_1..sigma_n (n odd) -> gamma_1..gamma_{n+1}
std::vector<Matrix> embed_even(const std::vector<Matrix>& sigma) {
  const Eigen::Index m = sigma.front().rows();
  std::vector<Matrix> gamma;
  for (const auto& s : sigma) {
    Matrix g = Matrix::Zero(2 * m, 2 * m);
    g.topRightCorner(m, m) = s;
    g.bottomLeftCorner(m, m) = s;
    gamma.push_back(g);
  }
  Matrix g = Matrix::Zero(2 * m, 2 * m);
  g.topRightCorner(m, m) = -I_unit * Matrix::Identity(m, m);
  g.bottomLeftCorner(m, m) = I_unit * Matrix::Identity(m, m);
  gamma.push_back(g);
  return gamma;
}

// (-i)^{k/2} gamma_1 ... gamma_k for k = gamma.size() even
Matrix product_generator(const std::vector<Matrix>& gamma) {
  Matrix p = gamma.front();
  for (std::size_t i = 1; i < gamma.size(); ++i) p = p * gamma[i];
  return minus_i_power(static_cast<int>(gamma.size()) / 2) * p;
}

}  // namespace

int spinor_dimension(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Clifford rank must be >= 1");
  return 1 << (n / 2);
}

CliffordRep build_clifford_rep(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Clifford rank must be >= 1");
  if (n > 20) throw Error(ErrorKind::InvalidArgument, "Clifford rank too large");
  std::vector<Matrix> sigma{Matrix::Identity(1, 1)};
  CliffordRep rep;
  rep.n = n;
  for (int k = 1;; k += 2) {
    if (k == n) {
      rep.generators = sigma;
      break;
    }
    std::vector<Matrix> gamma = embed_even(sigma);
    Matrix top = product_generator(gamma);
    if (k + 1 == n) {
      rep.generators = gamma;
      rep.grading = top;
      break;
    }
    gamma.push_back(top);
    sigma = std::move(gamma);
  }
  rep.spinor_dim = static_cast<int>(rep.generators.front().rows());
  return rep;
}

double anticommutation_residual(const CliffordRep& rep) {
  double worst = 0.0;
  const auto& g = rep.generators;
  const Eigen::Index m = rep.spinor_dim;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, max_abs(g[i] - g[i].adjoint()));
    for (std::size_t j = i; j < g.size(); ++j) {
      Matrix ac = g[i] * g[j] + g[j] * g[i];
      if (i == j) ac -= 2.0 * Matrix::Identity(m, m);
      worst = std::max(worst, max_abs(ac));
    }
  }
  return worst;
}

double grading_residual(const CliffordRep& rep) {
  if (!rep.grading) return 0.0;
  const Matrix& gr = *rep.grading;
  const Eigen::Index m = rep.spinor_dim;
  double worst = max_abs(gr * gr - Matrix::Identity(m, m));
  worst = std::max(worst, max_abs(gr - gr.adjoint()));
  for (const auto& g : rep.generators) worst = std::max(worst, max_abs(gr * g + g * gr));
  return worst;
}

}  // namespace ncbloch
