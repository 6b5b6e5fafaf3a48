#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncbloch/types.hpp"

namespace ncbloch {

enum class Boundary { Open, Periodic };

const char* to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

// Hypercubic box of L^d sites. Sites are ranked in row-major order, the last
// coordinate running fastest.
struct Geometry {
  int dim = 1;
  int L = 1;
  Boundary boundary = Boundary::Periodic;

  Geometry() = default;
  Geometry(int dim, int L, Boundary boundary);

  int num_sites() const;
  LatticeVector coords(int rank) const;
  int rank(const LatticeVector& x) const;
  // wraps every component into [0, L)
  LatticeVector wrap(const LatticeVector& x) const;
  // representative of delta in (-L/2, L/2]
  int nearest_image(int delta) const;
  // coordinate measured from the box centre, x - floor(L/2)
  double centered(int coord) const;
};

struct ChiralStructure {
  Matrix S;
  Matrix S_plus;
  Matrix S_minus;
  Matrix R;

  static ChiralStructure make(const Matrix& S, const Matrix& R);
  // max deviation over S^2 = 1, S = S^dagger, rank(S+) = rank(S-),
  // R unitary and R S+ R^-1 = S-
  double residual() const;
};

struct ModelSpec {
  std::string name;
  Geometry geometry;
  int orbitals = 1;
  std::map<LatticeVector, Matrix> hoppings;
  RealMatrix magnetic_form;  // antisymmetric d x d, x^y = x.B.y / 2
  std::optional<ChiralStructure> chiral;
  std::map<std::string, double> params;

  int dim() const { return geometry.dim; }
  int L() const { return geometry.L; }
  Boundary boundary() const { return geometry.boundary; }
};

enum class DisorderKind { BondUniform, OnsiteUniform };

const char* to_string(DisorderKind k);
DisorderKind parse_disorder_kind(const std::string& s);

struct DisorderSpec {
  DisorderKind kind = DisorderKind::BondUniform;
  double strength = 0.0;
  std::uint64_t seed = 0;
};

// One configuration omega. Bond values are stored per (owner site, bond
// class): the bond {a, a + r} with r lexicographically non-negative is owned
// by a. Onsite values are stored per site with a single class. The holonomy
// fixes the boundary sector of the torus and is part of the configuration
// when a magnetic field is present.
struct DisorderRealization {
  DisorderKind kind = DisorderKind::BondUniform;
  double strength = 0.0;
  std::uint64_t seed_used = 0;
  int index = 0;
  std::vector<LatticeVector> bond_classes;
  std::vector<double> values;  // owner_rank * classes + class
  std::vector<double> holonomy;

  int num_classes() const { return static_cast<int>(bond_classes.size()); }
  double value(int owner_rank, int cls) const;
};

// Matrix on lattice (x) internal space, flat index = site_rank * orbitals + a.
struct DenseOperator {
  Matrix matrix;
  Geometry geometry;
  int orbitals = 1;

  DenseOperator() = default;
  DenseOperator(Matrix m, Geometry g, int orbitals);
  Eigen::Index size() const { return matrix.rows(); }
};

// Hermiticity of the hopping table, antisymmetry of the magnetic form and the
// hopping range; throws invalid-model.
void validate_model(const ModelSpec& spec);

// Magnetic form actually used: on a torus each entry is rounded to the
// nearest multiple of 2 pi / L^2 so that magnetic translations close.
RealMatrix effective_magnetic_form(const ModelSpec& spec);

// Lexicographically non-negative representatives of the hopping
// displacements, sorted.
std::vector<LatticeVector> bond_classes(const ModelSpec& spec);

DisorderRealization realize_disorder(const ModelSpec& spec, const DisorderSpec& dis, int realization_index);

DenseOperator build_hamiltonian(const ModelSpec& spec, const DisorderRealization& omega);
DenseOperator build_hamiltonian(const ModelSpec& spec, const DisorderSpec& dis, int realization_index);
DenseOperator build_hamiltonian(const ModelSpec& spec);  // clean

// (t_a omega)_{x,y} = omega_{x+a,y+a}; the holonomy is shifted by the flux
// so that U_a H_omega U_a^-1 = H_{t_a omega}.
DisorderRealization translate_disorder(const ModelSpec& spec, const DisorderRealization& omega, const LatticeVector& a);

// (U_a psi)(x) = e^{i a^x} psi(x + a) on the boundary sector given by holonomy.
DenseOperator magnetic_translation(const ModelSpec& spec, const LatticeVector& a,
                                   const std::vector<double>& holonomy = {});

// ssh, qwz or chiral3d with mass m
ModelSpec gallery_model(const std::string& name, double m, int L, Boundary boundary);
std::vector<std::string> gallery_names();
int gallery_dimension(const std::string& name);

// max |(1 x S) H (1 x S) + H|
double chiral_symmetry_check(const DenseOperator& H, const ChiralStructure& cs);

// H(k) = sum_r t_r e^{-i k.r}, the symbol of the clean translation-invariant
// operator H_xy = t_{x-y}
Matrix bloch_hamiltonian(const ModelSpec& spec, const std::vector<double>& k);

// 1_sites (x) local, local may be rectangular
Matrix site_diagonal(const Geometry& g, const Matrix& local);

}  // namespace ncbloch
