#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ncbloch/clifford.hpp"
#include "ncbloch/config.hpp"
#include "ncbloch/error.hpp"
#include "ncbloch/invariants.hpp"
#include "ncbloch/kspace.hpp"
#include "ncbloch/spectral.hpp"
#include "ncbloch/sweep.hpp"
#include "ncbloch/verify.hpp"

namespace py = pybind11;
using namespace ncbloch;

namespace {

struct Point {
  std::string model;
  double m;
  int L;
  std::string boundary;
  std::string disorder;
  double strength;
  std::uint64_t seed;
  int realization;
};

ModelSpec spec_of(const Point& p) { return gallery_model(p.model, p.m, p.L, parse_boundary(p.boundary)); }

DenseOperator hamiltonian_of(const Point& p) {
  return build_hamiltonian(spec_of(p), DisorderSpec{parse_disorder_kind(p.disorder), p.strength, p.seed}, p.realization);
}

DenseOperator unitary_of(const Point& p) {
  const ModelSpec spec = spec_of(p);
  if (!spec.chiral) throw Error(ErrorKind::NotChiral, "model has no chiral structure");
  return flat_band_unitary(hamiltonian_sign(hamiltonian_of(p)), *spec.chiral).reduced;
}

TraceStrategy strategy(const std::string& trace, double fraction) {
  return parse_trace_mode(trace) == TraceStrategy::Mode::OpenBulk ? TraceStrategy::open_bulk(fraction)
                                                                 : TraceStrategy::periodic();
}

#define POINT_ARGS                                                                                             \
  py::arg("model"), py::arg("m"), py::arg("L"), py::arg("boundary") = "periodic", py::arg("disorder") = "bond", \
      py::arg("strength") = 0.0, py::arg("seed") = 0, py::arg("realization") = 0

void add_model_bindings(py::module_& m) {
  m.def(
      "clifford",
      [](int n) {
        const CliffordRep rep = build_clifford_rep(n);
        py::object grading = py::none();
        if (rep.grading) grading = py::cast(*rep.grading);
        return py::make_tuple(rep.generators, grading);
      },
      py::arg("n"), "generators and grading (None for odd n) of the irreducible C_{n,0} rep");
  m.def("gallery_names", &gallery_names);
  m.def(
      "hamiltonian",
      [](std::string model, double mass, int L, std::string boundary, std::string disorder, double strength,
         std::uint64_t seed, int realization) {
        return hamiltonian_of({model, mass, L, boundary, disorder, strength, seed, realization}).matrix;
      },
      POINT_ARGS);
  m.def(
      "bloch_hamiltonian",
      [](std::string model, double mass, std::vector<double> k) {
        return bloch_hamiltonian(gallery_model(model, mass, 8, Boundary::Periodic), k);
      },
      py::arg("model"), py::arg("m"), py::arg("k"));
  m.def(
      "fermi_projector",
      [](std::string model, double mass, int L, std::string boundary, std::string disorder, double strength,
         std::uint64_t seed, int realization) {
        return fermi_projector(hamiltonian_of({model, mass, L, boundary, disorder, strength, seed, realization})).matrix;
      },
      POINT_ARGS);
}

void add_invariant_bindings(py::module_& m) {
  m.def(
      "chern_number",
      [](std::string model, double mass, int L, std::string boundary, std::string disorder, double strength,
         std::uint64_t seed, int realization, std::string trace, double bulk_fraction) {
        const Point p{model, mass, L, boundary, disorder, strength, seed, realization};
        const TraceStrategy s = strategy(trace, bulk_fraction);
        if (gallery_dimension(model) % 2 == 0) return chern_even(fermi_projector(hamiltonian_of(p)), s).value;
        return chern_odd(unitary_of(p), s).value;
      },
      POINT_ARGS, py::arg("trace") = "periodic", py::arg("bulk_fraction") = 0.5,
      "real-space Chern number of the matching parity");
  m.def(
      "fredholm_index",
      [](std::string model, double mass, int L, std::string boundary, std::string disorder, double strength,
         std::uint64_t seed, int realization, std::vector<double> x0, double threshold) {
        const Point p{model, mass, L, boundary, disorder, strength, seed, realization};
        FredholmOptions opt;
        opt.threshold = threshold;
        const Geometry g = spec_of(p).geometry;
        if (gallery_dimension(model) % 2 == 0)
          return fredholm_index_even(fermi_projector(hamiltonian_of(p)), dirac_phase(g, x0), opt).index;
        return fredholm_index_odd(unitary_of(p), dirac_phase(g, x0), opt).index;
      },
      POINT_ARGS, py::arg("x0"), py::arg("threshold") = 1e-2);
  m.def(
      "cocycle_pairing",
      [](std::string model, double mass, int L, std::string boundary, std::string disorder, double strength,
         std::uint64_t seed, int realization, int x0_grid_size) {
        const Point p{model, mass, L, boundary, disorder, strength, seed, realization};
        const auto x0s = x0_grid(gallery_dimension(model), x0_grid_size);
        if (gallery_dimension(model) % 2 == 0) return even_pairing({fermi_projector(hamiltonian_of(p))}, x0s).value;
        return odd_pairing({unitary_of(p)}, x0s).value;
      },
      POINT_ARGS, py::arg("x0_grid") = 2);
  m.def(
      "kspace_invariant",
      [](std::string model, double mass, int grid) {
        const ModelSpec spec = gallery_model(model, mass, 8, Boundary::Periodic);
        if (spec.dim() == 2) return kspace_chern_2d(bloch_function_2d(spec), grid);
        if (spec.dim() == 1) return kspace_winding_1d(chiral_block_1d(spec), grid);
        throw Error(ErrorKind::InvalidArgument, "k-space invariants cover d = 1 and d = 2");
      },
      py::arg("model"), py::arg("m"), py::arg("grid") = 60);
  m.def(
      "geometric_identity",
      [](int d, std::vector<std::vector<double>> points, double R, double step) {
        const IdentityResult r = geometric_identity_residual(d, points, R, step);
        return py::make_tuple(r.lhs, r.rhs, r.residual);
      },
      py::arg("d"), py::arg("points"), py::arg("R") = 10.0, py::arg("step") = 0.1, "(lhs, rhs, relative residual)");
}

void add_driver_bindings(py::module_& m) {
  m.def(
      "verify",
      [](bool full) {
        py::list out;
        for (const auto& r : verify_suite(full ? VerifyLevel::Full : VerifyLevel::Quick)) {
          py::dict d;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["residual"] = r.residual;
          d["tolerance"] = r.tolerance;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("full") = false);
  m.def(
      "sweep_lines",
      [](std::string config_text, std::vector<std::string> overrides, int threads) {
        ConfigDocument doc = ConfigDocument::parse(config_text, "<python>");
        for (const auto& s : overrides) doc.apply_override(s);
        const SweepConfig cfg = sweep_config_from(doc);
        std::vector<std::string> lines;
        {
          py::gil_scoped_release release;
          run_sweep(cfg, [&](const ResultRecord& r) { lines.push_back(to_jsonl(r)); }, threads);
        }
        return lines;
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{}, py::arg("threads") = 1,
      "JSONL records of a sweep given the config file contents");
  m.def("code_version", &code_version);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "real-space topological invariants of disordered lattice models";
  py::register_exception<Error>(m, "NcblochError", PyExc_RuntimeError);
  add_model_bindings(m);
  add_invariant_bindings(m);
  add_driver_bindings(m);
  m.attr("__version__") = code_version();
}
