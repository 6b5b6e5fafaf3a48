#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncbloch/clifford.hpp"
#include "ncbloch/config.hpp"
#include "ncbloch/error.hpp"
#include "ncbloch/sweep.hpp"
#include "ncbloch/verify.hpp"

using namespace ncbloch;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kRuntime = 2;

std::string quote_value(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

int run(const SweepConfig& cfg, std::optional<int> threads) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (cfg.output_path != "-") {
    file.open(cfg.output_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::ConfigError, "cannot open output file " + cfg.output_path);
    out = &file;
  }
  const bool csv = cfg.format == "csv";
  if (csv) *out << csv_header() << '\n';
  const SweepSummary summary = run_sweep(
      cfg,
      [&](const ResultRecord& r) {
        *out << (csv ? to_csv(r) : to_jsonl(r)) << '\n';
        out->flush();
      },
      resolve_threads(threads));
  std::cerr << summary.records << " records, " << summary.gapless << " gapless, " << summary.errors << " errors\n";
  return summary.errors > 0 ? kRuntime : kOk;
}

void print_matrix(const Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::string line = " ";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %+.1f%+.1fi", M(i, j).real() + 0.0, M(i, j).imag() + 0.0);
      line += buf;
    }
    std::cout << line << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-space topological invariants of disordered lattice models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep described by a config file");
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<int> threads;
  std::string output, format;
  bool timing = false;
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--set", overrides, "override a config entry, key=value")->allow_extra_args(false);
  sweep->add_option("--threads", threads, "worker threads (default: NCBLOCH_THREADS or all cores)");
  sweep->add_option("--output", output, "output path, - for stdout");
  sweep->add_option("--format", format, "jsonl or csv");
  sweep->add_flag("--timing", timing, "record wall times (output is then not reproducible)");

  // invariant
  auto* inv = app.add_subcommand("invariant", "compute invariants for a single model point");
  std::string model = "qwz", kind = "all", trace = "periodic", disorder = "bond", boundary;
  double m = 1.0, lambda = 0.0, bulk_fraction = 0.5, threshold = 1e-2;
  int L = 16, realizations = 1, x0_grid = 2;
  unsigned long long seed = 0;
  inv->add_option("--model", model, "ssh, qwz or chiral3d")->capture_default_str();
  inv->add_option("--m", m, "mass parameter")->capture_default_str();
  inv->add_option("--L", L, "linear size")->capture_default_str();
  inv->add_option("--lambda", lambda, "disorder strength")->capture_default_str();
  inv->add_option("--disorder", disorder, "bond or onsite")->capture_default_str();
  inv->add_option("--realizations", realizations)->capture_default_str();
  inv->add_option("--seed", seed)->capture_default_str();
  inv->add_option("--invariant", kind, "all or chern_even, index_even, pairing_even, chern_odd, index_odd, pairing_odd")->capture_default_str();
  inv->add_option("--trace", trace, "periodic or open_bulk")->capture_default_str();
  inv->add_option("--bulk-fraction", bulk_fraction)->capture_default_str();
  inv->add_option("--boundary", boundary, "periodic or open (default follows --trace)");
  inv->add_option("--x0-grid", x0_grid, "x0 samples per direction")->capture_default_str();
  inv->add_option("--index-threshold", threshold)->capture_default_str();
  inv->add_option("--threads", threads);
  inv->add_option("--format", format, "jsonl or csv");

  // verify
  auto* ver = app.add_subcommand("verify", "run the built-in identity checks");
  bool full = false;
  ver->add_flag("--full", full, "fine quadrature and the clean Chern check");

  // clifford
  auto* cl = app.add_subcommand("clifford", "print Clifford generators");
  int n = 2;
  cl->add_option("--n", n, "number of generators")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*sweep) {
      ConfigDocument doc = ConfigDocument::load(config_path);
      for (const auto& s : overrides) doc.apply_override(s);
      if (!output.empty()) doc.apply_override("output.path=" + quote_value(output));
      if (!format.empty()) doc.apply_override("output.format=" + quote_value(format));
      if (timing) doc.apply_override("output.timing=true");
      const SweepConfig cfg = sweep_config_from(doc);
      validate_sweep_config(cfg);
      return run(cfg, threads);
    }
    if (*inv) {
      ConfigDocument doc = ConfigDocument::parse("", "invariant");
      doc.apply_override("model.name=" + quote_value(model));
      doc.apply_override("model.m=" + std::to_string(m));
      doc.apply_override("model.L=" + std::to_string(L));
      if (!boundary.empty()) doc.apply_override("model.boundary=" + quote_value(boundary));
      doc.apply_override("disorder.kind=" + quote_value(disorder));
      doc.apply_override("disorder.lambda=" + std::to_string(lambda));
      doc.apply_override("disorder.realizations=" + std::to_string(realizations));
      doc.apply_override("disorder.seed=" + std::to_string(seed));
      doc.apply_override("invariant.kind=" + quote_value(kind));
      doc.apply_override("invariant.trace_strategy=" + quote_value(trace));
      doc.apply_override("invariant.bulk_fraction=" + std::to_string(bulk_fraction));
      doc.apply_override("invariant.x0_grid=" + std::to_string(x0_grid));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", threshold);
      doc.apply_override(std::string("invariant.index_threshold=") + buf);
      if (!format.empty()) doc.apply_override("output.format=" + quote_value(format));
      const SweepConfig cfg = sweep_config_from(doc);
      validate_sweep_config(cfg);
      return run(cfg, threads);
    }
    if (*ver) {
      bool ok = true;
      for (const auto& r : verify_suite(full ? VerifyLevel::Full : VerifyLevel::Quick)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %-22s residual %.3e  tol %.1e  ", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                      r.residual, r.tolerance);
        std::cout << buf << r.detail << '\n';
        ok = ok && r.passed;
      }
      return ok ? kOk : kFailure;
    }
    if (*cl) {
      const CliffordRep rep = build_clifford_rep(n);
      std::cout << "n = " << rep.n << ", spinor dimension " << rep.spinor_dim << '\n';
      for (int i = 0; i < rep.n; ++i) {
        std::cout << "Gamma_" << i + 1 << '\n';
        print_matrix(rep.generators[i]);
      }
      if (rep.grading) {
        std::cout << "grading\n";
        print_matrix(*rep.grading);
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "ncbloch: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::InvalidArgument ||
                   e.kind() == ErrorKind::WrongParity || e.kind() == ErrorKind::InvalidModel
               ? kFailure
               : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "ncbloch: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
