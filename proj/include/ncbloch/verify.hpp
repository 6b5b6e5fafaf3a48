#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ncbloch/clifford.hpp"

namespace ncbloch {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

enum class VerifyLevel { Quick, Full };

std::vector<CheckResult> verify_suite(VerifyLevel level);

CheckResult check_clifford(int n_max, const std::function<CliffordRep(int)>& builder = build_clifford_rep);
CheckResult check_covariance(double flux_per_plaquette);
CheckResult check_cyclicity();
CheckResult check_integration_by_parts();
CheckResult check_leibniz();
CheckResult check_dirac_phase();
CheckResult check_geometric_identity(double R, double step);

}  // namespace ncbloch
