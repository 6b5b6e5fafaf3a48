#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ncbloch/config.hpp"
#include "ncbloch/invariants.hpp"

namespace ncbloch {

std::string code_version();

struct ResultRecord {
  std::string model;
  double m = 0.0;
  int L = 0;
  std::string boundary;
  std::string disorder;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  int realization = -1;  // -1 for the mean record
  std::string invariant;
  std::string status = "ok";  // ok | gapless | error
  std::optional<cplx> value;
  std::optional<long> nearest_integer;
  std::optional<double> deviation;
  std::optional<double> std_error;
  int realizations = 0;
  int x0_samples = 0;
  std::optional<double> localization_rate;
  std::optional<double> wall_time_ms;
  std::string message;
};

std::string to_jsonl(const ResultRecord& r);
std::string csv_header();
std::string to_csv(const ResultRecord& r);

struct SweepSummary {
  int records = 0;
  int gapless = 0;
  int errors = 0;
};

// Runs the grid on `threads` workers. Records reach the sink in a fixed
// order (point, then realization, then invariant, mean records last) from
// the calling thread.
SweepSummary run_sweep(const SweepConfig& cfg, const std::function<void(const ResultRecord&)>& sink, int threads);

// --threads, then NCBLOCH_THREADS, then the hardware concurrency
int resolve_threads(std::optional<int> requested);

}  // namespace ncbloch
