#include <catch2/catch.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "ncbloch/config.hpp"
#include "ncbloch/sweep.hpp"

using namespace ncbloch;

namespace {

SweepConfig small_sweep() {
  ConfigDocument doc = ConfigDocument::parse(R"([model]
name = "ssh"
m = [0.5, 2.0]
L = 24
[disorder]
lambda = 0.5
realizations = 3
seed = 5
)");
  return sweep_config_from(doc);
}

std::string run_to_string(const SweepConfig& cfg, int threads, SweepSummary* summary = nullptr) {
  std::ostringstream out;
  const SweepSummary s = run_sweep(cfg, [&](const ResultRecord& r) { out << to_jsonl(r) << '\n'; }, threads);
  if (summary) *summary = s;
  return out.str();
}

}  // namespace

TEST_CASE("records are ordered and complete") {
  SweepSummary s;
  const std::string text = run_to_string(small_sweep(), 2, &s);
  // 2 points x (3 realizations + mean) x 2 invariants
  CHECK(s.records == 16);
  CHECK(s.errors == 0);
  std::istringstream in(text);
  std::string line;
  std::vector<nlohmann::json> recs;
  while (std::getline(in, line)) recs.push_back(nlohmann::json::parse(line));
  REQUIRE(recs.size() == 16);
  CHECK(recs[0]["m"] == 0.5);
  CHECK(recs[0]["realization"] == 0);
  CHECK(recs[0]["invariant"] == "chern_odd");
  CHECK(recs[1]["invariant"] == "index_odd");
  CHECK(recs[6]["realization"] == "mean");
  CHECK(recs[8]["m"] == 2.0);
  for (const auto& r : recs) {
    CHECK(r["code_version"] == code_version());
    CHECK(r["status"] == "ok");
    CHECK(r["wall_time_ms"].is_null());
  }
  // mean reproduces from the realization records
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += recs[2 * i]["value_re"].get<double>();
  CHECK(recs[6]["value_re"].get<double>() == Approx(sum / 3.0).epsilon(1e-15));
  CHECK(recs[6]["nearest_integer"] == -1);
  CHECK(recs[14]["nearest_integer"] == 0);
}

TEST_CASE("output does not depend on the thread count") {
  const SweepConfig cfg = small_sweep();
  const std::string one = run_to_string(cfg, 1);
  CHECK(one == run_to_string(cfg, 3));
  CHECK(one == run_to_string(cfg, 1));
}

TEST_CASE("gapless points are flagged, not fatal") {
  SweepConfig cfg = small_sweep();
  cfg.m_values = {1.0};
  cfg.lambdas = {0.0};
  cfg.realizations = 1;
  SweepSummary s;
  const std::string text = run_to_string(cfg, 1, &s);
  CHECK(s.gapless == 4);
  CHECK(s.errors == 0);
  CHECK(text.find("\"status\":\"gapless\"") != std::string::npos);
  CHECK(text.find("\"value_re\":null") != std::string::npos);
}

TEST_CASE("record formatting") {
  ResultRecord r;
  r.model = "qwz";
  r.m = 0.1;
  r.L = 8;
  r.boundary = "periodic";
  r.disorder = "bond";
  r.invariant = "chern_even";
  r.value = cplx(-0.1, 0.0);
  r.nearest_integer = 0;
  r.deviation = 0.1;
  r.std_error = 0.0;
  const std::string line = to_jsonl(r);
  CHECK(line.find("\"m\":1.0000000000000001e-01") != std::string::npos);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["value_re"].get<double>() == -0.1);
  CHECK(j["realization"] == "mean");
  const std::string csv = to_csv(r), header = csv_header();
  CHECK(std::count(csv.begin(), csv.end(), ',') == std::count(header.begin(), header.end(), ','));
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3) == 3);
  setenv("NCBLOCH_THREADS", "5", 1);
  CHECK(resolve_threads(std::nullopt) == 5);
  CHECK(resolve_threads(2) == 2);
  unsetenv("NCBLOCH_THREADS");
  CHECK(resolve_threads(std::nullopt) >= 1);
}

TEST_CASE("QWZ plateau along m") {
  ConfigDocument doc = ConfigDocument::parse(R"([model]
name = "qwz"
m = { start = 0.5, stop = 3.0, steps = 6 }
L = 10
[invariant]
kind = "chern_even"
)");
  std::vector<nlohmann::json> means;
  run_sweep(sweep_config_from(doc), [&](const ResultRecord& r) {
    if (r.realization < 0) means.push_back(nlohmann::json::parse(to_jsonl(r)));
  }, 2);
  REQUIRE(means.size() == 6);
  // m = 0.5 .. 1.5 topological, 2.5 .. 3.0 trivial; m = 2.0 is the gap closing
  for (int i : {0, 1, 2}) CHECK(means[i]["nearest_integer"] == -1);
  CHECK(means[3]["status"] == "gapless");
  for (int i : {4, 5}) CHECK(means[i]["nearest_integer"] == 0);
}
