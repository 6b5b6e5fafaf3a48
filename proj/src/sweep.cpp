#include "ncbloch/sweep.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "ncbloch/error.hpp"
#include "ncbloch/spectral.hpp"
#include "ncbloch/version.hpp"

namespace ncbloch {

namespace {

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
  if (!v) return "null";
  if constexpr (std::is_same_v<T, double>) {
    return fmt_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

struct Field {
  const char* name;
  std::string json;
  std::string csv;
};

std::vector<Field> fields(const ResultRecord& r) {
  const std::string re = r.value ? fmt_double(r.value->real()) : "null";
  const std::string im = r.value ? fmt_double(r.value->imag()) : "null";
  const std::string rz = r.realization < 0 ? "\"mean\"" : std::to_string(r.realization);
  auto csvify = [](const std::string& j) { return j == "null" ? std::string() : j; };
  std::vector<Field> f = {
      {"model", quote(r.model), r.model},
      {"m", fmt_double(r.m), fmt_double(r.m)},
      {"L", std::to_string(r.L), std::to_string(r.L)},
      {"boundary", quote(r.boundary), r.boundary},
      {"disorder", quote(r.disorder), r.disorder},
      {"lambda", fmt_double(r.lambda), fmt_double(r.lambda)},
      {"seed", std::to_string(r.seed), std::to_string(r.seed)},
      {"realization", rz, r.realization < 0 ? "mean" : rz},
      {"invariant", quote(r.invariant), r.invariant},
      {"status", quote(r.status), r.status},
      {"value_re", re, csvify(re)},
      {"value_im", im, csvify(im)},
      {"nearest_integer", fmt_opt(r.nearest_integer), csvify(fmt_opt(r.nearest_integer))},
      {"deviation", fmt_opt(r.deviation), csvify(fmt_opt(r.deviation))},
      {"std_error", fmt_opt(r.std_error), csvify(fmt_opt(r.std_error))},
      {"realizations", std::to_string(r.realizations), std::to_string(r.realizations)},
      {"x0_samples", std::to_string(r.x0_samples), std::to_string(r.x0_samples)},
      {"localization_rate", fmt_opt(r.localization_rate), csvify(fmt_opt(r.localization_rate))},
      {"wall_time_ms", fmt_opt(r.wall_time_ms), csvify(fmt_opt(r.wall_time_ms))},
      {"code_version", quote(code_version()), code_version()},
      {"message", r.message.empty() ? "null" : quote(r.message), quote(r.message)},
  };
  return f;
}

struct TaskOutput {
  std::vector<ResultRecord> records;  // one per invariant
};

double index_mean(const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += i;
  return s / static_cast<double>(idx.size());
}

double sample_std_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(var / (n - 1.0) / n);
}

ResultRecord base_record(const SweepConfig& cfg, double m, double lambda, int realization) {
  ResultRecord r;
  r.model = cfg.model;
  r.m = m;
  r.L = cfg.L;
  r.boundary = to_string(cfg.boundary);
  r.disorder = to_string(cfg.disorder_kind);
  r.lambda = lambda;
  r.seed = cfg.seed;
  r.realization = realization;
  return r;
}

TaskOutput run_task(const SweepConfig& cfg, double m, double lambda, int realization) {
  TaskOutput out;
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<DenseOperator> H, P, u;
  std::optional<std::string> failure;
  ErrorKind failure_kind = ErrorKind::InvalidArgument;
  const ModelSpec spec = gallery_model(cfg.model, m, cfg.L, cfg.boundary);
  try {
    DisorderSpec dis{cfg.disorder_kind, lambda, cfg.seed};
    H = build_hamiltonian(spec, dis, realization);
  } catch (const Error& e) {
    failure = e.what();
    failure_kind = e.kind();
  }

  for (const auto& inv : cfg.invariants) {
    ResultRecord r = base_record(cfg, m, lambda, realization);
    r.invariant = inv;
    r.realizations = 1;
    try {
      if (failure) throw Error(failure_kind, *failure);
      std::optional<InvariantResult> res;
      const DenseOperator* loc = nullptr;
      if (inv == "chern_even" || inv == "index_even" || inv == "pairing_even") {
        if (!P) P = fermi_projector(*H);
        loc = &*P;
        if (inv == "chern_even") {
          res = chern_even(*P, cfg.trace);
        } else if (inv == "pairing_even") {
          res = even_pairing({*P}, x0_grid(spec.dim(), cfg.x0_grid));
        } else {
          std::vector<int> idx;
          FredholmOptions opt;
          opt.threshold = cfg.index_threshold;
          for (const auto& x0 : x0_grid(spec.dim(), cfg.x0_grid))
            idx.push_back(fredholm_index_even(*P, dirac_phase(spec.geometry, x0), opt).index);
          res = InvariantResult::from_value(index_mean(idx));
          res->x0_samples = static_cast<int>(idx.size());
          std::vector<double> xs(idx.begin(), idx.end());
          res->std_error = sample_std_error(xs);
        }
      } else {
        if (!spec.chiral) throw Error(ErrorKind::NotChiral, "model has no chiral structure");
        if (!u) u = flat_band_unitary(hamiltonian_sign(*H), *spec.chiral).reduced;
        loc = &*u;
        if (inv == "chern_odd") {
          res = chern_odd(*u, cfg.trace);
        } else if (inv == "pairing_odd") {
          res = odd_pairing({*u}, x0_grid(spec.dim(), cfg.x0_grid));
        } else {
          std::vector<int> idx;
          FredholmOptions opt;
          opt.threshold = cfg.index_threshold;
          for (const auto& x0 : x0_grid(spec.dim(), cfg.x0_grid))
            idx.push_back(fredholm_index_odd(*u, dirac_phase(spec.geometry, x0), opt).index);
          res = InvariantResult::from_value(index_mean(idx));
          res->x0_samples = static_cast<int>(idx.size());
          std::vector<double> xs(idx.begin(), idx.end());
          res->std_error = sample_std_error(xs);
        }
      }
      r.value = res->value;
      r.nearest_integer = res->nearest_integer;
      r.deviation = res->deviation;
      r.std_error = res->std_error;
      r.x0_samples = res->x0_samples;
      const double rate = localization_profile(*loc).rate;
      if (std::isfinite(rate)) r.localization_rate = rate;
    } catch (const Error& e) {
      const bool gapless = e.kind() == ErrorKind::FermiLevelOnSpectrum || e.kind() == ErrorKind::Gapless ||
                           e.kind() == ErrorKind::NotInvertible;
      r.status = gapless ? "gapless" : "error";
      r.message = e.what();
    } catch (const std::exception& e) {
      r.status = "error";
      r.message = e.what();
    }
    out.records.push_back(std::move(r));
  }
  if (cfg.timing) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : out.records) r.wall_time_ms = ms;
  }
  return out;
}

ResultRecord mean_record(const SweepConfig& cfg, double m, double lambda, const std::string& inv,
                         const std::vector<const ResultRecord*>& parts) {
  ResultRecord r = base_record(cfg, m, lambda, -1);
  r.invariant = inv;
  std::vector<InvariantResult> ok;
  std::vector<double> rates;
  bool any_gapless = false, any_error = false;
  double ms = 0.0;
  for (const auto* p : parts) {
    if (p->wall_time_ms) ms += *p->wall_time_ms;
    if (p->status == "gapless") any_gapless = true;
    if (p->status == "error") any_error = true;
    if (p->status != "ok") {
      if (r.message.empty()) r.message = p->message;
      continue;
    }
    InvariantResult ir = InvariantResult::from_value(*p->value);
    ir.x0_samples = p->x0_samples;
    ok.push_back(ir);
    if (p->localization_rate) rates.push_back(*p->localization_rate);
  }
  r.status = any_error ? "error" : any_gapless ? "gapless" : "ok";
  if (!ok.empty()) {
    const InvariantResult agg = aggregate(ok);
    r.value = agg.value;
    r.nearest_integer = agg.nearest_integer;
    r.deviation = agg.deviation;
    r.std_error = agg.std_error;
    r.realizations = agg.realizations;
    r.x0_samples = agg.x0_samples;
    if (!rates.empty()) {
      double s = 0.0;
      for (double x : rates) s += x;
      r.localization_rate = s / static_cast<double>(rates.size());
    }
  }
  if (cfg.timing) r.wall_time_ms = ms;
  return r;
}

}  // namespace

std::string code_version() { return NCBLOCH_VERSION; }

std::string to_jsonl(const ResultRecord& r) {
  std::string s = "{";
  bool first = true;
  for (const auto& f : fields(r)) {
    if (!first) s += ",";
    first = false;
    s += quote(f.name) + ":" + f.json;
  }
  return s + "}";
}

std::string csv_header() {
  std::string s;
  for (const auto& f : fields(ResultRecord{})) s += (s.empty() ? "" : ",") + std::string(f.name);
  return s;
}

std::string to_csv(const ResultRecord& r) {
  std::string s;
  bool first = true;
  for (const auto& f : fields(r)) {
    if (!first) s += ",";
    first = false;
    s += f.csv;
  }
  return s;
}

int resolve_threads(std::optional<int> requested) {
  if (requested) {
    if (*requested < 1) throw Error(ErrorKind::ConfigError, "--threads must be >= 1");
    return *requested;
  }
  if (const char* env = std::getenv("NCBLOCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw Error(ErrorKind::ConfigError, "NCBLOCH_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepSummary run_sweep(const SweepConfig& cfg, const std::function<void(const ResultRecord&)>& sink, int threads) {
  validate_sweep_config(cfg);
  struct Point {
    double m, lambda;
  };
  std::vector<Point> points;
  for (double m : cfg.m_values)
    for (double l : cfg.lambdas) points.push_back({m, l});
  const std::size_t R = static_cast<std::size_t>(cfg.realizations);
  const std::size_t total = points.size() * R;

  std::vector<std::optional<TaskOutput>> slots(total);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) return;
      const Point& p = points[t / R];
      TaskOutput out;
      try {
        out = run_task(cfg, p.m, p.lambda, static_cast<int>(t % R));
      } catch (const std::exception& e) {
        out.records.clear();
        for (const auto& inv : cfg.invariants) {
          ResultRecord r = base_record(cfg, p.m, p.lambda, static_cast<int>(t % R));
          r.invariant = inv;
          r.realizations = 1;
          r.status = "error";
          r.message = e.what();
          out.records.push_back(std::move(r));
        }
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        slots[t] = std::move(out);
      }
      cv.notify_all();
    }
  };
  const int nworkers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);

  SweepSummary summary;
  auto emit = [&](const ResultRecord& r) {
    ++summary.records;
    if (r.status == "gapless") ++summary.gapless;
    if (r.status == "error") ++summary.errors;
    sink(r);
  };
  try {
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      std::vector<TaskOutput> done;
      for (std::size_t r = 0; r < R; ++r) {
        const std::size_t t = pi * R + r;
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return slots[t].has_value(); });
        done.push_back(std::move(*slots[t]));
        slots[t].reset();
        lock.unlock();
        for (const auto& rec : done.back().records) emit(rec);
      }
      for (std::size_t i = 0; i < cfg.invariants.size(); ++i) {
        std::vector<const ResultRecord*> parts;
        for (const auto& d : done) parts.push_back(&d.records[i]);
        emit(mean_record(cfg, points[pi].m, points[pi].lambda, cfg.invariants[i], parts));
      }
    }
  } catch (...) {
    next.store(total);
    for (auto& th : pool) th.join();
    throw;
  }
  for (auto& th : pool) th.join();
  return summary;
}

}  // namespace ncbloch
