#include "ncbloch/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ncbloch/error.hpp"

namespace ncbloch {

namespace {

class ValueParser {
 public:
  ValueParser(const std::string& text, const std::string& origin) : s_(text), origin_(origin) {}

  ConfigValue parse_all() {
    ConfigValue v = parse_value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::ConfigError, origin_ + ": " + msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ConfigValue parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_list();
    if (c == '{') return parse_table();
    return parse_bare();
  }

  ConfigValue parse_string() {
    const char quote = s_[pos_++];
    ConfigValue v;
    v.type = ConfigValue::Type::String;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_++];
      if (c == '\\' && quote == '"' && pos_ < s_.size()) {
        const char e = s_[pos_++];
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      v.text.push_back(c);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue parse_list() {
    ++pos_;
    ConfigValue v;
    v.type = ConfigValue::Type::List;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(parse_value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in list");
    }
  }

  ConfigValue parse_table() {
    ++pos_;
    ConfigValue v;
    v.type = ConfigValue::Type::Table;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '}') {
      ++pos_;
      return v;
    }
    while (true) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string key = s_.substr(start, pos_ - start);
      if (key.empty()) fail("expected key in inline table");
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after '" + key + "'");
      ++pos_;
      v.table[key] = parse_value();
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated inline table");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == '}') {
        ++pos_;
        return v;
      }
      fail("expected ',' or '}' in inline table");
    }
  }

  ConfigValue parse_bare() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '}' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    ConfigValue v;
    if (tok == "true" || tok == "false") {
      v.type = ConfigValue::Type::Bool;
      v.boolean = tok == "true";
      return v;
    }
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    std::size_t used = 0;
    try {
      v.number = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("cannot parse value '" + tok + "'");
    }
    if (used != tok.size()) fail("cannot parse value '" + tok + "'");
    v.type = ConfigValue::Type::Number;
    v.integral = tok.find_first_of(".eE") == std::string::npos || (tok.find_first_of("xX") != std::string::npos);
    v.text = tok;
    return v;
  }

  const std::string& s_;
  std::string origin_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_str) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        in_str = false;
      }
    } else if (c == '"' || c == '\'') {
      in_str = true;
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

[[noreturn]] void key_error(const std::string& key, const ConfigEntry* e, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, (e ? e->origin + ": " : std::string()) + "key '" + key + "': " + msg);
}

double as_number(const std::string& key, const ConfigEntry& e, const ConfigValue& v) {
  if (v.type != ConfigValue::Type::Number) key_error(key, &e, "expected a number");
  return v.number;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  doc.source_ = source;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string origin = source + ":" + std::to_string(lineno);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw Error(ErrorKind::ConfigError, origin + ": malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!valid_key(section)) throw Error(ErrorKind::ConfigError, origin + ": invalid section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, origin + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (!valid_key(key)) throw Error(ErrorKind::ConfigError, origin + ": invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.entries_.count(full)) throw Error(ErrorKind::ConfigError, origin + ": duplicate key '" + full + "'");
    const std::string raw = trim(body.substr(eq + 1));
    ValueParser p(raw, origin + ", key '" + full + "'");
    doc.entries_[full] = ConfigEntry{p.parse_all(), origin};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void ConfigDocument::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set expects key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) throw Error(ErrorKind::ConfigError, "--set: invalid key '" + key + "'");
  std::string raw = trim(assignment.substr(eq + 1));
  const std::string origin = "--set " + key;
  ConfigValue v;
  try {
    ValueParser p(raw, origin);
    v = p.parse_all();
  } catch (const Error&) {
    // bare words such as --set model.name=ssh are taken as strings
    v.type = ConfigValue::Type::String;
    v.text = raw;
  }
  entries_[key] = ConfigEntry{v, origin};
}

bool ConfigDocument::has(const std::string& key) const { return entries_.count(key) != 0; }

const ConfigEntry& ConfigDocument::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) key_error(key, nullptr, "missing in " + source_);
  return it->second;
}

std::vector<std::string> ConfigDocument::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

double ConfigDocument::get_number(const std::string& key) const {
  const auto& e = entry(key);
  return as_number(key, e, e.value);
}

double ConfigDocument::get_number(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

long long ConfigDocument::get_integer(const std::string& key) const {
  const auto& e = entry(key);
  const double v = as_number(key, e, e.value);
  if (!e.value.integral || std::floor(v) != v) key_error(key, &e, "expected an integer");
  if (e.value.text.find_first_of("xX") == std::string::npos && std::abs(v) < 9e15) return static_cast<long long>(v);
  try {
    return static_cast<long long>(std::stoull(e.value.text, nullptr, 0));
  } catch (const std::exception&) {
    key_error(key, &e, "integer out of range");
  }
}

long long ConfigDocument::get_integer(const std::string& key, long long fallback) const {
  return has(key) ? get_integer(key) : fallback;
}

std::string ConfigDocument::get_string(const std::string& key) const {
  const auto& e = entry(key);
  if (e.value.type != ConfigValue::Type::String) key_error(key, &e, "expected a string");
  return e.value.text;
}

std::string ConfigDocument::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

bool ConfigDocument::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  if (e.value.type != ConfigValue::Type::Bool) key_error(key, &e, "expected true or false");
  return e.value.boolean;
}

std::vector<double> ConfigDocument::get_grid(const std::string& key) const {
  const auto& e = entry(key);
  const ConfigValue& v = e.value;
  std::vector<double> out;
  switch (v.type) {
    case ConfigValue::Type::Number:
      out.push_back(v.number);
      break;
    case ConfigValue::Type::List:
      for (const auto& it : v.items) out.push_back(as_number(key, e, it));
      break;
    case ConfigValue::Type::Table: {
      for (const auto& [k, x] : v.table)
        if (k != "start" && k != "stop" && k != "steps") key_error(key, &e, "unknown range field '" + k + "'");
      if (!v.table.count("start") || !v.table.count("stop") || !v.table.count("steps"))
        key_error(key, &e, "range needs start, stop and steps");
      const double a = as_number(key, e, v.table.at("start"));
      const double b = as_number(key, e, v.table.at("stop"));
      const double n = as_number(key, e, v.table.at("steps"));
      if (n < 0 || std::floor(n) != n) key_error(key, &e, "steps must be a non-negative integer");
      const int steps = static_cast<int>(n);
      for (int i = 0; i < steps; ++i) out.push_back(steps == 1 ? a : a + (b - a) * i / (steps - 1));
      break;
    }
    default:
      key_error(key, &e, "expected a number, a list or {start, stop, steps}");
  }
  for (double x : out)
    if (!std::isfinite(x)) key_error(key, &e, "values must be finite");
  if (out.empty()) key_error(key, &e, "empty range");
  return out;
}

std::vector<std::string> ConfigDocument::get_strings(const std::string& key) const {
  const auto& e = entry(key);
  if (e.value.type == ConfigValue::Type::String) return {e.value.text};
  if (e.value.type != ConfigValue::Type::List) key_error(key, &e, "expected a string or a list of strings");
  std::vector<std::string> out;
  for (const auto& it : e.value.items) {
    if (it.type != ConfigValue::Type::String) key_error(key, &e, "expected a list of strings");
    out.push_back(it.text);
  }
  if (out.empty()) key_error(key, &e, "empty list");
  return out;
}

std::vector<std::string> invariants_for(const std::string& kind, int d) {
  const bool even = d % 2 == 0;
  if (kind == "all") return even ? std::vector<std::string>{"chern_even", "index_even"}
                                 : std::vector<std::string>{"chern_odd", "index_odd"};
  if (kind == "chern_even" || kind == "index_even" || kind == "pairing_even") {
    if (!even) throw Error(ErrorKind::ConfigError, "invariant '" + kind + "' needs an even-dimensional model");
    return {kind};
  }
  if (kind == "chern_odd" || kind == "index_odd" || kind == "pairing_odd") {
    if (even) throw Error(ErrorKind::ConfigError, "invariant '" + kind + "' needs an odd-dimensional model");
    return {kind};
  }
  throw Error(ErrorKind::ConfigError, "unknown invariant '" + kind + "'");
}

SweepConfig sweep_config_from(const ConfigDocument& doc) {
  static const std::set<std::string> known = {
      "model.name",           "model.m",         "model.L",          "model.boundary",
      "disorder.kind",        "disorder.lambda", "disorder.realizations", "disorder.seed",
      "invariant.kind",       "invariant.trace_strategy", "invariant.bulk_fraction", "invariant.x0_grid",
      "invariant.index_threshold", "output.path", "output.format",    "output.timing"};
  for (const auto& k : doc.keys())
    if (!known.count(k)) key_error(k, &doc.entry(k), "unknown key");

  SweepConfig cfg;
  auto wrap = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      key_error(key, doc.has(key) ? &doc.entry(key) : nullptr, e.what());
    }
  };
  cfg.model = doc.get_string("model.name");
  wrap("model.name", [&] { gallery_dimension(cfg.model); });
  cfg.m_values = doc.get_grid("model.m");
  const long long L = doc.get_integer("model.L");
  if (L < 4 || L > 4096) key_error("model.L", &doc.entry("model.L"), "L must lie in [4, 4096]");
  cfg.L = static_cast<int>(L);

  const std::string trace = doc.get_string("invariant.trace_strategy", "periodic");
  wrap("invariant.trace_strategy", [&] { cfg.trace.mode = parse_trace_mode(trace); });
  if (cfg.trace.mode == TraceStrategy::Mode::OpenBulk) {
    const double f = doc.get_number("invariant.bulk_fraction", 0.5);
    wrap("invariant.bulk_fraction", [&] { cfg.trace = TraceStrategy::open_bulk(f); });
  }
  cfg.boundary = cfg.trace.mode == TraceStrategy::Mode::OpenBulk ? Boundary::Open : Boundary::Periodic;
  if (doc.has("model.boundary")) wrap("model.boundary", [&] { cfg.boundary = parse_boundary(doc.get_string("model.boundary")); });

  wrap("disorder.kind", [&] { cfg.disorder_kind = parse_disorder_kind(doc.get_string("disorder.kind", "bond")); });
  if (doc.has("disorder.lambda")) cfg.lambdas = doc.get_grid("disorder.lambda");
  for (double l : cfg.lambdas)
    if (l < 0) key_error("disorder.lambda", &doc.entry("disorder.lambda"), "disorder strength must be >= 0");
  const long long reps = doc.get_integer("disorder.realizations", 1);
  if (reps < 1) key_error("disorder.realizations", &doc.entry("disorder.realizations"), "need at least one realization");
  cfg.realizations = static_cast<int>(reps);
  cfg.seed = static_cast<std::uint64_t>(doc.get_integer("disorder.seed", 0));

  const std::string kind = doc.get_string("invariant.kind", "all");
  wrap("invariant.kind", [&] { cfg.invariants = invariants_for(kind, gallery_dimension(cfg.model)); });
  const long long grid = doc.get_integer("invariant.x0_grid", 2);
  if (grid < 1) key_error("invariant.x0_grid", &doc.entry("invariant.x0_grid"), "x0 grid needs >= 1 point per direction");
  cfg.x0_grid = static_cast<int>(grid);
  cfg.index_threshold = doc.get_number("invariant.index_threshold", 1e-2);
  if (!(cfg.index_threshold > 0))
    key_error("invariant.index_threshold", &doc.entry("invariant.index_threshold"), "threshold must be positive");

  cfg.output_path = doc.get_string("output.path", "-");
  cfg.format = doc.get_string("output.format", "jsonl");
  if (cfg.format != "jsonl" && cfg.format != "csv")
    key_error("output.format", &doc.entry("output.format"), "format must be jsonl or csv");
  cfg.timing = doc.get_bool("output.timing", false);
  validate_sweep_config(cfg);
  return cfg;
}

void validate_sweep_config(const SweepConfig& cfg) {
  int d = 0;
  try {
    d = gallery_dimension(cfg.model);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  if (cfg.m_values.empty()) throw Error(ErrorKind::ConfigError, "empty model parameter range");
  if (cfg.lambdas.empty()) throw Error(ErrorKind::ConfigError, "empty disorder range");
  if (cfg.realizations < 1) throw Error(ErrorKind::ConfigError, "need at least one realization");
  if (cfg.L < 4) throw Error(ErrorKind::ConfigError, "L must be >= 4");
  if (cfg.invariants.empty()) throw Error(ErrorKind::ConfigError, "no invariant selected");
  for (const auto& inv : cfg.invariants) invariants_for(inv, d);
  if (cfg.x0_grid < 1) throw Error(ErrorKind::ConfigError, "x0 grid needs >= 1 point per direction");
}

}  // namespace ncbloch
