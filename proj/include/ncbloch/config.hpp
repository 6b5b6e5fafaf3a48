#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncbloch/lattice.hpp"
#include "ncbloch/nccalc.hpp"

namespace ncbloch {

// Parsed value of the TOML-style config subset: numbers, strings, booleans,
// single-line lists and single-line inline tables.
struct ConfigValue {
  enum class Type { Number, String, Bool, List, Table };
  Type type = Type::Number;
  double number = 0.0;
  bool integral = false;
  std::string text;
  bool boolean = false;
  std::vector<ConfigValue> items;
  std::map<std::string, ConfigValue> table;
};

struct ConfigEntry {
  ConfigValue value;
  std::string origin;  // "file:line" or "--set"
};

class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text, const std::string& source = "<config>");
  static ConfigDocument load(const std::string& path);

  // "section.key=value", replaces or adds the entry
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  const ConfigEntry& entry(const std::string& key) const;
  std::vector<std::string> keys() const;

  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  long long get_integer(const std::string& key) const;
  long long get_integer(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // scalar, list of numbers, or {start, stop, steps}
  std::vector<double> get_grid(const std::string& key) const;
  // string or list of strings
  std::vector<std::string> get_strings(const std::string& key) const;

 private:
  std::map<std::string, ConfigEntry> entries_;
  std::string source_;
};

struct SweepConfig {
  std::string model = "qwz";
  std::vector<double> m_values;
  int L = 16;
  Boundary boundary = Boundary::Periodic;
  DisorderKind disorder_kind = DisorderKind::BondUniform;
  std::vector<double> lambdas{0.0};
  int realizations = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> invariants;  // resolved, never "all"
  TraceStrategy trace;
  int x0_grid = 2;
  double index_threshold = 1e-2;
  std::string output_path = "-";
  std::string format = "jsonl";
  bool timing = false;
};

// Reads and validates; throws config-error naming the key and its origin.
SweepConfig sweep_config_from(const ConfigDocument& doc);

// Rejects empty ranges, unknown models, parity mismatches and bad sizes.
void validate_sweep_config(const SweepConfig& cfg);

// "all" selects chern and index of the matching parity; pairing_even/odd are opt-in
std::vector<std::string> invariants_for(const std::string& kind, int d);

}  // namespace ncbloch
