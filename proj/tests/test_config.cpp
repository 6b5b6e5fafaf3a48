#include <catch2/catch.hpp>

#include "ncbloch/config.hpp"
#include "ncbloch/error.hpp"

using namespace ncbloch;

namespace {

std::string config_error(const std::string& text, const std::vector<std::string>& sets = {}) {
  try {
    ConfigDocument doc = ConfigDocument::parse(text, "test.toml");
    for (const auto& s : sets) doc.apply_override(s);
    sweep_config_from(doc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) return e.what();
    return std::string("wrong kind: ") + e.what();
  }
  return "";
}

const char* base = R"([model]
name = "qwz"   # comment
m = 1.0
L = 8
)";

}  // namespace

TEST_CASE("parse values") {
  const ConfigDocument doc = ConfigDocument::parse(R"(top = 3
[a]
x = -1.5e-1
s = "hi # there"
flag = true
list = [1, 2, 3]
range = { start = 0.0, stop = 1.0, steps = 5 }
names = ["p", "q"]
)");
  CHECK(doc.get_integer("top") == 3);
  CHECK(doc.get_number("a.x") == Approx(-0.15));
  CHECK(doc.get_string("a.s") == "hi # there");
  CHECK(doc.get_bool("a.flag", false));
  CHECK(doc.get_grid("a.list") == std::vector<double>{1, 2, 3});
  CHECK(doc.get_grid("a.range") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(doc.get_grid("a.x") == std::vector<double>{-0.15});
  CHECK(doc.get_strings("a.names") == std::vector<std::string>{"p", "q"});
  CHECK(doc.entry("a.s").origin == "<config>:4");
  CHECK(doc.get_number("missing", 2.5) == 2.5);
}

TEST_CASE("syntax errors name the line") {
  CHECK_THROWS_WITH(ConfigDocument::parse("[a]\nx = \n"), Catch::Contains("2"));
  CHECK_THROWS_WITH(ConfigDocument::parse("[a\n"), Catch::Contains("1"));
  CHECK_THROWS_AS(ConfigDocument::parse("x = 1\nx = 2\n"), Error);
  CHECK_THROWS_AS(ConfigDocument::parse("x = \"open\n"), Error);
}

TEST_CASE("sweep config defaults") {
  const SweepConfig cfg = sweep_config_from(ConfigDocument::parse(base));
  CHECK(cfg.model == "qwz");
  CHECK(cfg.m_values == std::vector<double>{1.0});
  CHECK(cfg.lambdas == std::vector<double>{0.0});
  CHECK(cfg.boundary == Boundary::Periodic);
  CHECK(cfg.invariants == std::vector<std::string>{"chern_even", "index_even"});
  CHECK(cfg.output_path == "-");
}

TEST_CASE("overrides replace entries and keep their origin") {
  ConfigDocument doc = ConfigDocument::parse(base);
  doc.apply_override("model.name=ssh");
  doc.apply_override("model.m=[0.5, 2.0]");
  doc.apply_override("invariant.trace_strategy=open_bulk");
  const SweepConfig cfg = sweep_config_from(doc);
  CHECK(cfg.model == "ssh");
  CHECK(cfg.m_values.size() == 2);
  CHECK(cfg.boundary == Boundary::Open);
  CHECK(cfg.invariants == std::vector<std::string>{"chern_odd", "index_odd"});
  CHECK(doc.entry("model.m").origin == "--set model.m");
  CHECK_THROWS_AS(doc.apply_override("novalue"), Error);
}

TEST_CASE("config errors") {
  CHECK(config_error(base) == "");
  CHECK_THAT(config_error(base, {"model.colour=1"}), Catch::Contains("colour"));
  CHECK_THAT(config_error(base, {"model.m={ start = 0, stop = 1, steps = 0 }"}), Catch::Contains("model.m"));
  CHECK_THAT(config_error(base, {"model.m=[]"}), Catch::Contains("model.m"));
  CHECK_THAT(config_error(base, {"model.name=kitaev"}), Catch::Contains("model.name"));
  CHECK_THAT(config_error(base, {"invariant.kind=chern_odd"}), Catch::Contains("odd"));
  CHECK_THAT(config_error(base, {"disorder.realizations=0"}), Catch::Contains("realizations"));
  CHECK_THAT(config_error(base, {"disorder.lambda=-1"}), Catch::Contains("lambda"));
  CHECK_THAT(config_error(base, {"model.L=2"}), Catch::Contains("model.L"));
  CHECK_THAT(config_error(base, {"model.L=\"big\""}), Catch::Contains("model.L"));
  CHECK_THAT(config_error(base, {"output.format=xml"}), Catch::Contains("output.format"));
  CHECK_THAT(config_error(base, {"invariant.trace_strategy=fancy"}), Catch::Contains("trace_strategy"));
  CHECK_THAT(config_error(base, {"invariant.trace_strategy=open_bulk", "invariant.bulk_fraction=2"}),
             Catch::Contains("bulk_fraction"));
  CHECK_THAT(config_error(std::string(base) + "L = 9\n"), Catch::Contains("L"));
}

TEST_CASE("invariant selection by parity") {
  CHECK(invariants_for("all", 3) == std::vector<std::string>{"chern_odd", "index_odd"});
  CHECK(invariants_for("pairing_even", 2) == std::vector<std::string>{"pairing_even"});
  CHECK_THROWS_AS(invariants_for("index_even", 1), Error);
  CHECK_THROWS_AS(invariants_for("winding", 1), Error);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"qwz_phase.toml", "qwz_disorder.toml", "ssh_disorder.toml", "chiral3d.toml"}) {
    INFO(name);
    CHECK_NOTHROW(sweep_config_from(ConfigDocument::load(std::string(NCBLOCH_CONFIG_DIR) + "/" + name)));
  }
  CHECK_THROWS_AS(ConfigDocument::load("/nonexistent/file.toml"), Error);
}
