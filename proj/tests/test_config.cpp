#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dflux/config.hpp"
#include "dflux/errors.hpp"

using namespace dflux;

namespace {

const std::filesystem::path kConfigs = DFLUX_CONFIG_DIR;
const std::filesystem::path kData = DFLUX_TEST_DATA;

const char* kMinimal = R"({
  "domain": {"xmin": -1, "xmax": 1},
  "interfaces": [0],
  "fluxes": [{"kind": "linear"}, {"kind": "quadratic"}],
  "initial": {"kind": "piecewise_constant", "breakpoints": [-0.5], "values": [0.5, 2]},
  "lambda": 0.5,
  "t_end": 0.9,
  "resolutions": [16, 32],
  "reference_n": 64
})";

std::string error_of(std::string_view text) {
  try {
    (void)parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("shipped configs equal the presets") {
  auto e1 = load_config(kConfigs / "experiment1.json");
  auto p1 = preset("experiment1");
  p1.outputs = e1.outputs;
  CHECK(e1 == p1);
  CHECK(e1.base_dir == kConfigs);

  auto e2 = load_config(kConfigs / "experiment2.json");
  auto p2 = preset("experiment2");
  p2.outputs = e2.outputs;
  CHECK(e2 == p2);

  CHECK_THROWS_AS(preset("experiment3"), ConfigError);
}

TEST_CASE("presets encode the two experiments") {
  const auto c = preset("experiment1");
  CHECK(c.fluxes.at(0) == FluxDescriptor{"linear", 1.0, 0.0});
  CHECK(c.fluxes.at(1) == FluxDescriptor{"quadratic", 1.0, 0.0});
  CHECK(c.lambda == 0.5);
  CHECK(c.t_end == 0.9);
  CHECK(c.reference_n == 2048);
  CHECK(c.resolutions == std::vector<std::size_t>{16, 32, 64, 128, 256, 512, 1024});
  CHECK(!c.boundary.inflow);

  const auto d = preset("experiment2");
  CHECK(std::get<GaussianOffsetInit>(d.initial) == GaussianOffsetInit{2.0, 1.0, 100.0, -0.75});
  CHECK(d.lambda == 0.2);
  CHECK(d.t_end == 0.5);
  CHECK_NOTHROW(validate(c));
  CHECK_NOTHROW(validate(d));
}

TEST_CASE("round trip parse -> serialize -> parse") {
  for (const auto& c : {preset("experiment1"), preset("experiment2"),
                        load_config(kConfigs / "inflow_transport.json"), parse_config(kMinimal)}) {
    const auto again = parse_config(serialize_config(c));
    CHECK(again == c);
    CHECK(serialize_config(again) == serialize_config(c));
    CHECK(config_digest(again) == config_digest(c));
  }
}

TEST_CASE("defaults for optional fields") {
  const auto c = parse_config(kMinimal);
  CHECK(c.numerical_flux == NumericalFlux::upwind);
  CHECK(!c.boundary.inflow);
  CHECK(c.snapshots.empty());
  CHECK(c.outputs.dir == ".");
  CHECK(c.fluxes[0].a == 1.0);
  CHECK(c.fluxes[0].b == 0.0);
  const auto e = build_experiment(c);
  CHECK(e.snapshots == std::vector<double>{0.9});
}

TEST_CASE("digest tracks content") {
  auto c = preset("experiment1");
  const auto d = config_digest(c);
  CHECK(d.size() == 16);
  CHECK(config_digest(preset("experiment1")) == d);
  c.lambda = 0.25;
  CHECK(config_digest(c) != d);
}

TEST_CASE("syntax errors report line and column") {
  const std::string msg = error_of("{\n  \"lambda\": 0.5,\n  \"t_end\": ]\n}");
  CHECK(msg.find("test.json:3:") != std::string::npos);
}

TEST_CASE("field errors name the field") {
  CHECK(error_of(replace(kMinimal, "\"lambda\": 0.5", "\"lambda\": -0.5")).find("/lambda") !=
        std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"lambda\": 0.5", "\"lambda\": \"fast\"")).find("/lambda") !=
        std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"reference_n\": 64", "\"reference_n\": 48"))
            .find("/reference_n") != std::string::npos);
  const std::string odd =
      replace(replace(kMinimal, "[16, 32]", "[22, 33]"), "\"reference_n\": 64", "\"reference_n\": 66");
  CHECK(error_of(odd).find("/resolutions/1") != std::string::npos);
  CHECK(error_of(odd).find("not a cell edge") != std::string::npos);
  CHECK(error_of(replace(kMinimal, "{\"kind\": \"quadratic\"}", "{\"kind\": \"cubic\"}"))
            .find("/fluxes/1/kind") != std::string::npos);
  CHECK(error_of(replace(kMinimal, ", {\"kind\": \"quadratic\"}", "")).find("/fluxes") !=
        std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"lambda\"", "\"lamda\": 1, \"lambda\"")).find("lamda") !=
        std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"values\": [0.5, 2]", "\"values\": [0.5]"))
            .find("/initial/values") != std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"t_end\": 0.9", "\"t_end\": 0.9, \"snapshots\": [1.5]"))
            .find("/snapshots/0") != std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"t_end\": 0.9",
                         "\"t_end\": 0.9, \"boundary\": {\"left\": \"outflow\", \"trace\": {}}"))
            .find("/boundary/trace") != std::string::npos);
  CHECK(error_of(replace(kMinimal, "\"t_end\": 0.9", "\"t_end\": 0.9, \"numerical_flux\": \"lf\""))
            .find("/numerical_flux") != std::string::npos);
  CHECK(error_of("[1, 2]").find("expected an object") != std::string::npos);
}

TEST_CASE("numerical flux names") {
  for (auto k : {NumericalFlux::upwind, NumericalFlux::godunov, NumericalFlux::engquist_osher})
    CHECK(numerical_flux_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(numerical_flux_from_string("roe"), ConfigError);
}

TEST_CASE("table data resolve against the config directory") {
  const auto c = load_config(kConfigs / "inflow_transport.json");
  const auto e = build_experiment(c);
  const auto& table = std::get<TableDatum>(e.problem.initial);
  CHECK(table.x == std::vector<double>{0.0, 0.5, 1.0, 2.0});
  CHECK(table.u == std::vector<double>{1.0, 1.5, 1.5, 2.0});
  CHECK(std::holds_alternative<InflowBoundary>(e.solver.boundary_left));
  CHECK(e.snapshots == std::vector<double>{0.5, 1.0});
}

TEST_CASE("two-column CSV reader") {
  const auto [t, a] = read_two_column_csv(kData / "trace.csv");
  CHECK(t == std::vector<double>{0.0, 0.5, 2.0});
  CHECK(a == std::vector<double>{1.0, 2.0, 2.0});
  CHECK_THROWS_AS(read_two_column_csv(kData / "missing.csv"), ConfigError);

  const auto bad = std::filesystem::temp_directory_path() / "dflux_bad_table.csv";
  {
    std::ofstream out(bad);
    out << "x,u\n0,1\n0.5,oops\n";
  }
  try {
    (void)read_two_column_csv(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::filesystem::remove(bad);
}

TEST_CASE("table trace is read from disk") {
  auto c = parse_config(kMinimal);
  c.boundary.inflow = TableTraceDescriptor{"trace.csv"};
  c.base_dir = kData;
  const auto e = build_experiment(c);
  const auto& trace = std::get<TableTrace>(std::get<InflowBoundary>(e.solver.boundary_left).trace);
  CHECK(trace.a.size() == 3);
}
