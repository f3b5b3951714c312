#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dflux/flux_model.hpp"
#include "dflux/solver.hpp"

namespace dflux {

struct FluxDescriptor {
  std::string kind = "linear";  // linear | quadratic
  double a = 1.0;
  double b = 0.0;
  friend bool operator==(const FluxDescriptor&, const FluxDescriptor&) = default;
};

struct PiecewiseConstantInit {
  std::vector<double> breakpoints;
  std::vector<double> values;
  friend bool operator==(const PiecewiseConstantInit&, const PiecewiseConstantInit&) = default;
};

// base + amplitude * exp(-width * (x - center)^2)
struct GaussianOffsetInit {
  double base = 0.0;
  double amplitude = 0.0;
  double width = 0.0;
  double center = 0.0;
  friend bool operator==(const GaussianOffsetInit&, const GaussianOffsetInit&) = default;
};

// Two-column CSV (x,u); relative paths resolve against the config file.
struct TableInit {
  std::string path;
  friend bool operator==(const TableInit&, const TableInit&) = default;
};

using InitialDescriptor = std::variant<PiecewiseConstantInit, GaussianOffsetInit, TableInit>;

struct ConstantTraceDescriptor {
  double value = 0.0;
  friend bool operator==(const ConstantTraceDescriptor&, const ConstantTraceDescriptor&) = default;
};

struct LinearTraceDescriptor {
  double value = 0.0;
  double slope = 0.0;
  friend bool operator==(const LinearTraceDescriptor&, const LinearTraceDescriptor&) = default;
};

// Two-column CSV (t,a).
struct TableTraceDescriptor {
  std::string path;
  friend bool operator==(const TableTraceDescriptor&, const TableTraceDescriptor&) = default;
};

using TraceDescriptor =
    std::variant<ConstantTraceDescriptor, LinearTraceDescriptor, TableTraceDescriptor>;

struct BoundaryDescriptor {
  std::optional<TraceDescriptor> inflow;  // empty: outflow
  friend bool operator==(const BoundaryDescriptor&, const BoundaryDescriptor&) = default;
};

struct OutputsDescriptor {
  std::string dir = ".";
  std::string convergence = "convergence.csv";
  friend bool operator==(const OutputsDescriptor&, const OutputsDescriptor&) = default;
};

struct ExperimentConfig {
  std::string name;
  double xmin = -1.0;
  double xmax = 1.0;
  std::vector<double> interfaces;
  std::vector<FluxDescriptor> fluxes;
  InitialDescriptor initial;
  double lambda = 0.0;
  double t_end = 0.0;
  std::vector<std::size_t> resolutions;
  std::size_t reference_n = 0;
  BoundaryDescriptor boundary;
  NumericalFlux numerical_flux = NumericalFlux::upwind;
  std::vector<double> snapshots;
  OutputsDescriptor outputs;

  // Directory used for relative table paths; not part of the configuration.
  std::filesystem::path base_dir = ".";

  bool operator==(const ExperimentConfig& other) const;
};

// JSON text to config. Syntax errors carry line:column, field errors the
// JSON pointer of the offending field. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

// Hex FNV-1a of the canonical serialization.
std::string config_digest(const ExperimentConfig& config);

// "experiment1" or "experiment2". Throws ConfigError for anything else.
ExperimentConfig preset(std::string_view name);

// Field semantics: counts, positivity, nesting of reference_n, grid
// alignment of every resolution. Throws ConfigError.
void validate(const ExperimentConfig& config);

std::string_view to_string(NumericalFlux kind);
NumericalFlux numerical_flux_from_string(std::string_view name);

struct Experiment {
  PiecewiseFlux flux;
  ProblemSpec problem;
  SolverConfig solver;
  std::vector<double> snapshots;
};

Experiment build_experiment(const ExperimentConfig& config);

// Reads a two-column numeric CSV; a non-numeric first line is a header.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path);

}  // namespace dflux
