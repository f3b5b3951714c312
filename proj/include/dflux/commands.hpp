#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dflux/analysis.hpp"
#include "dflux/config.hpp"

namespace dflux {

// 17 significant digits.
std::string format_real(double v);

// One CSV (header `x_center,u`) plus a `.meta` sidecar per snapshot time,
// named snapshot_<k>.csv / snapshot_<k>.meta in sorted time order.
std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& config, std::size_t n,
                                           const std::filesystem::path& out_dir);

// Reference run at reference_n and one run per resolution, joined before
// anything is written. Rows are ordered by n.
ErrorReport convergence_study(const ExperimentConfig& config);

void write_convergence_csv(const ErrorReport& report, std::ostream& out);

ErrorReport cmd_convergence(const ExperimentConfig& config, const std::filesystem::path& out_path);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool validation_failed = false;  // setup rejected (e.g. CFL)

  bool passed() const;
};

// Invariant suite on the configured problem. Prints one line per check.
VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log);

}  // namespace dflux
