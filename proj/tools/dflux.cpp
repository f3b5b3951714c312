#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "dflux/commands.hpp"
#include "dflux/config.hpp"
#include "dflux/errors.hpp"

namespace {

enum Exit { ok = 0, validation = 1, numerical = 2, verification = 3 };

struct Source {
  std::string config;
  std::string preset;

  void attach(CLI::App* cmd) {
    auto* c = cmd->add_option("--config", config, "experiment configuration (JSON)");
    auto* p = cmd->add_option("--preset", preset, "built-in experiment")
                  ->check(CLI::IsMember({"experiment1", "experiment2"}));
    c->excludes(p);
    p->excludes(c);
  }

  dflux::ExperimentConfig load() const {
    if (!preset.empty()) return dflux::preset(preset);
    if (config.empty()) throw dflux::ConfigError("one of --config or --preset is required");
    return dflux::load_config(config);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver for conservation laws with interface-switched fluxes"};
  app.require_subcommand(1);

  Source run_src;
  std::size_t run_n = 0;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "solve at one resolution and write snapshot CSVs");
  run_src.attach(run);
  run->add_option("--n", run_n, "number of cells")->required()->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "output directory (default: outputs.dir)");

  Source conv_src;
  std::optional<std::string> conv_out;
  auto* conv = app.add_subcommand("convergence", "refinement study against the reference run");
  conv_src.attach(conv);
  conv->add_option("--out", conv_out, "output CSV (default: outputs.dir/outputs.convergence)");

  Source verify_src;
  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  verify_src.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : validation;
  }

  try {
    if (run->parsed()) {
      const auto config = run_src.load();
      const std::filesystem::path dir =
          run_out ? std::filesystem::path(*run_out) : config.base_dir / config.outputs.dir;
      for (const auto& path : dflux::cmd_run(config, run_n, dir)) std::cout << path.string() << '\n';
      return ok;
    }
    if (conv->parsed()) {
      const auto config = conv_src.load();
      const std::filesystem::path path =
          conv_out ? std::filesystem::path(*conv_out)
                   : config.base_dir / config.outputs.dir / config.outputs.convergence;
      const auto report = dflux::cmd_convergence(config, path);
      dflux::write_convergence_csv(report, std::cout);
      return ok;
    }
    const auto config = verify_src.load();
    const auto report = dflux::cmd_verify(config, std::cout);
    if (report.validation_failed) return validation;
    return report.passed() ? ok : verification;
  } catch (const dflux::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical;
  }
}
