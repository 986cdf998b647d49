#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Zero-range process with size-dependent rates: ensembles, phase diagram and "
               "kinetic Monte Carlo"};
  app.require_subcommand(1);

  std::string config_path;
  zrp::cli::RunOptions options;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t workers = 0;

  const char* names[][2] = {
      {"phase-diagram", "Boundary curves rho_c, rho_meta, rho_trans and phase labels"},
      {"entropy", "Entropy densities, finite-size recursion estimates and pressures"},
      {"rate-function", "Rate function of the background density with extrema"},
      {"lifetimes", "Fluid and condensed lifetimes, exponent fits and tail statistics"},
      {"lln-check", "Batch means of grand-canonical marginals"},
      {"oracle", "Exact generator stationarity and simulator check on a tiny system"},
      {"simulate", "Raw trajectory of the process"},
  };
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--svg", options.svg, "Also write SVG figures");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zrp::cli::kExitConfig;
  }
  auto* chosen = app.get_subcommands().front();
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (chosen->count("--seed") > 0) options.seed = seed;
  if (chosen->count("--workers") > 0) options.workers = workers;
  return zrp::cli::run_command(chosen->get_name(), config_path, options);
}
