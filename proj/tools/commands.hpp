#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"

namespace zrp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitResource = 3,
  kExitOracleFailure = 4,
};

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool svg = false;
};

int cmd_phase_diagram(const Config& config, const RunOptions& options);
int cmd_entropy(const Config& config, const RunOptions& options);
int cmd_rate_function(const Config& config, const RunOptions& options);
int cmd_lifetimes(const Config& config, const RunOptions& options);
int cmd_lln_check(const Config& config, const RunOptions& options);
int cmd_oracle(const Config& config, const RunOptions& options);
int cmd_simulate(const Config& config, const RunOptions& options);

/// Dispatch by subcommand name, mapping errors to exit codes and printing
/// diagnostics to stderr.
int run_command(const std::string& name, const std::filesystem::path& config_path,
                const RunOptions& options);

}  // namespace zrp::cli
