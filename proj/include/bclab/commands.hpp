#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bclab/config.hpp"
#include "bclab/diagnostics.hpp"

namespace bclab {

enum class Command { Analyze, Blocks, Moments, Simulate, Counterexample, Check };

std::string_view to_string(Command c);
/// Throws ValueError for unknown names.
Command command_from_string(std::string_view s);

/// File name (relative to the output directory) and its full contents.
struct Artifact {
  std::string name;
  std::string content;
};

struct CommandResult {
  /// 0: every verdict holds or is inconclusive; 1: some verdict fails;
  /// 2: configuration or runtime error (see `error`).
  int exit_code = 0;
  std::vector<Artifact> artifacts;
  std::vector<DiagnosticsReport> reports;
  std::string error;
};

/// Runs one command without touching the filesystem. `check` needs exactly
/// one condition, either `condition` or the single entry of
/// config.diagnostics.conditions. Never throws for bad input; errors land in
/// the result with exit code 2.
CommandResult run_command(Command command, const RunConfig& config,
                          std::optional<ConditionId> condition = std::nullopt);

/// Writes each artifact atomically under `dir`, creating it if needed.
void write_artifacts(const CommandResult& result, const std::filesystem::path& dir);

/// Config used when the counterexample command is run without one.
RunConfig default_counterexample_config();

}  // namespace bclab
