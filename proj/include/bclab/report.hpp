#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bclab/block_builder.hpp"
#include "bclab/block_plan.hpp"
#include "bclab/counterexample.hpp"
#include "bclab/diagnostics.hpp"
#include "bclab/format.hpp"
#include "bclab/moments.hpp"
#include "bclab/montecarlo.hpp"

namespace bclab {

/// Rectangular table with a fixed header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// RFC 4180 style, '\n' line endings.
  std::string to_csv() const;
  /// Array of objects keyed by header. Cells that parse fully as numbers
  /// become numbers, empty cells become null.
  nlohmann::json to_json() const;
};

// Column orders are part of the output contract; see README.
Table moments_table(const MomentTable& table);  // m,mean,variance,ratio
Table plan_table(const BlockPlan& plan,
                 const std::optional<BlockProbabilities>& probabilities = std::nullopt);
Table reports_table(std::span<const DiagnosticsReport> reports);
Table series_table(std::span<const DiagnosticsReport> reports);  // condition,index,value
Table counterexample_table(const CounterexampleReport& report);
Table empirical_table(std::span<const EmpiricalMoments> rows);
Table quantile_table(const XzPathTable& table);
Table growth_table(const GrowthEvidence& evidence);

/// Key/value block written next to sampled outputs.
struct RunMetadata {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator;
  std::optional<std::size_t> paths;
  std::optional<Index> horizon;
  std::vector<std::pair<std::string, std::string>> extra;
};
Table metadata_table(const RunMetadata& meta);  // key,value
nlohmann::json metadata_json(const RunMetadata& meta);

nlohmann::json to_json(const DiagnosticsReport& report);
nlohmann::json to_json(const BlockPlan& plan);
/// Inverse of to_json(BlockPlan); validates the result. Throws SchemaError.
BlockPlan plan_from_json(const nlohmann::json& j);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bclab
