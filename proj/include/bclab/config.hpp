#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bclab/block_plan.hpp"
#include "bclab/counterexample.hpp"
#include "bclab/diagnostics.hpp"
#include "bclab/finite_space.hpp"
#include "bclab/marginal_spec.hpp"
#include "bclab/models.hpp"

namespace bclab {

struct IndependentParams {
  MarginalSpec marginal;
  friend bool operator==(const IndependentParams&, const IndependentParams&) = default;
};

struct FiniteStaticParams {
  std::vector<Atom> atoms;
  std::vector<std::vector<std::size_t>> prefix;
  std::vector<std::vector<std::size_t>> cycle;
  friend bool operator==(const FiniteStaticParams&, const FiniteStaticParams&) = default;
};

struct MarkovParams {
  std::array<double, 2> initial{};
  std::array<double, 4> transition{};  // row-major
  friend bool operator==(const MarkovParams&, const MarkovParams&) = default;
};

/// A model is either a named preset of its family or explicit parameters.
struct ModelSpec {
  std::string family;
  std::optional<std::string> preset;
  std::variant<std::monostate, IndependentParams, FiniteStaticParams, MarkovParams> params;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct PlanSpec {
  PlanConstruction construction = PlanConstruction::TheoremB;
  std::size_t blocks = 10;
  std::optional<Index> scan_limit;
  std::vector<Index> boundaries;  // user_given only
  friend bool operator==(const PlanSpec&, const PlanSpec&) = default;
};

struct DiagnosticsSpec {
  std::vector<ConditionId> conditions;  // empty: bc1 + kochen_stone + whatever is configured
  Index scan = 64;
  Index bc1_depth = 1000;
  std::vector<Index> m_grid{10, 100, 1000};
  double epsilon = 1e-3;
  double tolerance = kDefaultCheckTolerance;
  std::optional<MixingProfile::Spec> mixing_profile;
  std::optional<CorrelationMatrixSpec::Spec> matrix;
  std::optional<double> norm_cap;
  std::optional<double> xz_c;
  std::optional<double> xz_delta;
  friend bool operator==(const DiagnosticsSpec&, const DiagnosticsSpec&) = default;
};

struct MonteCarloSpec {
  std::size_t paths = 10000;
  Index horizon = 1000;
  std::optional<std::uint64_t> seed;
  std::vector<Index> m_grid{10, 100};
  double window = 0.1;
  friend bool operator==(const MonteCarloSpec&, const MonteCarloSpec&) = default;
};

struct CounterexampleSpec {
  ParitySpec parity;
  Index m_max = 1000;
  friend bool operator==(const CounterexampleSpec&, const CounterexampleSpec&) = default;
};

struct MomentsSpec {
  Index m_max = 100;
  friend bool operator==(const MomentsSpec&, const MomentsSpec&) = default;
};

enum class OutputFormat { Csv, Json };
std::string_view to_string(OutputFormat f);
OutputFormat output_format_from_string(std::string_view s);

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path = ".";
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  ModelSpec model;
  std::optional<PlanSpec> plan;
  DiagnosticsSpec diagnostics;
  MonteCarloSpec montecarlo;
  CounterexampleSpec counterexample;
  MomentsSpec moments;
  OutputSpec output;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parse: unknown keys raise SchemaError naming the JSON pointer of the
/// offending key; out-of-range numbers raise ValueError.
RunConfig parse_config(std::string_view document);
/// Canonical JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Builds (and validates) the model a spec describes.
ModelPtr make_model(const ModelSpec& spec);

}  // namespace bclab
