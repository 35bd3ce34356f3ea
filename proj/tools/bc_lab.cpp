// bc-lab: batch front end over the bclab library.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "bclab/commands.hpp"
#include "bclab/config.hpp"
#include "bclab/error.hpp"
#include "bclab/presets.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preset;
  std::optional<std::string> theorem;
  std::optional<std::size_t> blocks;
  std::optional<bclab::Index> scan_limit;
  std::optional<bclab::Index> m_max;
  std::optional<std::string> parity;
  std::optional<bclab::Index> odd_count;
  std::optional<std::size_t> paths;
  std::optional<bclab::Index> horizon;
  std::optional<std::string> condition;
};

void add_options(CLI::App* sub, Overrides& o, bool config_required) {
  auto* cfg = sub->add_option("--config", o.config_path, "JSON run configuration");
  if (config_required) cfg->required();
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", o.seed, "base seed for sampling");
  sub->add_option("--preset", o.preset, "replace the model with a named preset");
  sub->add_option("--theorem", o.theorem, "plan construction: a or b")->check(CLI::IsMember({"a", "b"}));
  sub->add_option("--K,--blocks", o.blocks, "number of blocks");
  sub->add_option("--scan-limit", o.scan_limit, "search cap for plan construction");
  sub->add_option("--m-max", o.m_max, "largest m for moment tables");
  sub->add_option("--parity", o.parity, "alternating | all_odd | all_even | odd_prefix");
  sub->add_option("--odd-count", o.odd_count, "odd picks for odd_prefix");
  sub->add_option("--paths", o.paths, "Monte Carlo replications");
  sub->add_option("--horizon", o.horizon, "path length for growth evidence");
  sub->add_option("--condition", o.condition, "condition name for check");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bclab::Error(bclab::ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bclab::RunConfig load(bclab::Command command, const Overrides& o) {
  using namespace bclab;
  RunConfig c;
  if (!o.config_path.empty()) {
    c = parse_config(read_file(o.config_path));
  } else {
    c = default_counterexample_config();
  }
  if (o.preset) {
    const PresetInfo* info = nullptr;
    for (const auto& p : preset_registry()) {
      if (p.name == *o.preset) info = &p;
    }
    if (!info) throw Error(ErrorCode::ValueError, "unknown preset '" + *o.preset + "'");
    c.model = ModelSpec{info->family, info->name, {}};
  }
  if (o.out) c.output.path = *o.out;
  if (o.format) c.output.format = output_format_from_string(*o.format);
  if (o.seed) c.montecarlo.seed = *o.seed;
  if (o.paths) c.montecarlo.paths = *o.paths;
  if (o.horizon) c.montecarlo.horizon = *o.horizon;
  if (o.theorem || o.blocks || o.scan_limit) {
    PlanSpec plan = c.plan.value_or(PlanSpec{});
    if (o.theorem) plan.construction = *o.theorem == "a" ? PlanConstruction::TheoremA : PlanConstruction::TheoremB;
    if (o.blocks) plan.blocks = *o.blocks;
    if (o.scan_limit) plan.scan_limit = *o.scan_limit;
    c.plan = plan;
  }
  if (o.m_max) {
    if (command == Command::Counterexample) {
      c.counterexample.m_max = *o.m_max;
    } else {
      c.moments.m_max = *o.m_max;
    }
  }
  if (o.parity) c.counterexample.parity.rule = parity_rule_from_string(*o.parity);
  if (o.odd_count) c.counterexample.parity.odd_count = *o.odd_count;
  // Re-validate after overrides.
  return parse_config(serialize_config(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bc-lab: Borel-Cantelli computations over event-sequence models"};
  app.require_subcommand(1);
  Overrides o;
  std::optional<bclab::Command> chosen;
  const std::pair<const char*, const char*> subs[] = {
      {"analyze", "run the configured condition checks"},
      {"blocks", "build and certify a block plan"},
      {"moments", "exact E S_m and Var S_m table"},
      {"simulate", "Monte Carlo moments, growth and ratio quantiles"},
      {"counterexample", "parity-subsequence moment table (no config needed)"},
      {"check", "run a single condition given by --condition"},
  };
  for (auto [name, help] : subs) {
    const bclab::Command cmd = bclab::command_from_string(name);
    auto* sub = app.add_subcommand(name, help);
    add_options(sub, o, cmd != bclab::Command::Counterexample);
    sub->callback([&chosen, cmd] { chosen = cmd; });
  }
  auto* list = app.add_subcommand("presets", "list built-in models");
  list->callback([] {
    for (const auto& p : bclab::preset_registry()) std::cout << p.name << '\t' << p.family << '\t' << p.description << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!chosen) return 0;

  bclab::RunConfig config;
  std::optional<bclab::ConditionId> condition;
  try {
    config = load(*chosen, o);
    if (o.condition) condition = bclab::condition_from_string(*o.condition);
  } catch (const std::exception& e) {
    std::cerr << "bc-lab " << bclab::to_string(*chosen) << ": " << e.what() << '\n';
    return 2;
  }

  const bclab::CommandResult result = bclab::run_command(*chosen, config, condition);
  try {
    bclab::write_artifacts(result, config.output.path);
  } catch (const std::exception& e) {
    std::cerr << "bc-lab: " << e.what() << '\n';
    return 2;
  }
  for (const auto& r : result.reports) {
    std::cout << bclab::to_string(r.condition) << ": " << bclab::to_string(r.verdict) << '\n';
  }
  for (const auto& a : result.artifacts) std::cout << "wrote " << (std::filesystem::path(config.output.path) / a.name).string() << '\n';
  if (!result.error.empty()) std::cerr << "bc-lab " << result.error << '\n';
  return result.exit_code;
}
