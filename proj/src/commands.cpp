#include "bclab/commands.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bclab/block_builder.hpp"
#include "bclab/counterexample.hpp"
#include "bclab/error.hpp"
#include "bclab/moments.hpp"
#include "bclab/montecarlo.hpp"
#include "bclab/report.hpp"
#include "bclab/rng.hpp"

namespace bclab {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Blocks: return "blocks";
    case Command::Moments: return "moments";
    case Command::Simulate: return "simulate";
    case Command::Counterexample: return "counterexample";
    case Command::Check: return "check";
  }
  return "analyze";
}

Command command_from_string(std::string_view s) {
  for (auto c : {Command::Analyze, Command::Blocks, Command::Moments, Command::Simulate, Command::Counterexample,
                 Command::Check}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::ValueError, "unknown command '" + std::string(s) + "'");
}

RunConfig default_counterexample_config() {
  RunConfig c;
  c.model.family = "finite_static";
  c.model.preset = "paper_s3";
  return c;
}

namespace {

// Collects tables and the JSON document for one run.
class Output {
 public:
  Output(std::string command, const RunConfig& config) : command_(std::move(command)), config_(config) {
    meta_.command = command_;
    meta_.extra.emplace_back("family", config.model.family);
    if (config.model.preset) meta_.extra.emplace_back("preset", *config.model.preset);
  }

  RunMetadata& meta() { return meta_; }

  void table(const std::string& name, Table t) { tables_.emplace_back(name, std::move(t)); }
  void set(const std::string& key, json value) { extra_[key] = std::move(value); }

  std::vector<Artifact> render(const std::vector<DiagnosticsReport>& reports) const {
    std::vector<Artifact> out;
    if (config_.output.format == OutputFormat::Csv) {
      out.push_back({command_ + "_metadata.csv", metadata_table(meta_).to_csv()});
      for (const auto& [name, t] : tables_) out.push_back({command_ + "_" + name + ".csv", t.to_csv()});
      if (!reports.empty()) {
        out.push_back({command_ + "_reports.csv", reports_table(reports).to_csv()});
        const Table s = series_table(reports);
        if (!s.rows.empty()) out.push_back({command_ + "_series.csv", s.to_csv()});
      }
      if (extra_.contains("plan")) out.push_back({command_ + "_plan.json", extra_.at("plan").dump(2) + "\n"});
      return out;
    }
    json doc;
    doc["metadata"] = metadata_json(meta_);
    json tables = json::object();
    for (const auto& [name, t] : tables_) tables[name] = t.to_json();
    doc["tables"] = tables;
    json reps = json::array();
    for (const auto& r : reports) reps.push_back(to_json(r));
    doc["reports"] = reps;
    for (const auto& item : extra_.items()) doc[item.key()] = item.value();
    out.push_back({command_ + ".json", doc.dump(2) + "\n"});
    return out;
  }

 private:
  std::string command_;
  const RunConfig& config_;
  RunMetadata meta_;
  std::vector<std::pair<std::string, Table>> tables_;
  json extra_ = json::object();
};

std::vector<Index> clip_grid(const std::vector<Index>& grid, const EventSequenceModel& model) {
  std::vector<Index> out;
  for (Index m : grid) {
    if (!model.length() || m <= *model.length()) out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorCode::ValueError, "m_grid has no point inside the model's length");
  return out;
}

DiagnosticsReport run_condition(ConditionId id, const EventSequenceModel& model, const RunConfig& config,
                                Output& output) {
  const DiagnosticsSpec& d = config.diagnostics;
  Index scan = d.scan;
  if (model.length()) scan = std::min(scan, *model.length());
  switch (id) {
    case ConditionId::Bc1:
      return check_bc1(model, model.length() ? std::min(d.bc1_depth, *model.length()) : d.bc1_depth);
    case ConditionId::KochenStone: {
      auto ks = kochen_stone_ratio(model, clip_grid(d.m_grid, model), d.epsilon);
      output.table("kochen_stone", moments_table(MomentTable{ks.rows}));
      return ks.report;
    }
    case ConditionId::PairwiseIndependence:
      return check_pairwise_independent(model, scan, d.tolerance);
    case ConditionId::Mixing:
      if (!d.mixing_profile) throw Error(ErrorCode::ValueError, "mixing check needs diagnostics.mixing_profile");
      return check_mixing_condition(model, MixingProfile(*d.mixing_profile), scan, d.tolerance);
    case ConditionId::MatrixCondition: {
      if (!d.matrix) throw Error(ErrorCode::ValueError, "matrix check needs diagnostics.matrix");
      const CorrelationMatrixSpec spec(*d.matrix);
      std::optional<double> cap = d.norm_cap ? d.norm_cap : spec.schur_bound();
      if (!cap) throw Error(ErrorCode::ValueError, "matrix check needs diagnostics.norm_cap");
      return check_matrix_condition(model, spec, scan, *cap, d.tolerance);
    }
    case ConditionId::Xz:
      if (!d.xz_c || !d.xz_delta) throw Error(ErrorCode::ValueError, "xz check needs diagnostics.xz");
      return check_xz_conditions(model, *d.xz_c, *d.xz_delta, clip_grid(d.m_grid, model), d.tolerance);
    case ConditionId::BlockCertificates:
    case ConditionId::Counterexample:
      break;
  }
  throw Error(ErrorCode::ValueError, "condition '" + std::string(to_string(id)) + "' has its own command");
}

std::vector<ConditionId> analyze_selection(const DiagnosticsSpec& d) {
  if (!d.conditions.empty()) return d.conditions;
  std::vector<ConditionId> ids{ConditionId::Bc1, ConditionId::KochenStone};
  if (d.mixing_profile) ids.push_back(ConditionId::Mixing);
  if (d.matrix) ids.push_back(ConditionId::MatrixCondition);
  if (d.xz_c && d.xz_delta) ids.push_back(ConditionId::Xz);
  return ids;
}

BlockPlan build_plan(const EventSequenceModel& model, const PlanSpec& spec) {
  switch (spec.construction) {
    case PlanConstruction::TheoremA:
      return build_blocks_theorem_a(model, spec.blocks, spec.scan_limit.value_or(kDefaultTheoremAScanLimit));
    case PlanConstruction::TheoremB:
      return build_blocks_theorem_b(model, spec.blocks, spec.scan_limit.value_or(kDefaultTheoremBScanLimit));
    case PlanConstruction::UserGiven:
      return user_plan(spec.boundaries);
  }
  return user_plan(spec.boundaries);
}

// Checks the bound each constructed plan promises for its blocks.
DiagnosticsReport certify_plan(const BlockPlan& plan, const BlockProbabilities& probs) {
  DiagnosticsReport r;
  r.condition = ConditionId::BlockCertificates;
  r.scan_range = {1, std::max<Index>(1, plan.last_boundary())};
  r.notes.emplace_back("construction", std::string(to_string(plan.construction)));
  if (plan.construction == PlanConstruction::UserGiven) {
    r.verdict = Verdict::Inconclusive;
    r.notes.emplace_back("reason", "user plans carry no certificate");
    return r;
  }
  r.verdict = Verdict::Holds;
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    const double threshold = std::ldexp(1.0, -static_cast<int>(k));
    const BlockCertificate& c = plan.certificates[k - 1];
    bool ok = true;
    if (plan.construction == PlanConstruction::TheoremA) {
      ok = c.value <= threshold && probs.probabilities[k - 1] <= 2.0 * threshold;
    } else {
      ok = probs.complements[k - 1] < threshold;
    }
    r.series.emplace_back(k, plan.construction == PlanConstruction::TheoremA ? c.value : probs.complements[k - 1]);
    if (!ok && r.verdict == Verdict::Holds) {
      r.verdict = Verdict::Fails;
      r.witness = Witness{{k},
                          {{"certificate", c.value},
                           {"probability", probs.probabilities[k - 1]},
                           {"complement", probs.complements[k - 1]},
                           {"threshold", threshold}}};
    }
  }
  if (r.verdict == Verdict::Holds && plan.block_count() > 0) {
    r.witness = Witness{{plan.last_boundary()}, {{"sum_probabilities", probs.partial_sums.back()}}};
  }
  return r;
}

void run_blocks(const EventSequenceModel& model, const RunConfig& config, Output& out,
                std::vector<DiagnosticsReport>& reports) {
  const PlanSpec spec = config.plan.value_or(PlanSpec{});
  BlockPlan plan;
  try {
    plan = build_plan(model, spec);
  } catch (const PlanConstructionError& e) {
    out.set("plan", to_json(e.partial_plan()));
    out.table("blocks", plan_table(e.partial_plan()));
    throw;
  }
  const BlockProbabilities probs = block_probabilities(model, plan);
  out.table("blocks", plan_table(plan, probs));
  out.set("plan", to_json(plan));
  reports.push_back(certify_plan(plan, probs));

  // Moments of the blocked count, which is what the construction is for.
  if (plan.block_count() > 0) {
    const auto blocked = blocked_model(std::shared_ptr<const EventSequenceModel>(&model, [](const auto*) {}), plan);
    out.table("blocked_moments", moments_table(moments(*blocked, plan.block_count())));
  }
}

void run_simulate(const EventSequenceModel& model, const RunConfig& config, Output& out) {
  const MonteCarloSpec& mc = config.montecarlo;
  if (!mc.seed) throw Error(ErrorCode::ValueError, "simulate needs a seed (montecarlo.seed or --seed)");
  const std::uint64_t seed = *mc.seed;
  out.meta().seed = seed;
  out.meta().generator = CounterRng::kName;
  out.meta().paths = mc.paths;
  out.meta().horizon = mc.horizon;

  std::vector<EmpiricalMoments> rows;
  const auto grid = clip_grid(mc.m_grid, model);
  for (Index m : grid) rows.push_back(empirical_moments(model, m, mc.paths, seed));
  out.table("moments", empirical_table(rows));

  Index horizon = mc.horizon;
  if (model.length()) horizon = std::min(horizon, *model.length());
  const GrowthEvidence growth = growth_verdict(model, horizon, mc.paths, seed);
  out.table("growth", growth_table(growth));
  out.meta().extra.emplace_back("growth", std::string(to_string(growth.classification)));
  out.meta().extra.emplace_back("growth_fraction_late", format_double(growth.fraction_growing_late));
  out.meta().extra.emplace_back("growth_thresholds", "conventional (saturating_fraction=" +
                                                         format_double(growth.options.saturating_fraction) +
                                                         ", windows=" + std::to_string(growth.options.windows) + ")");

  try {
    const XzPathTable q = xz_ratio_paths(model, grid, mc.paths, seed, mc.window);
    out.table("ratio_quantiles", quantile_table(q));
    out.meta().extra.emplace_back("ratio_converged", q.converged ? "true" : "false");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroMean) throw;
    out.meta().extra.emplace_back("ratio_quantiles", "skipped: zero mean on the grid");
  }

  if (config.plan) {
    const BlockPlan plan = build_plan(model, *config.plan);
    // Theorem A plans can reach millions of indices; cap the sampled volume.
    constexpr Index kDrawBudget = 50'000'000;
    const std::size_t checked =
        std::min<std::size_t>(mc.paths, std::max<Index>(1, kDrawBudget / std::max<Index>(1, plan.last_boundary())));
    std::size_t failures = 0;
    for (std::size_t r = 0; r < checked; ++r) {
      const PathSample path = sample_path(model, plan.last_boundary(), derive_seed(seed, r));
      if (!block_path_consistency(path, plan).holds) ++failures;
    }
    out.meta().extra.emplace_back("path_consistency_paths", std::to_string(checked));
    out.meta().extra.emplace_back("path_consistency_failures", std::to_string(failures));
    out.set("plan", to_json(plan));
  }
}

}  // namespace

CommandResult run_command(Command command, const RunConfig& config, std::optional<ConditionId> condition) {
  CommandResult result;
  Output out(std::string(to_string(command)), config);
  try {
    switch (command) {
      case Command::Counterexample: {
        const auto ce = counterexample_report(config.counterexample.parity, config.counterexample.m_max);
        out.table("table", counterexample_table(ce));
        result.reports.push_back(ce.report);
        break;
      }
      case Command::Moments: {
        const ModelPtr model = make_model(config.model);
        out.table("table", moments_table(moments(*model, config.moments.m_max)));
        break;
      }
      case Command::Analyze: {
        const ModelPtr model = make_model(config.model);
        for (ConditionId id : analyze_selection(config.diagnostics)) {
          result.reports.push_back(run_condition(id, *model, config, out));
        }
        break;
      }
      case Command::Check: {
        ConditionId id;
        if (condition) {
          id = *condition;
        } else if (config.diagnostics.conditions.size() == 1) {
          id = config.diagnostics.conditions.front();
        } else {
          throw Error(ErrorCode::ValueError, "check needs exactly one condition");
        }
        const ModelPtr model = make_model(config.model);
        result.reports.push_back(run_condition(id, *model, config, out));
        break;
      }
      case Command::Blocks: {
        const ModelPtr model = make_model(config.model);
        run_blocks(*model, config, out, result.reports);
        break;
      }
      case Command::Simulate: {
        const ModelPtr model = make_model(config.model);
        run_simulate(*model, config, out);
        break;
      }
    }
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = std::string(to_string(command)) + ": " + e.what();
    result.artifacts = out.render(result.reports);
    return result;
  }
  result.reports = merge_reports(std::move(result.reports));
  const bool any_fail = std::any_of(result.reports.begin(), result.reports.end(),
                                    [](const DiagnosticsReport& r) { return r.verdict == Verdict::Fails; });
  result.exit_code = any_fail ? 1 : 0;
  result.artifacts = out.render(result.reports);
  return result;
}

void write_artifacts(const CommandResult& result, const std::filesystem::path& dir) {
  for (const auto& a : result.artifacts) write_file_atomic(dir / a.name, a.content);
}

}  // namespace bclab
