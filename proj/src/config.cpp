#include "bclab/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include <json.hpp>

#include "bclab/error.hpp"
#include "bclab/presets.hpp"

namespace bclab {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::SchemaError, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

[[noreturn]] void value_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::ValueError, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

// Cursor over a JSON value that knows its JSON-pointer path.
class Node {
 public:
  Node(const json& value, std::string pointer) : value_(value), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }
  const json& raw() const { return value_; }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) schema_error(pointer_, "expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : value_.items()) {
      if (!keys.count(item.key())) schema_error(pointer_ + "/" + item.key(), "unknown key");
    }
  }

  bool has(const char* key) const { return value_.contains(key); }

  Node at(const char* key) const {
    if (!value_.contains(key)) schema_error(pointer_ + "/" + key, "required key missing");
    return Node(value_.at(key), pointer_ + "/" + key);
  }

  Node at(std::size_t i) const { return Node(value_.at(i), pointer_ + "/" + std::to_string(i)); }

  std::size_t size() const { return value_.size(); }

  std::string as_string() const {
    if (!value_.is_string()) schema_error(pointer_, "expected a string");
    return value_.get<std::string>();
  }

  double as_number() const {
    if (!value_.is_number()) schema_error(pointer_, "expected a number");
    const double x = value_.get<double>();
    if (!std::isfinite(x)) value_error(pointer_, "must be finite");
    return x;
  }

  std::uint64_t as_unsigned() const {
    if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
    if (value_.is_number_integer()) {
      value_error(pointer_, "must be >= 0, got " + value_.dump());
    }
    schema_error(pointer_, "expected an unsigned integer");
  }

  void expect_array() const {
    if (!value_.is_array()) schema_error(pointer_, "expected an array");
  }

  std::vector<double> as_numbers() const {
    expect_array();
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).as_number());
    return out;
  }

  std::vector<std::uint64_t> as_unsigneds() const {
    expect_array();
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).as_unsigned());
    return out;
  }

 private:
  const json& value_;
  std::string pointer_;
};

void require_positive(const Node& n, double x) {
  if (!(x > 0.0)) value_error(n.pointer(), "must be > 0, got " + n.raw().dump());
}

void require_at_least(const Node& n, std::uint64_t x, std::uint64_t lo) {
  if (x < lo) value_error(n.pointer(), "must be >= " + std::to_string(lo) + ", got " + std::to_string(x));
}

std::vector<Index> parse_grid(const Node& n) {
  auto grid = n.as_unsigneds();
  if (grid.empty()) value_error(n.pointer(), "grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0 || (i > 0 && grid[i] <= grid[i - 1])) {
      value_error(n.pointer(), "grid must be strictly increasing positive integers");
    }
  }
  return grid;
}

// Re-raises library validation errors with the JSON pointer attached.
template <class F>
auto with_pointer(const Node& n, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    value_error(n.pointer(), e.detail());
  }
}

MarginalSpec parse_marginal(const Node& n) {
  n.expect_object({"kind", "c", "alpha", "shift", "values", "tail"});
  const std::string kind = n.at("kind").as_string();
  auto num = [&](const char* key, double fallback) { return n.has(key) ? n.at(key).as_number() : fallback; };
  auto only = [&](std::initializer_list<const char*> allowed) {
    std::set<std::string> keys(allowed.begin(), allowed.end());
    keys.insert("kind");
    for (const auto& item : n.raw().items()) {
      if (!keys.count(item.key())) schema_error(n.pointer() + "/" + item.key(), "not valid for kind '" + kind + "'");
    }
  };
  MarginalSpec spec;
  if (kind == "constant") {
    only({"c"});
    spec = ConstantMarginal{n.at("c").as_number()};
  } else if (kind == "power") {
    only({"c", "alpha", "shift"});
    spec = PowerMarginal{num("c", 1.0), n.at("alpha").as_number(), num("shift", 0.0)};
  } else if (kind == "harmonic") {
    only({"c", "shift"});
    spec = HarmonicMarginal{num("c", 1.0), num("shift", 0.0)};
  } else if (kind == "explicit") {
    only({"values", "tail"});
    spec = ExplicitMarginal{n.at("values").as_numbers(), num("tail", 0.0)};
  } else {
    value_error(n.pointer() + "/kind", "unknown marginal kind '" + kind + "'");
  }
  with_pointer(n, [&] {
    validate(spec);
    return 0;
  });
  return spec;
}

std::vector<std::vector<std::size_t>> parse_schedule(const Node& n) {
  n.expect_array();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    auto members = n.at(i).as_unsigneds();
    out.emplace_back(members.begin(), members.end());
  }
  return out;
}

ModelSpec parse_model(const Node& n) {
  n.expect_object({"family", "preset", "marginal", "atoms", "prefix", "cycle", "initial", "transition"});
  ModelSpec spec;
  spec.family = n.at("family").as_string();
  if (spec.family != "independent" && spec.family != "finite_static" && spec.family != "markov") {
    value_error(n.pointer() + "/family", "unknown family '" + spec.family + "'");
  }
  auto reject = [&](std::initializer_list<const char*> keys, const std::string& why) {
    for (const char* k : keys) {
      if (n.has(k)) schema_error(n.pointer() + "/" + k, why);
    }
  };
  if (n.has("preset")) {
    spec.preset = n.at("preset").as_string();
    reject({"marginal", "atoms", "prefix", "cycle", "initial", "transition"}, "not allowed together with a preset");
    with_pointer(n.at("preset"), [&] { return make_preset(spec.family, *spec.preset); });
    return spec;
  }
  if (spec.family == "independent") {
    reject({"atoms", "prefix", "cycle", "initial", "transition"}, "not valid for family 'independent'");
    spec.params = IndependentParams{parse_marginal(n.at("marginal"))};
  } else if (spec.family == "finite_static") {
    reject({"marginal", "initial", "transition"}, "not valid for family 'finite_static'");
    FiniteStaticParams p;
    const Node atoms = n.at("atoms");
    atoms.expect_array();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Node a = atoms.at(i);
      a.expect_object({"label", "weight"});
      p.atoms.push_back({a.at("label").as_string(), a.at("weight").as_number()});
    }
    if (n.has("prefix")) p.prefix = parse_schedule(n.at("prefix"));
    p.cycle = parse_schedule(n.at("cycle"));
    spec.params = std::move(p);
  } else {
    reject({"marginal", "atoms", "prefix", "cycle"}, "not valid for family 'markov'");
    MarkovParams p;
    const auto init = n.at("initial").as_numbers();
    if (init.size() != 2) value_error(n.pointer() + "/initial", "expected 2 entries");
    p.initial = {init[0], init[1]};
    const Node t = n.at("transition");
    t.expect_array();
    if (t.size() != 2) value_error(t.pointer(), "expected 2 rows");
    for (std::size_t r = 0; r < 2; ++r) {
      const auto row = t.at(r).as_numbers();
      if (row.size() != 2) value_error(t.at(r).pointer(), "expected 2 entries");
      p.transition[r * 2] = row[0];
      p.transition[r * 2 + 1] = row[1];
    }
    spec.params = p;
  }
  with_pointer(n, [&] { return make_model(spec); });
  return spec;
}

PlanSpec parse_plan(const Node& n) {
  n.expect_object({"construction", "blocks", "scan_limit", "boundaries"});
  PlanSpec p;
  p.construction = with_pointer(n.at("construction"),
                                [&] { return plan_construction_from_string(n.at("construction").as_string()); });
  if (n.has("blocks")) {
    p.blocks = n.at("blocks").as_unsigned();
    require_at_least(n.at("blocks"), p.blocks, 1);
  }
  if (n.has("scan_limit")) {
    p.scan_limit = n.at("scan_limit").as_unsigned();
    require_at_least(n.at("scan_limit"), *p.scan_limit, 1);
  }
  if (n.has("boundaries")) {
    if (p.construction != PlanConstruction::UserGiven) {
      schema_error(n.pointer() + "/boundaries", "only valid for user_given plans");
    }
    p.boundaries = n.at("boundaries").as_unsigneds();
    with_pointer(n.at("boundaries"), [&] { return user_plan(p.boundaries); });
  } else if (p.construction == PlanConstruction::UserGiven) {
    schema_error(n.pointer() + "/boundaries", "required key missing");
  }
  return p;
}

MixingProfile::Spec parse_profile(const Node& n) {
  n.expect_object({"kind", "c", "r", "beta", "values"});
  const std::string kind = n.at("kind").as_string();
  MixingProfile::Spec spec;
  if (kind == "geometric") {
    spec = GeometricProfile{n.at("c").as_number(), n.at("r").as_number()};
  } else if (kind == "power") {
    spec = PowerProfile{n.at("c").as_number(), n.at("beta").as_number()};
  } else if (kind == "explicit") {
    spec = ExplicitProfile{n.at("values").as_numbers()};
  } else {
    value_error(n.pointer() + "/kind", "unknown profile kind '" + kind + "'");
  }
  with_pointer(n, [&] { return MixingProfile(spec).l1_bound(); });
  return spec;
}

CorrelationMatrixSpec::Spec parse_matrix(const Node& n) {
  n.expect_object({"kind", "c", "r", "rows"});
  const std::string kind = n.at("kind").as_string();
  CorrelationMatrixSpec::Spec spec;
  if (kind == "zero") {
    spec = ZeroMatrix{};
  } else if (kind == "constant") {
    spec = ConstantMatrix{n.at("c").as_number()};
  } else if (kind == "banded") {
    spec = BandedMatrix{n.at("c").as_number(), n.at("r").as_number()};
  } else if (kind == "explicit") {
    const Node rows = n.at("rows");
    rows.expect_array();
    ExplicitMatrix m;
    for (std::size_t i = 0; i < rows.size(); ++i) m.rows.push_back(rows.at(i).as_numbers());
    spec = m;
  } else {
    value_error(n.pointer() + "/kind", "unknown matrix kind '" + kind + "'");
  }
  with_pointer(n, [&] { return CorrelationMatrixSpec(spec).schur_bound(); });
  return spec;
}

DiagnosticsSpec parse_diagnostics(const Node& n) {
  n.expect_object({"conditions", "scan", "bc1_depth", "m_grid", "epsilon", "tolerance", "mixing_profile", "matrix",
                   "norm_cap", "xz"});
  DiagnosticsSpec d;
  if (n.has("conditions")) {
    const Node c = n.at("conditions");
    c.expect_array();
    for (std::size_t i = 0; i < c.size(); ++i) {
      d.conditions.push_back(with_pointer(c.at(i), [&] { return condition_from_string(c.at(i).as_string()); }));
    }
  }
  if (n.has("scan")) {
    d.scan = n.at("scan").as_unsigned();
    require_at_least(n.at("scan"), d.scan, 2);
  }
  if (n.has("bc1_depth")) {
    d.bc1_depth = n.at("bc1_depth").as_unsigned();
    require_at_least(n.at("bc1_depth"), d.bc1_depth, 1);
  }
  if (n.has("m_grid")) d.m_grid = parse_grid(n.at("m_grid"));
  if (n.has("epsilon")) {
    d.epsilon = n.at("epsilon").as_number();
    require_positive(n.at("epsilon"), d.epsilon);
  }
  if (n.has("tolerance")) {
    d.tolerance = n.at("tolerance").as_number();
    if (d.tolerance < 0.0) value_error(n.pointer() + "/tolerance", "must be >= 0");
  }
  if (n.has("mixing_profile")) d.mixing_profile = parse_profile(n.at("mixing_profile"));
  if (n.has("matrix")) d.matrix = parse_matrix(n.at("matrix"));
  if (n.has("norm_cap")) {
    d.norm_cap = n.at("norm_cap").as_number();
    require_positive(n.at("norm_cap"), *d.norm_cap);
  }
  if (n.has("xz")) {
    const Node xz = n.at("xz");
    xz.expect_object({"C", "delta"});
    d.xz_c = xz.at("C").as_number();
    require_positive(xz.at("C"), *d.xz_c);
    d.xz_delta = xz.at("delta").as_number();
    require_positive(xz.at("delta"), *d.xz_delta);
  }
  return d;
}

MonteCarloSpec parse_montecarlo(const Node& n) {
  n.expect_object({"paths", "horizon", "seed", "m_grid", "window"});
  MonteCarloSpec m;
  if (n.has("paths")) {
    m.paths = n.at("paths").as_unsigned();
    require_at_least(n.at("paths"), m.paths, 10);
  }
  if (n.has("horizon")) {
    m.horizon = n.at("horizon").as_unsigned();
    require_at_least(n.at("horizon"), m.horizon, 10);
  }
  if (n.has("seed")) m.seed = n.at("seed").as_unsigned();
  if (n.has("m_grid")) m.m_grid = parse_grid(n.at("m_grid"));
  if (n.has("window")) {
    m.window = n.at("window").as_number();
    require_positive(n.at("window"), m.window);
  }
  return m;
}

CounterexampleSpec parse_counterexample(const Node& n) {
  n.expect_object({"m_max", "parity", "odd_count"});
  CounterexampleSpec c;
  if (n.has("m_max")) {
    c.m_max = n.at("m_max").as_unsigned();
    require_at_least(n.at("m_max"), c.m_max, 1);
  }
  if (n.has("parity")) {
    c.parity.rule = with_pointer(n.at("parity"), [&] { return parity_rule_from_string(n.at("parity").as_string()); });
  }
  if (n.has("odd_count")) {
    if (c.parity.rule != ParityRule::OddPrefix) schema_error(n.pointer() + "/odd_count", "only valid for odd_prefix");
    c.parity.odd_count = n.at("odd_count").as_unsigned();
  }
  return c;
}

json marginal_to_json(const MarginalSpec& spec) {
  return std::visit(overloaded{
                        [](const ConstantMarginal& m) { return json{{"kind", "constant"}, {"c", m.c}}; },
                        [](const PowerMarginal& m) {
                          return json{{"kind", "power"}, {"c", m.c}, {"alpha", m.alpha}, {"shift", m.shift}};
                        },
                        [](const HarmonicMarginal& m) {
                          return json{{"kind", "harmonic"}, {"c", m.c}, {"shift", m.shift}};
                        },
                        [](const ExplicitMarginal& m) {
                          return json{{"kind", "explicit"}, {"values", m.values}, {"tail", m.tail}};
                        },
                    },
                    spec);
}

json model_to_json(const ModelSpec& spec) {
  json j{{"family", spec.family}};
  if (spec.preset) j["preset"] = *spec.preset;
  std::visit(overloaded{
                 [](const std::monostate&) {},
                 [&](const IndependentParams& p) { j["marginal"] = marginal_to_json(p.marginal); },
                 [&](const FiniteStaticParams& p) {
                   json atoms = json::array();
                   for (const auto& a : p.atoms) atoms.push_back({{"label", a.label}, {"weight", a.weight}});
                   j["atoms"] = atoms;
                   j["prefix"] = p.prefix;
                   j["cycle"] = p.cycle;
                 },
                 [&](const MarkovParams& p) {
                   j["initial"] = p.initial;
                   j["transition"] = json::array({json::array({p.transition[0], p.transition[1]}),
                                                  json::array({p.transition[2], p.transition[3]})});
                 },
             },
             spec.params);
  return j;
}

json profile_to_json(const MixingProfile::Spec& spec) {
  return std::visit(overloaded{
                        [](const GeometricProfile& g) { return json{{"kind", "geometric"}, {"c", g.c}, {"r", g.r}}; },
                        [](const PowerProfile& p) { return json{{"kind", "power"}, {"c", p.c}, {"beta", p.beta}}; },
                        [](const ExplicitProfile& e) { return json{{"kind", "explicit"}, {"values", e.values}}; },
                    },
                    spec);
}

json matrix_to_json(const CorrelationMatrixSpec::Spec& spec) {
  return std::visit(overloaded{
                        [](const ZeroMatrix&) { return json{{"kind", "zero"}}; },
                        [](const ConstantMatrix& m) { return json{{"kind", "constant"}, {"c", m.c}}; },
                        [](const BandedMatrix& m) { return json{{"kind", "banded"}, {"c", m.c}, {"r", m.r}}; },
                        [](const ExplicitMatrix& m) { return json{{"kind", "explicit"}, {"rows", m.rows}}; },
                    },
                    spec);
}

}  // namespace

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(ErrorCode::ValueError, "unknown output format '" + std::string(s) + "'");
}

RunConfig parse_config(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    schema_error("", std::string("malformed JSON: ") + e.what());
  }
  const Node n(root, "");
  n.expect_object({"model", "plan", "diagnostics", "montecarlo", "counterexample", "moments", "output"});
  RunConfig c;
  c.model = parse_model(n.at("model"));
  if (n.has("plan")) c.plan = parse_plan(n.at("plan"));
  if (n.has("diagnostics")) c.diagnostics = parse_diagnostics(n.at("diagnostics"));
  if (n.has("montecarlo")) c.montecarlo = parse_montecarlo(n.at("montecarlo"));
  if (n.has("counterexample")) c.counterexample = parse_counterexample(n.at("counterexample"));
  if (n.has("moments")) {
    const Node m = n.at("moments");
    m.expect_object({"m_max"});
    if (m.has("m_max")) {
      c.moments.m_max = m.at("m_max").as_unsigned();
      require_at_least(m.at("m_max"), c.moments.m_max, 1);
    }
  }
  if (n.has("output")) {
    const Node o = n.at("output");
    o.expect_object({"format", "path"});
    if (o.has("format")) {
      c.output.format = with_pointer(o.at("format"), [&] { return output_format_from_string(o.at("format").as_string()); });
    }
    if (o.has("path")) c.output.path = o.at("path").as_string();
  }
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["model"] = model_to_json(c.model);
  if (c.plan) {
    json p{{"construction", std::string(to_string(c.plan->construction))}, {"blocks", c.plan->blocks}};
    if (c.plan->scan_limit) p["scan_limit"] = *c.plan->scan_limit;
    if (c.plan->construction == PlanConstruction::UserGiven) p["boundaries"] = c.plan->boundaries;
    j["plan"] = p;
  }
  json d{{"scan", c.diagnostics.scan},       {"bc1_depth", c.diagnostics.bc1_depth},
         {"m_grid", c.diagnostics.m_grid},   {"epsilon", c.diagnostics.epsilon},
         {"tolerance", c.diagnostics.tolerance}};
  json conditions = json::array();
  for (auto id : c.diagnostics.conditions) conditions.push_back(std::string(to_string(id)));
  d["conditions"] = conditions;
  if (c.diagnostics.mixing_profile) d["mixing_profile"] = profile_to_json(*c.diagnostics.mixing_profile);
  if (c.diagnostics.matrix) d["matrix"] = matrix_to_json(*c.diagnostics.matrix);
  if (c.diagnostics.norm_cap) d["norm_cap"] = *c.diagnostics.norm_cap;
  if (c.diagnostics.xz_c && c.diagnostics.xz_delta) {
    d["xz"] = {{"C", *c.diagnostics.xz_c}, {"delta", *c.diagnostics.xz_delta}};
  }
  j["diagnostics"] = d;
  json mc{{"paths", c.montecarlo.paths},
          {"horizon", c.montecarlo.horizon},
          {"m_grid", c.montecarlo.m_grid},
          {"window", c.montecarlo.window}};
  if (c.montecarlo.seed) mc["seed"] = *c.montecarlo.seed;
  j["montecarlo"] = mc;
  json ce{{"m_max", c.counterexample.m_max}, {"parity", std::string(to_string(c.counterexample.parity.rule))}};
  if (c.counterexample.parity.rule == ParityRule::OddPrefix) ce["odd_count"] = c.counterexample.parity.odd_count;
  j["counterexample"] = ce;
  j["moments"] = {{"m_max", c.moments.m_max}};
  j["output"] = {{"format", std::string(to_string(c.output.format))}, {"path", c.output.path}};
  return j.dump(2);
}

ModelPtr make_model(const ModelSpec& spec) {
  if (spec.preset) return make_preset(spec.family, *spec.preset);
  return std::visit(
      overloaded{
          [&](const std::monostate&) -> ModelPtr {
            throw Error(ErrorCode::ValueError, "model '" + spec.family + "' has neither preset nor parameters");
          },
          [](const IndependentParams& p) -> ModelPtr { return std::make_shared<const IndependentModel>(p.marginal); },
          [](const FiniteStaticParams& p) -> ModelPtr {
            auto space = make_finite_space(p.atoms);
            std::vector<Event> prefix;
            std::vector<Event> cycle;
            for (const auto& e : p.prefix) prefix.push_back(Event::make(space, e));
            for (const auto& e : p.cycle) cycle.push_back(Event::make(space, e));
            return std::make_shared<const FiniteStaticModel>(space, std::move(prefix), std::move(cycle));
          },
          [](const MarkovParams& p) -> ModelPtr {
            return std::make_shared<const TwoStateMarkovModel>(p.initial, p.transition);
          },
      },
      spec.params);
}

}  // namespace bclab
