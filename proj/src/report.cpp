#include "bclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include "bclab/error.hpp"
#include "bclab/rng.hpp"

namespace bclab {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  // printf is locale-sensitive only through LC_NUMERIC, which we never set.
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string fmt(double x) { return format_double(x); }
std::string fmt(std::optional<double> x) { return x ? format_double(*x) : std::string(); }
std::string fmt_u(std::uint64_t x) { return std::to_string(x); }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_indices(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

json cell_json(const std::string& s) {
  if (s.empty()) return nullptr;
  const char* begin = s.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin + s.size() && std::isfinite(x)) {
    if (s.find_first_of(".eE") == std::string::npos && s[0] != '-') return std::stoull(s);
    return x;
  }
  return s;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

json Table::to_json() const {
  json arr = json::array();
  for (const auto& r : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) obj[header[i]] = cell_json(r[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

Table moments_table(const MomentTable& table) {
  Table t{{"m", "mean", "variance", "ratio"}, {}};
  for (const auto& r : table.rows) t.rows.push_back({fmt_u(r.m), fmt(r.mean), fmt(r.variance), fmt(r.ratio)});
  return t;
}

Table plan_table(const BlockPlan& plan, const std::optional<BlockProbabilities>& probs) {
  Table t{{"k", "lo", "hi", "construction", "certificate", "complement", "exact_tail", "probability",
           "partial_sum"},
          {}};
  for (std::size_t k = 1; k <= plan.block_count(); ++k) {
    const IndexRange b = plan.block(k);
    std::vector<std::string> row{fmt_u(k), fmt_u(b.lo), fmt_u(b.hi), std::string(to_string(plan.construction))};
    if (k <= plan.certificates.size()) {
      const auto& c = plan.certificates[k - 1];
      row.push_back(fmt(c.value));
      row.push_back(fmt(c.complement));
      row.push_back(fmt(c.exact_tail));
    } else {
      row.insert(row.end(), 3, std::string());
    }
    if (probs) {
      row.push_back(fmt(probs->probabilities[k - 1]));
      row.push_back(fmt(probs->partial_sums[k - 1]));
    } else {
      row.insert(row.end(), 2, std::string());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table reports_table(std::span<const DiagnosticsReport> reports) {
  Table t{{"condition", "verdict", "scan_first", "scan_last", "witness_indices", "witness_values", "notes"}, {}};
  for (const auto& r : reports) {
    std::string indices;
    std::string values;
    if (r.witness) {
      indices = join_indices(r.witness->indices);
      for (std::size_t i = 0; i < r.witness->values.size(); ++i) {
        if (i) values += ';';
        values += r.witness->values[i].first + "=" + fmt(r.witness->values[i].second);
      }
    }
    std::string notes;
    for (std::size_t i = 0; i < r.notes.size(); ++i) {
      if (i) notes += ';';
      notes += r.notes[i].first + "=" + r.notes[i].second;
    }
    t.rows.push_back({std::string(to_string(r.condition)), std::string(to_string(r.verdict)),
                      fmt_u(r.scan_range.first), fmt_u(r.scan_range.last), indices, values, notes});
  }
  return t;
}

Table series_table(std::span<const DiagnosticsReport> reports) {
  Table t{{"condition", "index", "value"}, {}};
  for (const auto& r : reports) {
    for (const auto& [i, v] : r.series) t.rows.push_back({std::string(to_string(r.condition)), fmt_u(i), fmt(v)});
  }
  return t;
}

Table counterexample_table(const CounterexampleReport& report) {
  Table t{{"m", "t", "mean", "variance", "ratio", "engine_mean", "engine_variance", "relative_error"}, {}};
  for (const auto& r : report.rows) {
    t.rows.push_back({fmt_u(r.m), fmt_u(r.t), fmt(r.mean), fmt(r.variance), fmt(r.ratio), fmt(r.engine_mean),
                      fmt(r.engine_variance), fmt(r.relative_error)});
  }
  return t;
}

Table empirical_table(std::span<const EmpiricalMoments> rows) {
  Table t{{"m", "paths", "seed", "mean_hat", "se_mean", "exact_mean", "var_hat", "se_var", "exact_var"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({fmt_u(r.m), fmt_u(r.paths), fmt_u(r.seed), fmt(r.mean_hat), fmt(r.se_mean),
                      fmt(r.exact_mean), fmt(r.var_hat), fmt(r.se_var), fmt(r.exact_var)});
  }
  return t;
}

Table quantile_table(const XzPathTable& table) {
  Table t{{"m", "exact_mean", "q05", "q50", "q95"}, {}};
  for (const auto& r : table.rows) {
    t.rows.push_back({fmt_u(r.m), fmt(r.exact_mean), fmt(r.q05), fmt(r.q50), fmt(r.q95)});
  }
  return t;
}

Table growth_table(const GrowthEvidence& e) {
  Table t{{"window_lo", "window_hi", "min_hits"}, {}};
  for (const auto& w : e.windows) t.rows.push_back({fmt_u(w.range.lo), fmt_u(w.range.hi), fmt_u(w.min_hits)});
  return t;
}

Table metadata_table(const RunMetadata& meta) {
  Table t{{"key", "value"}, {{"command", meta.command}}};
  if (meta.seed) t.rows.push_back({"seed", fmt_u(*meta.seed)});
  if (meta.generator) t.rows.push_back({"generator", *meta.generator});
  if (meta.paths) t.rows.push_back({"paths", fmt_u(*meta.paths)});
  if (meta.horizon) t.rows.push_back({"horizon", fmt_u(*meta.horizon)});
  for (const auto& [k, v] : meta.extra) t.rows.push_back({k, v});
  return t;
}

json metadata_json(const RunMetadata& meta) {
  json j{{"command", meta.command}};
  if (meta.seed) j["seed"] = *meta.seed;
  if (meta.generator) j["generator"] = *meta.generator;
  if (meta.paths) j["paths"] = *meta.paths;
  if (meta.horizon) j["horizon"] = *meta.horizon;
  for (const auto& [k, v] : meta.extra) j[k] = v;
  return j;
}

json to_json(const DiagnosticsReport& r) {
  json j{{"condition", std::string(to_string(r.condition))},
         {"verdict", std::string(to_string(r.verdict))},
         {"scan_range", {{"first", r.scan_range.first}, {"last", r.scan_range.last}}}};
  if (r.witness) {
    json values = json::object();
    for (const auto& [k, v] : r.witness->values) values[k] = v;
    j["witness"] = {{"indices", r.witness->indices}, {"values", values}};
  } else {
    j["witness"] = nullptr;
  }
  json series = json::array();
  for (const auto& [i, v] : r.series) series.push_back(json::array({i, v}));
  j["series"] = series;
  json notes = json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = notes;
  return j;
}

json to_json(const BlockPlan& plan) {
  json certs = json::array();
  for (const auto& c : plan.certificates) {
    json cj{{"value", c.value}, {"complement", c.complement}};
    cj["exact_tail"] = c.exact_tail ? json(*c.exact_tail) : json(nullptr);
    certs.push_back(cj);
  }
  return json{{"construction", std::string(to_string(plan.construction))},
              {"boundaries", plan.boundaries},
              {"certificates", certs}};
}

BlockPlan plan_from_json(const json& j) {
  auto fail = [](const std::string& where, const std::string& what) -> void {
    throw Error(ErrorCode::SchemaError, where + ": " + what);
  };
  if (!j.is_object()) fail("/", "expected an object");
  for (const auto& item : j.items()) {
    if (item.key() != "construction" && item.key() != "boundaries" && item.key() != "certificates") {
      fail("/" + item.key(), "unknown key");
    }
  }
  BlockPlan plan;
  try {
    plan.construction = plan_construction_from_string(j.at("construction").get<std::string>());
    for (const auto& b : j.at("boundaries")) {
      if (!b.is_number_unsigned()) fail("/boundaries", "expected unsigned integers");
      plan.boundaries.push_back(b.get<Index>());
    }
    if (j.contains("certificates")) {
      for (const auto& c : j.at("certificates")) {
        BlockCertificate cert;
        cert.value = c.at("value").get<double>();
        cert.complement = c.at("complement").get<double>();
        if (c.contains("exact_tail") && !c.at("exact_tail").is_null()) cert.exact_tail = c.at("exact_tail").get<double>();
        plan.certificates.push_back(cert);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("/: ") + e.what());
  }
  validate(plan);
  return plan;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  // Unique-enough suffix; collisions only matter between concurrent writers.
  thread_local std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename onto " + path.string());
  }
}

}  // namespace bclab
