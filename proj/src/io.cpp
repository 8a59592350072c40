#include "abvr/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace abvr {

using nlohmann::json;

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Minimal RFC 4180 field splitter; quoted fields may contain commas and "".
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = true;
      was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

double parse_real(std::string_view text, std::string_view column, std::size_t line_no) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("column " + std::string(column) + ": cannot parse '" + std::string(text) +
                         "' as a number",
                     line_no);
  }
  if (!std::isfinite(v)) {
    throw ParseError("column " + std::string(column) + ": non-finite value", line_no);
  }
  return v;
}

struct Columns {
  std::optional<std::size_t> t, y, x, unit_id;
  std::size_t count = 0;
};

Columns parse_header(std::string_view header, bool require_t) {
  const auto names = split_csv(header, 1);
  Columns cols;
  cols.count = names.size();
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string name = names[i];
    if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);  // UTF-8 BOM
    std::optional<std::size_t>* slot = nullptr;
    if (name == "t") slot = &cols.t;
    else if (name == "y") slot = &cols.y;
    else if (name == "x") slot = &cols.x;
    else if (name == "unit_id") slot = &cols.unit_id;
    if (slot == nullptr) continue;
    if (!seen.insert(name).second) throw ParseError("duplicate column '" + name + "'", 1);
    *slot = i;
  }
  if (!cols.y) throw ParseError("missing required column 'y'", 1);
  if (!cols.x) throw ParseError("missing required column 'x'", 1);
  if (require_t && !cols.t) throw ParseError("missing required column 't'", 1);
  return cols;
}

template <class RowFn>
void for_each_row(std::istream& in, bool require_t, RowFn&& fn) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw ParseError("missing header row", 1);
  const Columns cols = parse_header(line, require_t);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line, line_no);
    if (fields.size() != cols.count) {
      throw ParseError("expected " + std::to_string(cols.count) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    fn(cols, fields, line_no);
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

ExperimentData read_experiment_csv(std::istream& in) {
  std::vector<double> y, x;
  std::vector<std::uint8_t> t;
  for_each_row(in, true, [&](const Columns& cols, const std::vector<std::string>& f,
                             std::size_t line_no) {
    const std::string_view tv = trim(f[*cols.t]);
    if (tv != "0" && tv != "1") {
      throw ParseError("column t: expected 0 or 1, found '" + std::string(tv) + "'", line_no);
    }
    t.push_back(tv == "1" ? 1 : 0);
    y.push_back(parse_real(f[*cols.y], "y", line_no));
    x.push_back(parse_real(f[*cols.x], "x", line_no));
  });
  return validate(std::move(y), std::move(x), std::move(t));
}

ExperimentData read_experiment_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_experiment_csv(in);
}

SourceTable read_source_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  SourceTable table;
  for_each_row(in, false, [&](const Columns& cols, const std::vector<std::string>& f,
                              std::size_t line_no) {
    table.y.push_back(parse_real(f[*cols.y], "y", line_no));
    table.x.push_back(parse_real(f[*cols.x], "x", line_no));
  });
  if (table.size() < 4) throw ParseError("source table needs at least 4 rows");
  return table;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string_view to_string(FrameworkSelection f) {
  switch (f) {
    case FrameworkSelection::Design: return "design";
    case FrameworkSelection::Model: return "model";
    case FrameworkSelection::Both: return "both";
  }
  return "both";
}

FrameworkSelection framework_selection_from_string(std::string_view s) {
  if (s == "design") return FrameworkSelection::Design;
  if (s == "model") return FrameworkSelection::Model;
  if (s == "both") return FrameworkSelection::Both;
  throw std::invalid_argument("framework must be design, model or both");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw ParseError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) {
      throw ParseError(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

template <class T>
void read_key(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("key '") + key + "': " + e.what());
    }
  }
}

}  // namespace

void AnalysisConfig::check() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
  for (const auto& m : methods) (void)estimator_from_string(m);
}

CompareOptions AnalysisConfig::compare_options() const {
  CompareOptions o;
  o.alpha = alpha;
  o.hc = hc;
  o.theta_methods.clear();
  o.designs.clear();
  for (const auto& name : methods) {
    const Estimator e = estimator_from_string(name);
    switch (e) {
      case Estimator::SR: o.designs.push_back(DesignSpec::SR); break;
      case Estimator::AR: o.designs.push_back(DesignSpec::AR); break;
      case Estimator::IR: o.designs.push_back(DesignSpec::IR); break;
      default: o.theta_methods.push_back(theta_method_from_string(to_string(e)));
    }
  }
  o.design_based = framework != FrameworkSelection::Model;
  o.model_based = framework != FrameworkSelection::Design;
  return o;
}

json AnalysisConfig::to_json() const {
  return json{{"alpha", alpha},
              {"methods", methods},
              {"framework", std::string(to_string(framework))},
              {"hc", std::string(to_string(hc))},
              {"input", input_path.generic_string()},
              {"format", output_format == OutputFormat::Csv ? "csv" : "json"}};
}

void merge_analysis_config(AnalysisConfig& cfg, const json& j) {
  reject_unknown_keys(j, {"alpha", "methods", "framework", "hc", "input", "format"},
                      "analysis config");
  try {
    read_key(j, "alpha", cfg.alpha);
    read_key(j, "methods", cfg.methods);
    if (j.contains("framework")) {
      cfg.framework = framework_selection_from_string(j.at("framework").get<std::string>());
    }
    if (j.contains("hc")) cfg.hc = hc_variant_from_string(j.at("hc").get<std::string>());
    if (j.contains("input")) cfg.input_path = j.at("input").get<std::string>();
    if (j.contains("format")) {
      cfg.output_format = output_format_from_string(j.at("format").get<std::string>());
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

namespace {

const std::set<std::string> kDgpKeys{"n", "p_t", "ate", "hte", "x_var", "noise_var", "intercept"};

void read_dgp(const json& j, DgpConfig& dgp) {
  read_key(j, "n", dgp.n);
  read_key(j, "p_t", dgp.p_t);
  read_key(j, "ate", dgp.ate);
  read_key(j, "hte", dgp.hte);
  read_key(j, "x_var", dgp.x_var);
  read_key(j, "noise_var", dgp.noise_var);
  read_key(j, "intercept", dgp.intercept);
}

json dgp_to_json(const DgpConfig& d) {
  return json{{"n", d.n},         {"p_t", d.p_t},   {"ate", d.ate},
              {"hte", d.hte},     {"x_var", d.x_var}, {"noise_var", d.noise_var},
              {"intercept", d.intercept}};
}

json configuration_to_json(const ScenarioConfiguration& c) {
  if (c.framework == SimFramework::Bootstrap) {
    return json{{"framework", "bootstrap"},
                {"m", c.bootstrap.m},
                {"p_t", c.bootstrap.p_t},
                {"ate", c.bootstrap.ate},
                {"hte", c.bootstrap.hte}};
  }
  json j = dgp_to_json(c.dgp);
  j["framework"] = std::string(to_string(c.framework));
  return j;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  reject_unknown_keys(j,
                      {"name", "seed", "reps", "alpha", "hc", "methods", "dgp", "configurations",
                       "n_grid", "source"},
                      "scenario");
  Scenario s;
  try {
    read_key(j, "name", s.name);
    read_key(j, "seed", s.options.seed);
    read_key(j, "reps", s.options.reps);
    read_key(j, "alpha", s.options.alpha);
    if (j.contains("hc")) s.options.hc = hc_variant_from_string(j.at("hc").get<std::string>());
    if (j.contains("methods")) {
      s.options.methods.clear();
      for (const auto& m : j.at("methods")) {
        s.options.methods.push_back(estimator_from_string(m.get<std::string>()));
      }
    }
    DgpConfig defaults;
    if (j.contains("dgp")) {
      reject_unknown_keys(j.at("dgp"), kDgpKeys, "dgp");
      read_dgp(j.at("dgp"), defaults);
    }
    if (!j.contains("configurations") || !j.at("configurations").is_array() ||
        j.at("configurations").empty()) {
      throw ParseError("scenario needs a non-empty 'configurations' array");
    }
    std::set<std::string> config_keys = kDgpKeys;
    config_keys.insert({"framework", "m"});
    for (const auto& cj : j.at("configurations")) {
      reject_unknown_keys(cj, config_keys, "configuration");
      ScenarioConfiguration c;
      c.dgp = defaults;
      std::string framework = "finite";
      read_key(cj, "framework", framework);
      c.framework = sim_framework_from_string(framework);
      read_dgp(cj, c.dgp);
      if (c.framework == SimFramework::Bootstrap) {
        c.bootstrap.m = c.dgp.n;
        read_key(cj, "m", c.bootstrap.m);
        c.bootstrap.p_t = c.dgp.p_t;
        c.bootstrap.ate = c.dgp.ate;
        c.bootstrap.hte = c.dgp.hte;
      } else {
        if (cj.contains("m")) throw ParseError("'m' is only valid for bootstrap configurations");
        check_config(c.dgp);
      }
      s.configurations.push_back(c);
    }
    read_key(j, "n_grid", s.n_grid);
    if (j.contains("source")) {
      const auto& sj = j.at("source");
      reject_unknown_keys(sj, {"size", "seed", "csv"}, "source");
      read_key(sj, "size", s.source.size);
      read_key(sj, "seed", s.source.seed);
      if (sj.contains("csv")) s.source.csv = sj.at("csv").get<std::string>();
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const Error& e) {
    throw ParseError(e.what());
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (s.options.reps < 1) throw ParseError("reps must be at least 1");
  if (!(s.options.alpha > 0.0 && s.options.alpha < 1.0)) throw ParseError("alpha must lie in (0, 1)");
  if (s.options.methods.empty()) throw ParseError("methods must not be empty");
  return s;
}

Scenario read_scenario(const std::filesystem::path& path) {
  auto in = open_input(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return parse_scenario(j);
}

json Scenario::to_json() const {
  json configs = json::array();
  for (const auto& c : configurations) configs.push_back(configuration_to_json(c));
  json methods = json::array();
  for (const auto m : options.methods) methods.push_back(std::string(abvr::to_string(m)));
  json j{{"name", name},
         {"seed", options.seed},
         {"reps", options.reps},
         {"alpha", options.alpha},
         {"hc", std::string(abvr::to_string(options.hc))},
         {"methods", methods},
         {"configurations", configs}};
  if (!n_grid.empty()) j["n_grid"] = n_grid;
  const bool uses_source = std::any_of(configurations.begin(), configurations.end(), [](auto& c) {
    return c.framework == SimFramework::Bootstrap;
  });
  if (uses_source) {
    j["source"] = source.csv.empty()
                      ? json{{"size", source.size}, {"seed", source.seed}}
                      : json{{"csv", source.csv.generic_string()}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Output

std::string tool_version() {
#ifdef ABVR_VERSION
  return std::string("abvr ") + ABVR_VERSION;
#else
  return "abvr";
#endif
}

std::string manifest_timestamp(bool wall_clock) {
  std::time_t when = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    when = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else if (wall_clock) {
    when = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  } else {
    return "unset";
  }
  std::tm tm{};
  gmtime_r(&when, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json RunManifest::to_json() const {
  return json{{"seed", seed},
              {"tool_version", tool_version},
              {"timestamp", timestamp},
              {"config", config_echo}};
}

namespace {

void write_manifest_comment(std::ostream& out, const RunManifest& m) {
  out << "# tool_version: " << m.tool_version << '\n'
      << "# seed: " << m.seed << '\n'
      << "# timestamp: " << m.timestamp << '\n'
      << "# config: " << m.config_echo.dump() << '\n';
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_analysis_report(std::ostream& out, const RunManifest& manifest,
                           const std::vector<ComparisonRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json jr = json::array();
    for (const auto& r : rows) {
      json row{{"estimator", r.estimator}, {"variance", r.variance}};
      if (r.result) {
        const auto& t = *r.result;
        row["estimate"] = real_or_null(t.estimate);
        row["se"] = real_or_null(t.se);
        row["z"] = real_or_null(t.z);
        row["p_value"] = real_or_null(t.p_two_sided);
        row["ci_low"] = real_or_null(t.ci_low);
        row["ci_high"] = real_or_null(t.ci_high);
        row["alpha"] = t.alpha;
      }
      if (r.theta) {
        row["theta_t"] = r.theta->theta_t;
        row["theta_c"] = r.theta->theta_c;
      }
      if (!r.error.empty()) row["error"] = r.error;
      jr.push_back(row);
    }
    out << json{{"manifest", manifest.to_json()}, {"rows", jr}}.dump(2) << '\n';
    return;
  }
  write_manifest_comment(out, manifest);
  out << "estimator,variance,estimate,se,z,p_value,ci_low,ci_high,alpha,theta_t,theta_c,error\n";
  for (const auto& r : rows) {
    out << r.estimator << ',' << r.variance << ',';
    if (r.result) {
      const auto& t = *r.result;
      out << format_real(t.estimate) << ',' << format_real(t.se) << ',' << format_real(t.z) << ','
          << format_real(t.p_two_sided) << ',' << format_real(t.ci_low) << ','
          << format_real(t.ci_high) << ',' << format_real(t.alpha) << ',';
    } else {
      out << ",,,,,,,";
    }
    if (r.theta) {
      out << format_real(r.theta->theta_t) << ',' << format_real(r.theta->theta_c) << ',';
    } else {
      out << ",,";
    }
    out << csv_escape(r.error) << '\n';
  }
}

namespace {

struct ConfigColumns {
  std::string framework;
  std::size_t n;
  double p_t, ate, hte, x_var;
};

ConfigColumns config_columns(const ScenarioConfiguration& c) {
  if (c.framework == SimFramework::Bootstrap) {
    return {"bootstrap", c.bootstrap.m, c.bootstrap.p_t, c.bootstrap.ate, c.bootstrap.hte,
            std::nan("")};
  }
  return {std::string(to_string(c.framework)), c.dgp.n, c.dgp.p_t, c.dgp.ate, c.dgp.hte,
          c.dgp.x_var};
}

}  // namespace

void write_simulation_results(std::ostream& out, const RunManifest& manifest,
                              const std::vector<SimulationRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json jr = json::array();
    for (const auto& r : rows) {
      const auto cc = config_columns(r.configuration);
      const auto& s = r.result;
      jr.push_back(json{{"scenario", r.scenario},
                        {"config_index", r.config_index},
                        {"framework", cc.framework},
                        {"n", cc.n},
                        {"p_t", cc.p_t},
                        {"ate", cc.ate},
                        {"hte", cc.hte},
                        {"x_var", real_or_null(cc.x_var)},
                        {"method", std::string(to_string(s.method))},
                        {"variance", std::string(to_string(s.framework))},
                        {"reps", s.reps},
                        {"failed", s.failed},
                        {"seed", s.seed},
                        {"rejection_rate", s.rejection_rate},
                        {"coverage", s.coverage},
                        {"mean_estimate", s.mean_estimate},
                        {"empirical_variance", s.empirical_variance},
                        {"mean_var_estimate", s.mean_var_estimate},
                        {"rejection_rate_design", s.rejection_rate_design},
                        {"rejection_rate_model", s.rejection_rate_model},
                        {"coverage_design", s.coverage_design},
                        {"coverage_model", s.coverage_model},
                        {"mean_var_design", s.mean_var_design},
                        {"mean_var_model", s.mean_var_model}});
    }
    out << json{{"manifest", manifest.to_json()}, {"results", jr}}.dump(2) << '\n';
    return;
  }
  write_manifest_comment(out, manifest);
  out << "scenario,config_index,framework,n,p_t,ate,hte,x_var,method,variance,reps,failed,seed,"
         "rejection_rate,coverage,mean_estimate,empirical_variance,mean_var_estimate,"
         "rejection_rate_design,rejection_rate_model,coverage_design,coverage_model,"
         "mean_var_design,mean_var_model\n";
  for (const auto& r : rows) {
    const auto cc = config_columns(r.configuration);
    const auto& s = r.result;
    out << csv_escape(r.scenario) << ',' << r.config_index << ',' << cc.framework << ',' << cc.n
        << ',' << format_real(cc.p_t) << ',' << format_real(cc.ate) << ',' << format_real(cc.hte)
        << ',' << (std::isfinite(cc.x_var) ? format_real(cc.x_var) : "") << ','
        << to_string(s.method) << ',' << to_string(s.framework) << ',' << s.reps << ','
        << s.failed << ',' << s.seed << ',' << format_real(s.rejection_rate) << ','
        << format_real(s.coverage) << ',' << format_real(s.mean_estimate) << ','
        << format_real(s.empirical_variance) << ',' << format_real(s.mean_var_estimate) << ','
        << format_real(s.rejection_rate_design) << ',' << format_real(s.rejection_rate_model)
        << ',' << format_real(s.coverage_design) << ',' << format_real(s.coverage_model) << ','
        << format_real(s.mean_var_design) << ',' << format_real(s.mean_var_model) << '\n';
  }
}

void write_convergence(std::ostream& out, const RunManifest& manifest,
                       const std::vector<ConvergenceOutputRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json jr = json::array();
    for (const auto& r : rows) {
      const auto cc = config_columns(r.configuration);
      jr.push_back(json{{"config_index", r.config_index},
                        {"framework", cc.framework},
                        {"p_t", cc.p_t},
                        {"ate", cc.ate},
                        {"hte", cc.hte},
                        {"series", r.row.series},
                        {"n", r.row.n},
                        {"method", std::string(to_string(r.row.method))},
                        {"quantile", r.row.quantile},
                        {"value", r.row.value}});
    }
    out << json{{"manifest", manifest.to_json()}, {"rows", jr}}.dump(2) << '\n';
    return;
  }
  write_manifest_comment(out, manifest);
  out << "config_index,framework,p_t,ate,hte,series,n,method,quantile,value\n";
  for (const auto& r : rows) {
    const auto cc = config_columns(r.configuration);
    out << r.config_index << ',' << cc.framework << ',' << format_real(cc.p_t) << ','
        << format_real(cc.ate) << ',' << format_real(cc.hte) << ',' << r.row.series << ','
        << r.row.n << ',' << to_string(r.row.method) << ',' << format_real(r.row.quantile) << ','
        << format_real(r.row.value) << '\n';
  }
}

std::vector<ReportRecord> read_analysis_report_csv(std::istream& in) {
  std::vector<ReportRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv(line, line_no);
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i) index[fields[i]] = i;
      header_seen = true;
      continue;
    }
    auto field = [&](const char* name) -> const std::string& {
      const auto it = index.find(name);
      if (it == index.end() || it->second >= fields.size()) {
        throw ParseError(std::string("report lacks column ") + name, line_no);
      }
      return fields[it->second];
    };
    ReportRecord r;
    r.estimator = field("estimator");
    r.variance = field("variance");
    if (field("estimate").empty()) continue;  // failed row
    auto num = [&](const char* name) {
      const std::string& s = field(name);
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc{}) throw ParseError(std::string("bad number in ") + name, line_no);
      return v;
    };
    r.estimate = num("estimate");
    r.se = num("se");
    r.z = num("z");
    r.p_value = num("p_value");
    r.ci_low = num("ci_low");
    r.ci_high = num("ci_high");
    out.push_back(r);
  }
  return out;
}

}  // namespace abvr
