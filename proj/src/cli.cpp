#include "liespec/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "liespec/errors.hpp"
#include "liespec/isolation.hpp"
#include "liespec/jsonio.hpp"

namespace liespec {

namespace {

// ---------------------------------------------------------------------------
// config serialization

void write_matrix(JsonWriter& w, const std::vector<std::vector<double>>& m) {
  w.begin_array();
  for (const auto& row : m) {
    w.begin_array();
    for (double v : row) w.value(v);
    w.end_array();
  }
  w.end_array();
}

void write_config(JsonWriter& w, const RunConfig& c) {
  w.begin_object();
  w.key("command").value(c.command);
  w.key("group").value(c.group);
  if (c.group_definition.empty())
    w.key("group_definition").null();
  else
    w.key("group_definition").value(c.group_definition);
  w.key("metric_source").value(c.metric_source);
  if (c.metric_gram.empty()) {
    w.key("metric_gram").null();
  } else {
    w.key("metric_gram");
    write_matrix(w, c.metric_gram);
  }
  w.key("scales").begin_array();
  for (double s : c.scales) w.value(s);
  w.end_array();
  if (c.torus_gram.empty()) {
    w.key("torus_gram").null();
  } else {
    w.key("torus_gram");
    write_matrix(w, c.torus_gram);
  }
  w.key("cutoff").value(c.cutoff);
  w.key("level").value(c.level);
  w.key("match_tol").value(c.match_tol);
  w.key("cluster_tol").value(c.cluster_tol);
  w.key("seed").value(c.seed);
  w.key("radius").value(c.radius);
  w.key("samples").value(c.samples);
  w.key("exclude").value(c.exclude);
  w.key("budget").value(c.budget);
  w.key("starts").value(c.starts);
  w.key("start_spread").value(c.start_spread);
  w.key("assert_constant").value(c.assert_constant);
  w.key("irrep_count").value(c.irrep_count);
  w.key("top").value(c.top);
  w.key("output").value(c.output);
  w.key("out").value(c.out);
  w.key("lane").value(c.lane);
  w.end_object();
}

std::vector<std::vector<double>> read_matrix(const nlohmann::json& j) {
  std::vector<std::vector<double>> m;
  for (const auto& row : j) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get<double>());
    m.push_back(std::move(r));
  }
  return m;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.group = j.at("group").get<std::string>();
  if (j.contains("group_definition") && !j.at("group_definition").is_null())
    c.group_definition = j.at("group_definition").get<std::string>();
  c.metric_source = j.at("metric_source").get<std::string>();
  if (j.contains("metric_gram") && !j.at("metric_gram").is_null())
    c.metric_gram = read_matrix(j.at("metric_gram"));
  for (const auto& v : j.at("scales")) c.scales.push_back(v.get<double>());
  if (j.contains("torus_gram") && !j.at("torus_gram").is_null())
    c.torus_gram = read_matrix(j.at("torus_gram"));
  c.cutoff = j.at("cutoff").get<double>();
  c.level = j.at("level").get<int>();
  c.match_tol = j.at("match_tol").get<double>();
  c.cluster_tol = j.at("cluster_tol").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.radius = j.at("radius").get<double>();
  c.samples = j.at("samples").get<int>();
  c.exclude = j.at("exclude").get<double>();
  c.budget = j.at("budget").get<long long>();
  c.starts = j.at("starts").get<int>();
  c.start_spread = j.at("start_spread").get<double>();
  c.assert_constant = j.at("assert_constant").get<bool>();
  c.irrep_count = j.at("irrep_count").get<int>();
  c.top = j.at("top").get<int>();
  c.output = j.at("output").get<std::string>();
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  c.lane = j.at("lane").get<std::string>();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(path + ": " + e.what());
  }
  try {
    if (doc.contains("config")) return config_from_json(doc.at("config"));
    return config_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(path + ": malformed config: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// model construction

bool is_preset(const std::string& name) {
  for (const auto& p : GroupModel::preset_names())
    if (p == name) return true;
  return false;
}

GroupModel build_group(RunConfig& config) {
  if (!config.group_definition.empty())
    return GroupModel::from_json_text(config.group_definition, config.group);
  if (is_preset(config.group)) return GroupModel::preset(config.group);
  // treat as a definition file path and embed the raw text for replay
  std::ifstream in(config.group);
  if (!in)
    throw input_error("group '" + config.group +
                      "' is neither a preset nor a readable definition file");
  std::ostringstream ss;
  ss << in.rdbuf();
  config.group_definition = ss.str();
  return GroupModel::from_json_text(config.group_definition, config.group);
}

Mat to_mat(const std::vector<std::vector<double>>& rows, const char* what) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw input_error(std::string(what) + ": empty matrix");
  Mat m(n, static_cast<int>(rows[0].size()));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols())
      throw input_error(std::string(what) + ": ragged matrix rows");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Metric build_reference_metric(const GroupModel& group, const RunConfig& config) {
  std::vector<double> scales = config.scales;
  if (scales.empty()) scales.assign(group.algebra.simple_ideals().size(), 1.0);
  Mat torus;
  if (!config.torus_gram.empty()) torus = to_mat(config.torus_gram, "torus Gram");
  return bi_invariant_metric(group.algebra, scales, torus);
}

Metric build_metric(const GroupModel& group, RunConfig& config, const Metric& g0) {
  const std::string& src = config.metric_source;
  if (src == "bi-invariant") return g0;
  if (!config.metric_gram.empty())
    return make_metric(to_mat(config.metric_gram, "metric Gram"));

  nlohmann::json doc;
  if (src.rfind("file:", 0) == 0) {
    const std::string path = src.substr(5);
    std::ifstream in(path);
    if (!in) throw input_error("cannot open metric file '" + path + "'");
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw input_error(path + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("gram")) doc = doc.at("gram");
  } else if (src.rfind("inline:", 0) == 0) {
    try {
      doc = nlohmann::json::parse(src.substr(7));
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("inline metric: ") + e.what());
    }
  } else {
    throw input_error("metric source must be 'bi-invariant', 'file:PATH' or 'inline:JSON'");
  }

  try {
    config.metric_gram = read_matrix(doc);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("metric Gram: ") + e.what());
  }
  if (static_cast<int>(config.metric_gram.size()) != group.algebra.dim())
    throw input_error("metric Gram dimension does not match the group");
  return make_metric(to_mat(config.metric_gram, "metric Gram"));
}

// ---------------------------------------------------------------------------
// report assembly

void write_label(JsonWriter& w, const IrrepLabel& label) {
  w.begin_object();
  w.key("spins").begin_array();
  for (double j : label.spins) w.value(j);
  w.end_array();
  w.key("char").begin_array();
  for (long long mu : label.chars) w.value(mu);
  w.end_array();
  w.end_object();
}

void write_mat(JsonWriter& w, const Mat& m) {
  w.begin_array();
  for (int i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (int j = 0; j < m.cols(); ++j) w.value(m(i, j));
    w.end_array();
  }
  w.end_array();
}

void write_spectrum(JsonWriter& w, const Spectrum& spec) {
  w.begin_object();
  w.key("cutoff").value(spec.cutoff);
  w.key("certificate").begin_object();
  w.key("alpha").value(spec.certificate.alpha);
  w.key("beta").value(spec.certificate.beta);
  w.key("enum_cutoff").value(spec.certificate.enum_cutoff);
  w.end_object();
  w.key("blocks").begin_array();
  for (const auto& block : spec.blocks) {
    w.begin_object();
    w.key("label");
    write_label(w, block.label);
    w.key("weight").value(block.weight);
    w.key("eigenvalues").begin_array();
    for (double v : block.eigenvalues) w.value(v);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_eigenset(JsonWriter& w, const EigenvalueSet& set) {
  w.begin_object();
  w.key("values").begin_array();
  for (double v : set.values) w.value(v);
  w.end_array();
  w.key("multiplicities").begin_array();
  for (long long m : set.multiplicities) w.value(m);
  w.end_array();
  w.key("cluster_tol").value(set.cluster_tol);
  w.end_object();
}

struct ReportBuilder {
  JsonWriter w;

  explicit ReportBuilder(const RunConfig& config) {
    w.begin_object();
    w.key("tool").value("liespec");
    w.key("command").value(config.command);
    w.key("generated_at").value(iso8601_utc_now());
    w.key("config");
    write_config(w, config);
    w.key("result");
  }

  std::string finish() {
    w.end_object();
    std::string s = w.take();
    s += '\n';
    return s;
  }
};

std::string csv_escape_config(const RunConfig& config) {
  JsonWriter w;
  write_config(w, config);
  return "# config " + w.take() + "\n";
}

// ---------------------------------------------------------------------------
// commands

struct CommandOutput {
  int exit_code = 0;
  std::string report;
};

CommandOutput cmd_presets(const RunConfig& config, std::ostream& out) {
  ReportBuilder rb(config);
  rb.w.begin_object().key("presets").begin_array();
  out << "available group presets:\n";
  for (const auto& name : GroupModel::preset_names()) {
    const GroupModel g = GroupModel::preset(name);
    out << "  " << name << "  dim " << g.algebra.dim() << "  rule "
        << selection_rule_name(g.rule) << "\n";
    rb.w.begin_object();
    rb.w.key("name").value(name);
    rb.w.key("dim").value(g.algebra.dim());
    rb.w.key("semisimple_dim").value(g.algebra.ss_dim());
    rb.w.key("center_dim").value(g.algebra.center_dim());
    rb.w.key("rule").value(selection_rule_name(g.rule));
    rb.w.end_object();
  }
  rb.w.end_array().end_object();
  return {0, rb.finish()};
}

CommandOutput cmd_spectrum(RunConfig& config, std::ostream& out, bool distinct_only) {
  GroupModel group = build_group(config);
  const Metric g0 = build_reference_metric(group, config);
  const Metric g = build_metric(group, config, g0);

  const Spectrum spec = spectrum(group, g, g0, config.cutoff);
  const EigenvalueSet set = eigenvalue_set(spec, config.cluster_tol);

  out << "group " << config.group << ", cutoff " << format_double(config.cutoff)
      << ", certificate alpha " << format_double(spec.certificate.alpha) << " beta "
      << format_double(spec.certificate.beta) << " enum_cutoff "
      << format_double(spec.certificate.enum_cutoff) << "\n";
  out << "distinct eigenvalues (first " << std::min<std::size_t>(config.top, set.values.size())
      << " of " << set.values.size() << "):\n";
  for (std::size_t i = 0; i < set.values.size() && i < static_cast<std::size_t>(config.top); ++i)
    out << "  " << format_double(set.values[i]) << "  x" << set.multiplicities[i] << "\n";

  if (config.output == "csv") {
    std::string csv = csv_escape_config(config);
    if (distinct_only) {
      csv += "value,multiplicity\n";
      for (std::size_t i = 0; i < set.values.size(); ++i)
        csv += format_double(set.values[i]) + "," + std::to_string(set.multiplicities[i]) + "\n";
    } else {
      csv += "label,value,multiplicity\n";
      for (const auto& block : spec.blocks)
        for (double v : block.eigenvalues)
          csv += "\"" + block.label.str() + "\"," + format_double(v) + "," +
                 std::to_string(block.weight) + "\n";
    }
    return {0, csv};
  }

  ReportBuilder rb(config);
  if (distinct_only) {
    rb.w.begin_object();
    rb.w.key("cutoff").value(spec.cutoff);
    rb.w.key("certificate").begin_object();
    rb.w.key("alpha").value(spec.certificate.alpha);
    rb.w.key("beta").value(spec.certificate.beta);
    rb.w.key("enum_cutoff").value(spec.certificate.enum_cutoff);
    rb.w.end_object();
    rb.w.key("eigenvalue_set");
    write_eigenset(rb.w, set);
    rb.w.key("contributors").begin_array();
    for (const auto& level : attribute_levels(spec, config.cluster_tol)) {
      rb.w.begin_array();
      for (const auto& label : level.labels) write_label(rb.w, label);
      rb.w.end_array();
    }
    rb.w.end_array();
    rb.w.end_object();
  } else {
    rb.w.begin_object();
    rb.w.key("spectrum");
    write_spectrum(rb.w, spec);
    rb.w.key("eigenvalue_set");
    write_eigenset(rb.w, set);
    rb.w.end_object();
  }
  return {0, rb.finish()};
}

CommandOutput cmd_trace_check(RunConfig& config, std::ostream& out) {
  GroupModel group = build_group(config);
  if (!group.is_simple() && config.assert_constant)
    throw hypothesis_error(
        "trace-check --assert-constant requires a simple group: the constant trace ratio "
        "is only guaranteed when the group has a single simple ideal and no center");

  const Metric g0 = build_reference_metric(group, config);
  const Metric g = build_metric(group, config, g0);
  const std::vector<Irrep> irreps = first_nontrivial_irreps(group, g0, config.irrep_count);
  const TraceReport report = trace_ratio(group, g, g0, irreps);

  out << "trace ratios over " << report.entries.size() << " irreps, predicted C "
      << format_double(report.predicted_c) << "\n";
  for (const auto& e : report.entries)
    out << "  " << e.label.str() << "  ratio " << format_double(e.ratio) << "\n";
  out << "spread " << format_double(report.ratio_spread) << ", max |ratio - C| "
      << format_double(report.max_ratio_deviation) << ", volume ratio "
      << format_double(report.volume_ratio) << "\n";

  int exit_code = 0;
  if (group.is_simple() &&
      (report.ratio_spread >= 1e-9 || report.max_ratio_deviation >= 1e-9))
    exit_code = 4;

  if (config.output == "csv") {
    std::string csv = csv_escape_config(config);
    csv += "label,trace_g,trace_g0,ratio\n";
    for (const auto& e : report.entries)
      csv += "\"" + e.label.str() + "\"," + format_double(e.trace_g) + "," +
             format_double(e.trace_g0) + "," + format_double(e.ratio) + "\n";
    return {exit_code, csv};
  }

  ReportBuilder rb(config);
  rb.w.begin_object();
  rb.w.key("simple").value(group.is_simple());
  rb.w.key("predicted_c").value(report.predicted_c);
  rb.w.key("ratio_spread").value(report.ratio_spread);
  rb.w.key("max_ratio_deviation").value(report.max_ratio_deviation);
  rb.w.key("volume_ratio").value(report.volume_ratio);
  rb.w.key("distance").value(report.distance);
  rb.w.key("entries").begin_array();
  for (const auto& e : report.entries) {
    rb.w.begin_object();
    rb.w.key("label");
    write_label(rb.w, e.label);
    rb.w.key("trace_g").value(e.trace_g);
    rb.w.key("trace_g0").value(e.trace_g0);
    rb.w.key("ratio").value(e.ratio);
    rb.w.end_object();
  }
  rb.w.end_array();
  rb.w.key("skipped").begin_array();
  for (const auto& label : report.skipped) write_label(rb.w, label);
  rb.w.end_array();
  rb.w.end_object();
  return {exit_code, rb.finish()};
}

CommandOutput cmd_scan(RunConfig& config, std::ostream& out) {
  GroupModel group = build_group(config);
  const Metric g0 = build_reference_metric(group, config);

  ScanConfig sc;
  sc.radius = config.radius;
  sc.samples = config.samples;
  sc.level = config.level;
  sc.cutoff = config.cutoff;
  sc.seed = config.seed;
  sc.match_tol = config.match_tol;
  sc.cluster_tol = config.cluster_tol;
  const ScanReport report = isolation_scan(group, g0, sc);

  // which representation blocks the level-N comparison actually certifies
  std::vector<LevelAttribution> levels =
      attribute_levels(spectrum(group, g0, g0, sc.cutoff), sc.cluster_tol);
  if (static_cast<int>(levels.size()) > sc.level) levels.resize(sc.level);

  out << "scan: " << report.samples.size() << " samples, radius "
      << format_double(sc.radius) << ", level " << sc.level << ", seed " << sc.seed << "\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out << "  level " << (i + 1) << " = " << format_double(levels[i].value) << " from";
    for (const auto& label : levels[i].labels) out << " " << label.str();
    out << "\n";
  }
  for (const auto& th : report.thresholds) {
    out << "  distance >= " << format_double(th.delta) << ": " << th.count << " samples";
    if (th.count > 0)
      out << ", min discrepancy " << format_double(th.min_discrepancy) << " (sample "
          << th.argmin << ")";
    out << "\n";
  }

  if (config.output == "csv") {
    std::string csv = csv_escape_config(config);
    csv += "sample,distance,volume_ratio,discrepancy\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
      const auto& s = report.samples[i];
      csv += std::to_string(i) + "," + format_double(s.distance) + "," +
             format_double(s.volume_ratio) + "," + format_double(s.discrepancy) + "\n";
    }
    return {0, csv};
  }

  ReportBuilder rb(config);
  rb.w.begin_object();
  rb.w.key("level_attribution").begin_array();
  for (const auto& level : levels) {
    rb.w.begin_object();
    rb.w.key("value").value(level.value);
    rb.w.key("labels").begin_array();
    for (const auto& label : level.labels) write_label(rb.w, label);
    rb.w.end_array();
    rb.w.end_object();
  }
  rb.w.end_array();
  rb.w.key("samples").begin_array();
  for (const auto& s : report.samples) {
    rb.w.begin_object();
    rb.w.key("distance").value(s.distance);
    rb.w.key("volume_ratio").value(s.volume_ratio);
    rb.w.key("discrepancy").value(s.discrepancy);
    rb.w.end_object();
  }
  rb.w.end_array();
  rb.w.key("thresholds").begin_array();
  for (const auto& th : report.thresholds) {
    rb.w.begin_object();
    rb.w.key("delta").value(th.delta);
    rb.w.key("count").value(th.count);
    rb.w.key("min_discrepancy").value(th.min_discrepancy);
    rb.w.key("argmin").value(th.argmin);
    rb.w.end_object();
  }
  rb.w.end_array();
  rb.w.end_object();
  return {0, rb.finish()};
}

CommandOutput cmd_search(RunConfig& config, std::ostream& out) {
  GroupModel group = build_group(config);
  const Metric g0 = build_reference_metric(group, config);

  SearchConfig sc;
  sc.level = config.level;
  sc.cutoff = config.cutoff;
  sc.budget = config.budget;
  sc.seed = config.seed;
  sc.exclusion_radius = config.exclude;
  sc.starts = config.starts;
  sc.start_spread = config.start_spread;
  sc.match_tol = config.match_tol;
  sc.cluster_tol = config.cluster_tol;
  const SearchResult result = isospectral_search(group, g0, sc);

  out << "search: " << result.evaluations << " evaluations, "
      << (result.converged ? "converged" : "budget exhausted") << "\n";
  if (result.found) {
    out << "  best discrepancy " << format_double(result.best_discrepancy)
        << " at distance " << format_double(result.best_distance) << ", trace ratio C "
        << format_double(result.trace_ratio_c) << "\n";
  } else {
    out << "  no feasible point found\n";
  }

  if (config.output == "csv") {
    std::string csv = csv_escape_config(config);
    csv += "evaluation,best_objective\n";
    for (const auto& [eval, obj] : result.improvements)
      csv += std::to_string(eval) + "," + format_double(obj) + "\n";
    return {0, csv};
  }

  ReportBuilder rb(config);
  rb.w.begin_object();
  rb.w.key("found").value(result.found);
  rb.w.key("converged").value(result.converged);
  rb.w.key("evaluations").value(result.evaluations);
  if (result.found) {
    rb.w.key("best_objective").value(result.best_objective);
    rb.w.key("best_discrepancy").value(result.best_discrepancy);
    rb.w.key("best_distance").value(result.best_distance);
    rb.w.key("trace_ratio_c").value(result.trace_ratio_c);
    rb.w.key("best_gram");
    write_mat(rb.w, result.best_gram);
  }
  rb.w.key("improvements").begin_array();
  for (const auto& [eval, obj] : result.improvements) {
    rb.w.begin_array();
    rb.w.value(eval);
    rb.w.value(obj);
    rb.w.end_array();
  }
  rb.w.end_array();
  rb.w.end_object();
  return {0, rb.finish()};
}

CommandOutput cmd_rigidity(RunConfig& config, std::ostream& out) {
  GroupModel group = build_group(config);
  const Metric g0 = build_reference_metric(group, config);
  const Metric g = build_metric(group, config, g0);

  RigidityOptions opts;
  opts.cutoff = config.cutoff;
  opts.match_tol = config.match_tol;
  opts.cluster_tol = config.cluster_tol;
  const RigidityResult result = three_eigenvalue_test(group, g0, g, opts);

  out << "rigidity verdict: " << (result.verdict ? "true" : "false") << "\n";
  out << "  alphas " << format_double(result.alphas[0]) << ", "
      << format_double(result.alphas[1]) << ", " << format_double(result.alphas[2]) << "\n";
  out << "  volume ratio " << format_double(result.volume_ratio)
      << (result.volume_ok ? " (ok)" : " (violated)") << ", alpha2 trace ratio "
      << format_double(result.alpha2_trace_ratio) << "\n";

  ReportBuilder rb(config);
  rb.w.begin_object();
  rb.w.key("verdict").value(result.verdict);
  rb.w.key("volume_ok").value(result.volume_ok);
  rb.w.key("volume_ratio").value(result.volume_ratio);
  rb.w.key("triple_found").value(result.triple_found);
  rb.w.key("match_index").value(result.match_index);
  rb.w.key("alphas").begin_array();
  for (double a : result.alphas) rb.w.value(a);
  rb.w.end_array();
  rb.w.key("alpha2_block_trace").value(result.alpha2_block_trace);
  rb.w.key("alpha2_block_expected").value(result.alpha2_block_expected);
  rb.w.key("alpha2_trace_ratio").value(result.alpha2_trace_ratio);
  rb.w.key("distance").value(result.distance);
  rb.w.end_object();
  return {0, rb.finish()};
}

}  // namespace

RunOutput run_for_report(const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err) {
  CLI::App app{"Laplace spectra of left-invariant metrics on compact Lie groups"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path;
  std::string out_path;
  std::string lane_flag;
  bool have_config_file = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--group", config.group, "group preset or definition file");
    cmd->add_option("--metric", config.metric_source,
                    "metric source: bi-invariant, file:PATH or inline:JSON");
    cmd->add_option("--scale", config.scales, "bi-invariant scale per simple ideal");
    cmd->add_option("--torus-gram", [&config](const std::vector<std::string>& vals) {
      try {
        config.torus_gram = read_matrix(nlohmann::json::parse(vals.back()));
      } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError(std::string("--torus-gram: ") + e.what());
      }
      return true;
    }, "torus Gram matrix as JSON rows");
    cmd->add_option("--cutoff", config.cutoff, "eigenvalue cutoff (certified)");
    cmd->add_option("--level", config.level, "eigenvalue-set comparison level N");
    cmd->add_option("--match-tol", config.match_tol, "eigenvalue match tolerance");
    cmd->add_option("--cluster-tol", config.cluster_tol, "distinct-value clustering tolerance");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--top", config.top, "distinct values printed");
    cmd->add_option("--output", config.output, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "write the report to this path");
    cmd->add_option("--lane", lane_flag, "kernel lane: scalar, avx2 or neon");
    cmd->add_option("--config", config_path, "re-run from a report or config file");
    return cmd;
  };

  CLI::App* spectrum_cmd = add_common(app.add_subcommand("spectrum", "certified spectrum"));
  CLI::App* eigenset_cmd = add_common(app.add_subcommand("eigenset", "distinct eigenvalues"));
  CLI::App* trace_cmd = add_common(app.add_subcommand("trace-check", "trace-ratio constancy"));
  trace_cmd->add_flag("--assert-constant", config.assert_constant,
                      "fail unless the constant-ratio hypothesis applies");
  trace_cmd->add_option("--irreps", config.irrep_count, "number of nontrivial irreps probed");
  CLI::App* scan_cmd = add_common(app.add_subcommand("scan", "isolation scan around g0"));
  scan_cmd->add_option("--radius", config.radius, "perturbation radius");
  scan_cmd->add_option("--samples", config.samples, "sample count");
  CLI::App* search_cmd = add_common(app.add_subcommand("search", "isospectral competitor search"));
  search_cmd->add_option("--exclude", config.exclude, "exclusion radius around the isometry class");
  search_cmd->add_option("--budget", config.budget, "objective evaluation budget");
  search_cmd->add_option("--starts", config.starts, "multi-start count");
  search_cmd->add_option("--spread", config.start_spread, "start point spread");
  CLI::App* rigidity_cmd = add_common(app.add_subcommand("rigidity", "three-eigenvalue test"));
  CLI::App* presets_cmd = app.add_subcommand("presets", "list group presets");
  presets_cmd->add_option("--output", config.output, "report format: json or csv");
  presets_cmd->add_option("--out", out_path, "write the report to this path");

  std::vector<const char*> argv;
  argv.push_back("liespec");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return {0, ""};
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return {2, ""};
  }

  std::string command;
  if (spectrum_cmd->parsed()) command = "spectrum";
  else if (eigenset_cmd->parsed()) command = "eigenset";
  else if (trace_cmd->parsed()) command = "trace-check";
  else if (scan_cmd->parsed()) command = "scan";
  else if (search_cmd->parsed()) command = "search";
  else if (rigidity_cmd->parsed()) command = "rigidity";
  else command = "presets";

  try {
    if (!config_path.empty()) {
      have_config_file = true;
      RunConfig loaded = load_config_file(config_path);
      if (loaded.command != command)
        throw input_error("config file was recorded for command '" + loaded.command +
                          "', not '" + command + "'");
      config = std::move(loaded);
    }
    config.command = command;
    if (!have_config_file) config.out = out_path;

    // Pin the kernel lane so a replayed run uses the same arithmetic.
    if (!lane_flag.empty() && !have_config_file) config.lane = lane_flag;
    if (config.lane.empty()) config.lane = kernels::lane_name(kernels::active_lane());
    try {
      kernels::set_lane(kernels::lane_from_name(config.lane));
    } catch (const input_error&) {
      throw resource_error("kernel lane '" + config.lane + "' is unavailable on this host");
    }

    CommandOutput result;
    if (command == "presets") result = cmd_presets(config, out);
    else if (command == "spectrum") result = cmd_spectrum(config, out, false);
    else if (command == "eigenset") result = cmd_spectrum(config, out, true);
    else if (command == "trace-check") result = cmd_trace_check(config, out);
    else if (command == "scan") result = cmd_scan(config, out);
    else if (command == "search") result = cmd_search(config, out);
    else result = cmd_rigidity(config, out);

    // --out on the command line wins over a replayed config's destination.
    const std::string destination = !out_path.empty() ? out_path : config.out;
    if (!destination.empty()) {
      std::ofstream file(destination, std::ios::binary);
      if (!file) throw input_error("cannot write report to '" + destination + "'");
      file << result.report;
    }
    return {result.exit_code, result.report};
  } catch (const input_error& e) {
    err << "input error: " << e.what() << "\n";
    return {2, ""};
  } catch (const resource_error& e) {
    err << "resource error: " << e.what() << "\n";
    return {3, ""};
  } catch (const hypothesis_error& e) {
    err << "hypothesis violation: " << e.what() << "\n";
    return {4, ""};
  } catch (const numeric_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return {3, ""};
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_for_report(args, out, err).exit_code;
}

}  // namespace liespec
