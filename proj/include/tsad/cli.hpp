#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsad/harness.hpp"
#include "tsad/io.hpp"

namespace tsad::cli {

enum class Format { csv, json, table };

enum ExitCode : int { ok = 0, input_error = 2, precondition_error = 3 };

struct RunConfig {
  std::string labels;
  std::string prediction;
  std::string score;
  std::vector<io::MetricSpec> metrics;
  io::Params file_params;
  Format format = Format::table;
  std::string out;
  std::string plot;
};

/// Raised for a metric whose precondition fails; carries the metric name.
struct metric_failure : undefined_metric {
  metric_failure(std::string_view metric, const std::string& what)
      : undefined_metric(std::string(metric) + ": " + what) {}
};

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot write " + path);
  f << content;
  if (!f) throw invalid_input("cannot write " + path);
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) out << content;
  else write_file(path, content);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += '\n';
  }
  return out;
}

inline std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  std::ostringstream ss;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      ss << (i ? "  " : "") << rows[k][i];
      if (i + 1 < rows[k].size()) ss << std::string(width[i] - rows[k][i].size(), ' ');
    }
    ss << '\n';
    if (k == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      ss << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
  return ss.str();
}

/// Rounds to 6 decimals so JSON numbers print like the text formats.
inline double round6(double v) { return std::stod(fmt6(v)); }

struct Polyline {
  std::string label;
  std::vector<double> x, y;
};

struct Panel {
  std::string title;
  std::vector<Polyline> lines;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

inline std::string svg(const std::vector<Panel>& panels, std::size_t columns) {
  const double pw = 300, ph = 150, pad = 30;
  const std::size_t rows = (panels.size() + columns - 1) / columns;
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2);
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << columns * (pw + pad) + pad << "\" height=\""
     << rows * (ph + 2 * pad) + pad << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  static const char* colors[] = {"#1b7f79", "#c0392b", "#2c3e90", "#b9770e"};
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const double ox = pad + static_cast<double>(k % columns) * (pw + pad);
    const double oy = 2 * pad + static_cast<double>(k / columns) * (ph + 2 * pad);
    ss << "<text x=\"" << ox << "\" y=\"" << oy - 8 << "\">" << p.title << "</text>\n";
    ss << "<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (std::size_t l = 0; l < p.lines.size(); ++l) {
      const auto& line = p.lines[l];
      ss << "<polyline fill=\"none\" stroke=\"" << colors[l % 4] << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < line.x.size(); ++i) {
        const double sx = ox + pw * (line.x[i] - p.xmin) / (p.xmax - p.xmin);
        const double sy = oy + ph - ph * (line.y[i] - p.ymin) / (p.ymax - p.ymin);
        ss << (i ? " " : "") << sx << ',' << sy;
      }
      ss << "\"/>\n";
      if (!line.label.empty())
        ss << "<text x=\"" << ox + pw - 4 << "\" y=\"" << oy + 14 + 13 * static_cast<double>(l)
           << "\" text-anchor=\"end\" fill=\"" << colors[l % 4] << "\">" << line.label << "</text>\n";
    }
  }
  ss << "</svg>\n";
  return ss.str();
}

struct Inputs {
  BinarySeries labels;
  std::optional<BinarySeries> prediction;
  std::optional<ScoreSeries> score;
};

inline Inputs load_inputs(const RunConfig& rc) {
  if (rc.labels.empty()) throw invalid_input("--labels is required");
  Inputs in;
  in.labels = io::to_binary(io::read_series(rc.labels), rc.labels);
  if (!rc.prediction.empty()) {
    in.prediction = io::to_binary(io::read_series(rc.prediction), rc.prediction);
    require_same_length(in.labels.size(), in.prediction->size());
  }
  if (!rc.score.empty()) {
    in.score = ScoreSeries(io::read_series(rc.score));
    require_same_length(in.labels.size(), in.score->size());
  }
  return in;
}

inline std::vector<std::string> header_evaluate() { return {"metric", "score", "direction", "parameters"}; }

}  // namespace detail

/// Evaluates the requested metrics (all applicable ones when none are named).
inline int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
  const auto in = detail::load_inputs(rc);
  std::vector<io::MetricSpec> specs = rc.metrics;
  if (specs.empty()) {
    for (auto id : all_metrics()) {
      const bool binary = info(id).kind == MetricKind::binary;
      if ((binary && in.prediction) || (!binary && in.score)) specs.push_back({id, {}});
    }
    if (specs.empty()) throw invalid_input("nothing to evaluate: give --prediction and/or --score");
  }

  std::vector<std::vector<std::string>> rows{detail::header_evaluate()};
  nlohmann::ordered_json json = nlohmann::ordered_json::array();
  for (const auto& spec : specs) {
    const auto& mi = info(spec.id);
    const auto config = io::build_config(rc.file_params, spec.params);
    MetricResult r;
    if (mi.kind == MetricKind::binary) {
      if (!in.prediction) throw invalid_input(std::string(mi.name) + " needs --prediction");
    } else if (!in.score) {
      throw invalid_input(std::string(mi.name) + " needs --score");
    }
    try {
      r = mi.kind == MetricKind::binary ? evaluate_binary(spec.id, in.labels, *in.prediction, config)
                                        : evaluate_scores(spec.id, in.labels, *in.score, config);
    } catch (const undefined_metric& e) {
      throw metric_failure(mi.name, e.what());
    }
    const auto params = describe_parameters(spec.id, config);
    rows.push_back({std::string(mi.name), fmt6(r.score), std::string(to_string(r.direction)), params});
    nlohmann::ordered_json row;
    row["metric"] = mi.name;
    row["score"] = detail::round6(r.score);
    row["direction"] = to_string(r.direction);
    if (r.components) {
      row["precision"] = detail::round6(r.components->precision);
      row["recall"] = detail::round6(r.components->recall);
    }
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (auto key : mi.keys) p[std::string(key)] = parameter_value(config, key);
    row["parameters"] = p;
    json.push_back(row);
  }
  std::string text;
  switch (rc.format) {
    case Format::csv: text = detail::csv(rows); break;
    case Format::json: text = json.dump(2) + "\n"; break;
    case Format::table: text = detail::table(rows); break;
  }
  detail::emit(rc.out, text, out);
  return ok;
}

/// ROC and PR points of a score.
inline int cmd_sweep(const RunConfig& rc, std::ostream& out) {
  const auto in = detail::load_inputs(rc);
  if (!in.score) throw invalid_input("sweep needs --score");
  std::vector<CurvePoint> roc, pr;
  try {
    roc = roc_curve(in.labels, *in.score);
  } catch (const undefined_metric& e) {
    throw metric_failure("auc_roc", e.what());
  }
  pr = pr_curve(in.labels, *in.score);
  const double area_roc = tsad::detail::trapezoid(roc), area_pr = tsad::detail::average_precision(pr);

  std::string text;
  if (rc.format == Format::json) {
    nlohmann::ordered_json j;
    auto points = [](const std::vector<CurvePoint>& c) {
      auto a = nlohmann::ordered_json::array();
      for (const auto& p : c)
        {
        nlohmann::ordered_json q;
        if (std::isfinite(p.threshold)) q["threshold"] = detail::round6(p.threshold);
        else q["threshold"] = nullptr;  // the final all-positive point
        q["x"] = detail::round6(p.x);
        q["y"] = detail::round6(p.y);
        a.push_back(q);
      }
      return a;
    };
    j["auc_roc"] = detail::round6(area_roc);
    j["auc_pr"] = detail::round6(area_pr);
    j["roc"] = points(roc);
    j["pr"] = points(pr);
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::vector<std::string>> rows{{"curve", "threshold", "x", "y"}};
    for (const auto& p : roc) rows.push_back({"roc", fmt6(p.threshold), fmt6(p.x), fmt6(p.y)});
    for (const auto& p : pr) rows.push_back({"pr", fmt6(p.threshold), fmt6(p.x), fmt6(p.y)});
    rows.push_back({"auc_roc", "", fmt6(area_roc), ""});
    rows.push_back({"auc_pr", "", fmt6(area_pr), ""});
    text = rc.format == Format::csv ? detail::csv(rows) : detail::table(rows);
  }
  detail::emit(rc.out, text, out);

  if (!rc.plot.empty()) {
    detail::Polyline r{"", {}, {}}, p{"", {}, {}};
    for (const auto& c : roc) r.x.push_back(c.x), r.y.push_back(c.y);
    for (const auto& c : pr) p.x.push_back(c.x), p.y.push_back(c.y);
    detail::write_file(rc.plot, detail::svg({{"ROC  area " + fmt6(area_roc), {r}}, {"PR  AP " + fmt6(area_pr), {p}}}, 2));
  }
  return ok;
}

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
  if (dir.empty()) throw invalid_input("--out directory is required");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw invalid_input("cannot create directory " + dir);
  return dir;
}

}  // namespace detail

/// Scenario tables, positional-response curves and the AUC disagreement demo.
inline int cmd_casestudies(const std::string& dir, std::ostream& out) {
  const auto root = detail::prepare_dir(dir);
  std::size_t checks = 0, failed = 0;

  std::vector<std::vector<std::string>> rows{
      {"scenario", "candidate", "metric", "component", "parameters", "value", "expected", "provenance", "status"}};
  for (const auto& sc : builtin_scenarios())
    for (const auto& r : evaluate_scenario(sc)) {
      rows.push_back({r.scenario, r.candidate, r.metric, r.component, r.parameters, r.value, r.expected,
                      r.provenance, r.status});
      if (!r.status.empty()) ++checks, failed += r.status != "PASS";
    }
  detail::write_file((root / "scenarios.csv").string(), detail::csv(rows));

  std::vector<std::vector<std::string>> curve_rows{{"row", "offset", "raw", "scaled"}};
  std::vector<detail::Panel> panels;
  for (const auto& row : positional_rows()) {
    const auto raw = positional_response(row.metric, row.config);
    const auto scaled = min_max_scale(raw);
    detail::Polyline line{"", {}, {}};
    for (std::size_t s = 0; s < raw.size(); ++s) {
      curve_rows.push_back({row.label, std::to_string(s), fmt6(raw[s]), fmt6(scaled[s])});
      line.x.push_back(static_cast<double>(s));
      line.y.push_back(scaled[s]);
    }
    panels.push_back({row.label, {line}, 0.0, static_cast<double>(raw.size() - 1), -0.2, 0.3});
  }
  detail::write_file((root / "positional.csv").string(), detail::csv(curve_rows));
  detail::write_file((root / "positional.svg").string(), detail::svg(panels, 3));

  std::vector<std::vector<std::string>> check_rows{{"check", "status", "detail"}};
  for (const auto& c : positional_checks()) {
    check_rows.push_back({c.name, c.passed ? "PASS" : "FAIL", c.detail});
    ++checks, failed += !c.passed;
  }
  detail::write_file((root / "positional_checks.csv").string(), detail::csv(check_rows));

  const auto demo = auc_disagreement_demo();
  std::vector<std::vector<std::string>> demo_rows{{"detector", "curve", "threshold", "x", "y"}};
  std::vector<detail::Polyline> roc_lines, pr_lines;
  for (const auto* d : {&demo.first, &demo.second}) {
    const std::string name = d == &demo.first ? "spread" : "concentrated";
    detail::Polyline r{name, {}, {}}, p{name, {}, {}};
    for (const auto& c : d->roc) {
      demo_rows.push_back({name, "roc", fmt6(c.threshold), fmt6(c.x), fmt6(c.y)});
      r.x.push_back(c.x), r.y.push_back(c.y);
    }
    for (const auto& c : d->pr) {
      demo_rows.push_back({name, "pr", fmt6(c.threshold), fmt6(c.x), fmt6(c.y)});
      p.x.push_back(c.x), p.y.push_back(c.y);
    }
    roc_lines.push_back(r);
    pr_lines.push_back(p);
  }
  detail::write_file((root / "auc_disagreement.csv").string(), detail::csv(demo_rows));
  detail::write_file((root / "auc_disagreement_summary.csv").string(),
                     detail::csv({{"detector", "auc_roc", "auc_pr"},
                                  {"spread", fmt6(demo.first.auc_roc), fmt6(demo.first.auc_pr)},
                                  {"concentrated", fmt6(demo.second.auc_roc), fmt6(demo.second.auc_pr)},
                                  {"disagreement", demo.disagreement ? "true" : "false", ""}}));
  detail::write_file((root / "auc_disagreement.svg").string(),
                     detail::svg({{"ROC", roc_lines}, {"PR", pr_lines}}, 2));
  ++checks, failed += !demo.disagreement;

  out << "casestudies: " << checks << " checks, " << failed << " failed, written to " << root.string() << "\n";
  return ok;
}

/// The property matrix with expected cells and PASS/FAIL per row.
inline int cmd_matrix(const std::string& dir, std::ostream& out) {
  const auto root = detail::prepare_dir(dir);
  const auto m = property_matrix();
  std::vector<std::vector<std::string>> wide{{"metric"}}, cells{{"metric", "property", "derived", "expected", "status"}};
  for (auto p : property_names) wide[0].emplace_back(p);
  wide[0].emplace_back("status");
  std::size_t failed = 0;
  for (std::size_t i = 0; i < m.metrics.size(); ++i) {
    const std::string name(info(m.metrics[i]).name);
    std::vector<std::string> row{name};
    bool row_ok = true;
    for (std::size_t p = 0; p < property_names.size(); ++p) {
      const auto& c = m.cells[i][p];
      row.push_back(c.derived + (c.asserted() ? "" : "*"));
      row_ok = row_ok && c.passed();
      cells.push_back({name, std::string(property_names[p]), c.derived, c.expected,
                       c.asserted() ? (c.passed() ? "PASS" : "FAIL") : "reported"});
    }
    row.push_back(row_ok ? "PASS" : "FAIL");
    failed += !row_ok;
    wide.push_back(row);
  }
  detail::write_file((root / "matrix.csv").string(), detail::csv(wide));
  detail::write_file((root / "matrix_cells.csv").string(), detail::csv(cells));
  out << detail::table(wide) << "matrix: " << m.metrics.size() << " metrics, " << failed
      << " rows failing, * = configuration dependent (reported only)\n";
  return ok;
}

/// Entry point shared by the executable and the tests. args excludes argv[0].
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluation metrics for time-series anomaly detection", "tsad_eval"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string metrics_text, config_path;
  auto add_io = [&](CLI::App* sub, bool prediction) {
    sub->add_option("--labels", rc.labels, "labels file (CSV or JSON, values 0/1)")->required();
    if (prediction) sub->add_option("--prediction", rc.prediction, "binary prediction file");
    sub->add_option("--score", rc.score, "anomaly score file");
    sub->add_option("--config", config_path, "key=value parameter file");
    sub->add_option("--out", rc.out, "output file (default stdout)");
    sub->add_option("--format", rc.format, "csv, json or table")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}, {"table", Format::table}}));
    sub->add_option("--plot", rc.plot, "SVG plot file");
  };
  auto* evaluate = app.add_subcommand("evaluate", "score predictions and/or anomaly scores");
  add_io(evaluate, true);
  evaluate->add_option("--metrics,--metric", metrics_text, "e.g. \"pw_f,pak_f(K_pct=10),auc_roc\"");
  auto* sweep = app.add_subcommand("sweep", "ROC and PR curve points of a score");
  add_io(sweep, false);
  std::string dir;
  auto* cases = app.add_subcommand("casestudies", "regenerate scenario tables and positional curves");
  cases->add_option("--out", dir, "output directory")->required();
  auto* matrix = app.add_subcommand("matrix", "derive the property matrix");
  matrix->add_option("--out", dir, "output directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  try {
    if (!config_path.empty()) rc.file_params = io::parse_config(io::read_text(config_path), config_path);
    if (!metrics_text.empty()) rc.metrics = io::parse_metric_list(metrics_text);
    if (*evaluate) return cmd_evaluate(rc, out);
    if (*sweep) return cmd_sweep(rc, out);
    if (*cases) return cmd_casestudies(dir, out);
    if (*matrix) return cmd_matrix(dir, out);
  } catch (const invalid_input& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const undefined_metric& e) {
    err << "error: " << e.what() << "\n";
    return precondition_error;
  }
  return input_error;
}

}  // namespace tsad::cli
