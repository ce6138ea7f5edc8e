#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsad/registry.hpp"

namespace tsad::io {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline bool parse_double(std::string_view text, double& out) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

/// Values from a JSON flat array or from CSV text with one value per line
/// and an optional header line.
inline std::vector<double> parse_series(const std::string& text, const std::string& origin) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw invalid_input(origin + ": malformed JSON: " + e.what());
    }
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw invalid_input(origin + ": JSON array must hold numbers only");
      out.push_back(v.get<double>());
      if (!std::isfinite(out.back())) throw invalid_input(origin + ": non-finite value");
    }
    if (out.empty()) throw invalid_input(origin + ": empty input");
    return out;
  }
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    double v = 0.0;
    if (parse_double(t, v)) {
      out.push_back(v);
    } else if (out.empty() && line_no == 1) {
      continue;  // header
    } else {
      throw invalid_input(origin + ":" + std::to_string(line_no) + ": not a number '" + t + "'");
    }
  }
  if (out.empty()) throw invalid_input(origin + ": empty input");
  return out;
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<double> read_series(const std::string& path) { return parse_series(read_text(path), path); }

inline BinarySeries to_binary(const std::vector<double>& values, const std::string& origin) {
  std::vector<std::uint8_t> flags;
  flags.reserve(values.size());
  for (double v : values) {
    if (v != 0.0 && v != 1.0) throw invalid_input(origin + ": values must be exactly 0 or 1");
    flags.push_back(v == 1.0 ? 1 : 0);
  }
  return BinarySeries(std::move(flags));
}

using Params = std::vector<std::pair<std::string, std::string>>;

struct MetricSpec {
  MetricId id;
  Params params;
};

inline Params parse_params(std::string_view body, const std::string& origin) {
  Params out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const auto item = trim(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw invalid_input(origin + ": expected key=value, got '" + item + "'");
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// "pw_f, pak_f(K_pct=10, beta=2), auc_roc"
inline std::vector<MetricSpec> parse_metric_list(std::string_view text) {
  std::vector<MetricSpec> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    int depth = 0;
    while (j < text.size() && (depth > 0 || text[j] != ',')) {
      if (text[j] == '(') ++depth;
      if (text[j] == ')') --depth;
      if (depth < 0) throw invalid_input("unbalanced parentheses in metric list");
      ++j;
    }
    if (depth != 0) throw invalid_input("unbalanced parentheses in metric list");
    const std::string item = trim(text.substr(i, j - i));
    i = j + 1;
    if (item.empty()) continue;
    const auto open = item.find('(');
    MetricSpec spec{parse_metric_id(trim(item.substr(0, open))), {}};
    if (open != std::string::npos) {
      if (item.back() != ')') throw invalid_input("malformed metric '" + item + "'");
      spec.params = parse_params(std::string_view(item).substr(open + 1, item.size() - open - 2), item);
    }
    out.push_back(std::move(spec));
  }
  return out;
}

/// key=value lines; '#' starts a comment.
inline Params parse_config(const std::string& text, const std::string& origin) {
  Params out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(std::string_view(line).substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw invalid_input(origin + ":" + std::to_string(line_no) + ": expected key=value");
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

inline MetricConfig build_config(const Params& file_params, const Params& metric_params) {
  MetricConfig c;
  for (const auto& [k, v] : file_params) set_parameter(c, k, v);
  for (const auto& [k, v] : metric_params) set_parameter(c, k, v);
  c.validate();
  return c;
}

}  // namespace tsad::io
