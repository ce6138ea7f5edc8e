#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tsad/affiliation.hpp"
#include "tsad/binary_metrics.hpp"
#include "tsad/nonbinary_metrics.hpp"
#include "tsad/tapr.hpp"

namespace tsad {

enum class MetricId {
  pw_f,
  pa_f,
  dtpa_f,
  pak_f,
  ls_f,
  seg_f,
  composite_f,
  ttol_f,
  range_f,
  taf,
  etaf,
  affiliation_f,
  nab,
  temporal_distance,
  patk,
  best_fbeta,
  auc_roc,
  auc_pr,
  vus_roc,
  vus_pr,
};

enum class MetricKind { binary, nonbinary };

struct MetricInfo {
  MetricId id;
  std::string_view name;
  std::string_view short_name;
  MetricKind kind;
  Direction direction;
  /// Number of parameters the metric has in its own definition. For range_f
  /// this counts alpha, beta and a bias, cardinality and overlap function per
  /// side, even though only some of them are configurable here.
  int parameter_count;
  /// MetricConfig keys the metric reads.
  std::vector<std::string_view> keys;
};

inline const std::vector<MetricInfo>& metric_table() {
  using enum MetricId;
  static const std::vector<MetricInfo> table{
      {pw_f, "pw_f", "pw", MetricKind::binary, Direction::higher_better, 1, {"beta"}},
      {pa_f, "pa_f", "pa", MetricKind::binary, Direction::higher_better, 1, {"beta"}},
      {dtpa_f, "dtpa_f", "dtpa", MetricKind::binary, Direction::higher_better, 2, {"beta", "k"}},
      {pak_f, "pak_f", "pak", MetricKind::binary, Direction::higher_better, 2, {"beta", "K_pct"}},
      {ls_f, "ls_f", "ls", MetricKind::binary, Direction::higher_better, 2, {"beta", "n"}},
      {seg_f, "seg_f", "seg", MetricKind::binary, Direction::higher_better, 1, {"beta"}},
      {composite_f, "composite_f", "cf", MetricKind::binary, Direction::higher_better, 1, {"beta"}},
      {ttol_f, "ttol_f", "ttol", MetricKind::binary, Direction::higher_better, 2, {"beta", "tau"}},
      {range_f, "range_f", "rf", MetricKind::binary, Direction::higher_better, 8, {"beta", "alpha", "bias"}},
      {taf, "taf", "taf", MetricKind::binary, Direction::higher_better, 4, {"beta", "alpha", "delta", "theta"}},
      {etaf, "etaf", "etaf", MetricKind::binary, Direction::higher_better, 3, {"beta", "theta_p", "theta_r"}},
      {affiliation_f, "affiliation_f", "af", MetricKind::binary, Direction::higher_better, 1, {"beta"}},
      {nab, "nab", "nab", MetricKind::binary, Direction::higher_better, 3, {"w_tp", "w_fp", "w_fn"}},
      {temporal_distance, "temporal_distance", "td", MetricKind::binary, Direction::lower_better, 1, {"eta"}},
      {patk, "patk", "patk", MetricKind::nonbinary, Direction::higher_better, 1, {"K_at"}},
      {best_fbeta, "best_fbeta", "best", MetricKind::nonbinary, Direction::higher_better, 1, {"beta"}},
      {auc_roc, "auc_roc", "aucroc", MetricKind::nonbinary, Direction::higher_better, 0, {}},
      {auc_pr, "auc_pr", "aucpr", MetricKind::nonbinary, Direction::higher_better, 0, {}},
      {vus_roc, "vus_roc", "vusroc", MetricKind::nonbinary, Direction::higher_better, 1, {"ell_max"}},
      {vus_pr, "vus_pr", "vuspr", MetricKind::nonbinary, Direction::higher_better, 1, {"ell_max"}},
  };
  return table;
}

inline const MetricInfo& info(MetricId id) { return metric_table()[static_cast<std::size_t>(id)]; }

inline std::vector<MetricId> all_metrics() {
  std::vector<MetricId> out;
  for (const auto& m : metric_table()) out.push_back(m.id);
  return out;
}

inline std::vector<MetricId> metrics_of_kind(MetricKind kind) {
  std::vector<MetricId> out;
  for (const auto& m : metric_table())
    if (m.kind == kind) out.push_back(m.id);
  return out;
}

inline MetricId parse_metric_id(std::string_view name) {
  for (const auto& m : metric_table())
    if (m.name == name || m.short_name == name) return m.id;
  throw invalid_input("unknown metric '" + std::string(name) + "'");
}

inline MetricResult evaluate_binary(MetricId id, const BinarySeries& labels, const BinarySeries& pred,
                                    const MetricConfig& c = {}) {
  c.validate();
  switch (id) {
    case MetricId::pw_f: return pw_f(labels, pred, c.beta);
    case MetricId::pa_f: return pa_f(labels, pred, c.beta);
    case MetricId::dtpa_f: return dtpa_f(labels, pred, c.beta, c.k);
    case MetricId::pak_f: return pak_f(labels, pred, c.beta, c.k_pct);
    case MetricId::ls_f: return ls_f(labels, pred, c.beta, c.n);
    case MetricId::seg_f: return seg_f(labels, pred, c.beta);
    case MetricId::composite_f: return composite_f(labels, pred, c.beta);
    case MetricId::ttol_f: return ttol_f(labels, pred, c.beta, c.tau);
    case MetricId::range_f: return range_f(labels, pred, c.beta, c.alpha, c.bias);
    case MetricId::taf: return taf(labels, pred, c.beta, c.alpha, c.delta, c.theta);
    case MetricId::etaf: return etaf(labels, pred, c.beta, c.theta_p, c.theta_r);
    case MetricId::affiliation_f: return affiliation_f(labels, pred, c.beta);
    case MetricId::nab: return nab_score(labels, pred, {c.w_tp, c.w_fp, c.w_fn});
    case MetricId::temporal_distance: return temporal_distance(labels, pred, c.eta);
    default: break;
  }
  throw invalid_input(std::string(info(id).name) + " needs a score series, not a binary prediction");
}

inline MetricResult evaluate_scores(MetricId id, const BinarySeries& labels, const ScoreSeries& score,
                                    const MetricConfig& c = {}) {
  c.validate();
  auto wrap = [](double v) { return MetricResult{v, std::nullopt, Direction::higher_better}; };
  switch (id) {
    case MetricId::patk: return wrap(patk(labels, score, c.k_at));
    case MetricId::best_fbeta: return wrap(best_fbeta(labels, score, c.beta));
    case MetricId::auc_roc: return wrap(auc_roc(labels, score));
    case MetricId::auc_pr: return wrap(auc_pr(labels, score));
    case MetricId::vus_roc: return wrap(vus_roc(labels, score, c.ell_max));
    case MetricId::vus_pr: return wrap(vus_pr(labels, score, c.ell_max));
    default: break;
  }
  throw invalid_input(std::string(info(id).name) + " needs a binary prediction, not a score series");
}

/// Sets one MetricConfig field from its textual key and value.
inline void set_parameter(MetricConfig& c, std::string_view key, std::string_view value) {
  auto num = [&]() {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(std::string(value), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v))
      throw invalid_input("parameter " + std::string(key) + ": not a number '" + std::string(value) + "'");
    return v;
  };
  auto count = [&]() {
    const double v = num();
    if (v < 0.0 || v != std::floor(v))
      throw invalid_input("parameter " + std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  };
  if (key == "beta") c.beta = num();
  else if (key == "k") c.k = count();
  else if (key == "K_pct") c.k_pct = num();
  else if (key == "n") c.n = count();
  else if (key == "tau") c.tau = count();
  else if (key == "alpha") c.alpha = num();
  else if (key == "delta") c.delta = count();
  else if (key == "theta") c.theta = num();
  else if (key == "theta_p") c.theta_p = num();
  else if (key == "theta_r") c.theta_r = num();
  else if (key == "bias") c.bias = parse_bias(value);
  else if (key == "eta") c.eta = num();
  else if (key == "ell_max" || key == "l") c.ell_max = count();
  else if (key == "K_at") c.k_at = count();
  else if (key == "w_tp") c.w_tp = num();
  else if (key == "w_fp") c.w_fp = num();
  else if (key == "w_fn") c.w_fn = num();
  else throw invalid_input("unknown parameter '" + std::string(key) + "'");
}

inline std::string parameter_value(const MetricConfig& c, std::string_view key) {
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  if (key == "beta") return fmt(c.beta);
  if (key == "k") return std::to_string(c.k);
  if (key == "K_pct") return fmt(c.k_pct);
  if (key == "n") return std::to_string(c.n);
  if (key == "tau") return std::to_string(c.tau);
  if (key == "alpha") return fmt(c.alpha);
  if (key == "delta") return std::to_string(c.delta);
  if (key == "theta") return fmt(c.theta);
  if (key == "theta_p") return fmt(c.theta_p);
  if (key == "theta_r") return fmt(c.theta_r);
  if (key == "bias") return std::string(to_string(c.bias));
  if (key == "eta") return fmt(c.eta);
  if (key == "ell_max") return std::to_string(c.ell_max);
  if (key == "K_at") return c.k_at == 0 ? "auto" : std::to_string(c.k_at);
  if (key == "w_tp") return fmt(c.w_tp);
  if (key == "w_fp") return fmt(c.w_fp);
  if (key == "w_fn") return fmt(c.w_fn);
  return {};
}

/// "key=value;key=value" for the keys the metric reads.
inline std::string describe_parameters(MetricId id, const MetricConfig& c) {
  std::string out;
  for (auto key : info(id).keys) {
    if (!out.empty()) out += ';';
    out += std::string(key) + '=' + parameter_value(c, key);
  }
  return out;
}

}  // namespace tsad
