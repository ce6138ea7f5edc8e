#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tsad/registry.hpp"

namespace tsad {

/// Fixed 6-decimal rendering used by every table and report.
inline std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

struct Candidate {
  std::string name;
  std::optional<BinarySeries> prediction;
  std::optional<ScoreSeries> score;
};

enum class Component { score, precision, recall };

inline std::string_view to_string(Component c) {
  switch (c) {
    case Component::score: return "score";
    case Component::precision: return "precision";
    case Component::recall: return "recall";
  }
  return "score";
}

struct ExpectedValue {
  std::string candidate;
  MetricId metric;
  MetricConfig config;
  Component component = Component::score;
  double value = 0.0;
  double tolerance = 0.005;
  std::string provenance;  // "reference" or "derived"
};

/// metric(first) compared against metric(second), direction-aware.
struct Preference {
  MetricId metric;
  std::string first;
  std::string second;
  bool strictly_better = true;  // false: first must not be strictly better
  std::string provenance;
};

struct Scenario {
  std::string name;
  std::string description;
  std::size_t length = 0;
  EventList events;
  BinarySeries labels;
  std::vector<Candidate> candidates;
  std::vector<ExpectedValue> expected;
  std::vector<Preference> preferences;

  const Candidate& candidate(std::string_view n) const {
    for (const auto& c : candidates)
      if (c.name == n) return c;
    throw invalid_input("no candidate '" + std::string(n) + "' in " + name);
  }
};

namespace detail {

inline BinarySeries series_of(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> runs) {
  EventList ev;
  for (auto [s, e] : runs) ev.push_back({s, e});
  return events_to_series(ev, n);
}

inline ScoreSeries indicator_score(const BinarySeries& s) { return ScoreSeries(std::vector<double>(s.begin(), s.end())); }

inline Scenario make_scenario(std::string name, std::string description, BinarySeries labels) {
  Scenario sc;
  sc.name = std::move(name);
  sc.description = std::move(description);
  sc.length = labels.size();
  sc.events = extract_events(labels);
  sc.labels = std::move(labels);
  return sc;
}

inline void add_binary(Scenario& sc, std::string name, BinarySeries pred, bool with_score = false) {
  if (with_score) sc.candidates.push_back({name + "_score", std::nullopt, indicator_score(pred)});
  sc.candidates.push_back({std::move(name), std::move(pred), std::nullopt});
}

inline MetricConfig with(std::initializer_list<std::pair<std::string_view, std::string_view>> kv) {
  MetricConfig c;
  for (auto [k, v] : kv) set_parameter(c, k, v);
  return c;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double normal(std::mt19937_64& rng, double mean, double sd) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace detail

// --- scenario generators ----------------------------------------------------

inline Scenario fixture_s1() {
  auto sc = detail::make_scenario("s1_long_event", "one long event, one early false positive and one hit",
                                  detail::series_of(32, {{17, 26}}));
  detail::add_binary(sc, "pred", BinarySeries::from_indices(32, {8, 24}));
  sc.expected = {{"pred", MetricId::pw_f, {}, Component::score, 0.17, 0.005, "reference"},
                 {"pred", MetricId::pa_f, {}, Component::score, 0.95, 0.005, "reference"}};
  return sc;
}

inline Scenario fixture_s2() {
  auto sc = detail::make_scenario("s2_partial_event", "partially detected event plus a false positive pair",
                                  detail::series_of(30, {{7, 19}}));
  detail::add_binary(sc, "pred", BinarySeries::from_indices(30, {13, 14, 24, 25}));
  using detail::with;
  auto e = [](MetricId id, MetricConfig c, Component comp, double v, double tol, const char* prov) {
    return ExpectedValue{"pred", id, c, comp, v, tol, prov};
  };
  const double t = 0.005, exact = 1e-9;
  sc.expected = {
      e(MetricId::pw_f, {}, Component::precision, 0.50, t, "reference"),
      e(MetricId::pw_f, {}, Component::recall, 0.15, t, "reference"),
      e(MetricId::pw_f, {}, Component::score, 0.24, t, "reference"),
      e(MetricId::pa_f, {}, Component::precision, 0.87, t, "reference"),
      e(MetricId::pa_f, {}, Component::recall, 1.00, t, "reference"),
      e(MetricId::pa_f, {}, Component::score, 0.93, t, "reference"),
      e(MetricId::seg_f, {}, Component::precision, 0.50, t, "reference"),
      e(MetricId::seg_f, {}, Component::recall, 1.00, t, "reference"),
      e(MetricId::seg_f, {}, Component::score, 0.67, t, "reference"),
      e(MetricId::composite_f, {}, Component::score, 2.0 / 3.0, exact, "derived"),
      e(MetricId::ls_f, with({{"n", "2"}}), Component::precision, 0.8, exact, "derived"),
      e(MetricId::ls_f, with({{"n", "2"}}), Component::recall, 4.0 / 7.0, exact, "derived"),
      e(MetricId::ls_f, with({{"n", "2"}}), Component::score, 2.0 / 3.0, exact, "derived"),
      e(MetricId::pak_f, with({{"K_pct", "20"}}), Component::score, 4.0 / 17.0, exact, "derived"),
      e(MetricId::pak_f, with({{"K_pct", "10"}}), Component::score, 13.0 / 14.0, exact, "derived"),
      e(MetricId::dtpa_f, with({{"k", "2"}}), Component::score, 0.0, exact, "derived"),
      e(MetricId::dtpa_f, with({{"k", "7"}}), Component::score, 13.0 / 14.0, exact, "derived"),
      e(MetricId::range_f, with({{"alpha", "0"}}), Component::score, 4.0 / 17.0, exact, "derived"),
      e(MetricId::range_f, with({{"alpha", "1"}}), Component::score, 2.0 / 3.0, exact, "derived"),
      e(MetricId::taf, {}, Component::score, 2.0 / 15.0, exact, "derived"),
      e(MetricId::etaf, {}, Component::score, 15.0 / 28.0, exact, "derived"),
  };
  return sc;
}

inline Scenario fixture_s3() {
  auto sc = detail::make_scenario("s3_short_events", "two short events; A misses one by a few steps, B is off by one",
                                  detail::series_of(38, {{29, 30}, {35, 36}}));
  detail::add_binary(sc, "A", detail::series_of(38, {{25, 26}, {35, 36}}));
  detail::add_binary(sc, "B", detail::series_of(38, {{29, 30}, {34, 35}}));
  sc.expected = {{"A", MetricId::affiliation_f, {}, Component::score, 0.91, 0.01, "reference"},
                 {"B", MetricId::affiliation_f, {}, Component::score, 0.90, 0.01, "reference"},
                 {"A", MetricId::temporal_distance, {}, Component::score, 14.0, 0.0, "reference"},
                 {"B", MetricId::temporal_distance, {}, Component::score, 2.0, 0.0, "reference"}};
  return sc;
}

/// Two events of the given length; one candidate covers the first event,
/// the other hits the first point of both.
inline Scenario partial_detection_scenario(std::size_t event_length = 10) {
  const std::size_t n = 6 * event_length, a = event_length, b = 4 * event_length;
  auto sc = detail::make_scenario("partial_detection", "covering one event versus touching both",
                                  detail::series_of(n, {{a, a + event_length - 1}, {b, b + event_length - 1}}));
  detail::add_binary(sc, "cover_one", detail::series_of(n, {{a, a + event_length - 1}}), true);
  detail::add_binary(sc, "detect_both", BinarySeries::from_indices(n, {a, b}), true);
  for (auto id : {MetricId::pa_f, MetricId::seg_f, MetricId::composite_f, MetricId::affiliation_f, MetricId::nab})
    sc.preferences.push_back({id, "detect_both", "cover_one", true, "reference"});
  sc.preferences.push_back({MetricId::pw_f, "detect_both", "cover_one", false, "reference"});
  return sc;
}

/// One long event and two short ones; one candidate predicts the long event,
/// the other both short events.
inline Scenario long_anomaly_scenario(std::size_t long_length = 12, std::size_t short_length = 2) {
  const std::size_t n = 100;
  auto sc = detail::make_scenario(
      "long_anomaly", "predicting one long event versus two short ones",
      detail::series_of(n, {{10, 10 + long_length - 1}, {50, 50 + short_length - 1}, {80, 80 + short_length - 1}}));
  detail::add_binary(sc, "long_event", detail::series_of(n, {{10, 10 + long_length - 1}}), true);
  detail::add_binary(sc, "short_events",
                     detail::series_of(n, {{50, 50 + short_length - 1}, {80, 80 + short_length - 1}}), true);
  sc.preferences.push_back({MetricId::pw_f, "long_event", "short_events", true, "reference"});
  sc.preferences.push_back({MetricId::seg_f, "short_events", "long_event", true, "reference"});
  return sc;
}

inline Scenario clustered_short_scenario() {
  const std::size_t n = 100;
  auto sc = detail::make_scenario("clustered_short", "a cluster of short events next to one long event",
                                  detail::series_of(n, {{20, 21}, {24, 25}, {28, 29}, {60, 75}}));
  detail::add_binary(sc, "cluster", detail::series_of(n, {{20, 21}, {24, 25}, {28, 29}}));
  detail::add_binary(sc, "long", detail::series_of(n, {{60, 75}}));
  sc.preferences.push_back({MetricId::seg_f, "cluster", "long", true, "derived"});
  sc.preferences.push_back({MetricId::pw_f, "long", "cluster", true, "derived"});
  return sc;
}

/// Same precision, different predicted event widths.
inline Scenario short_prediction_scenario(std::size_t width = 4) {
  const std::size_t n = 80;
  auto sc = detail::make_scenario("short_prediction", "single-point predictions versus wider ones",
                                  detail::series_of(n, {{10, 19}, {30, 39}}));
  detail::add_binary(sc, "spiky", BinarySeries::from_indices(n, {10, 30, 60}), true);
  detail::add_binary(sc, "wide",
                     detail::series_of(n, {{10, 10 + width - 1}, {30, 30 + width - 1}, {60, 60 + width - 1}}), true);
  for (auto id : {MetricId::pa_f, MetricId::nab, MetricId::temporal_distance})
    sc.preferences.push_back({id, "spiky", "wide", true, "reference"});
  sc.preferences.push_back({MetricId::pw_f, "spiky", "wide", false, "reference"});
  for (auto id : metrics_of_kind(MetricKind::nonbinary))
    sc.preferences.push_back({id, "spiky_score", "wide_score", false, "reference"});
  return sc;
}

/// Two plausible labellings of the same level shift, each scored against the other.
inline std::vector<Scenario> labelling_swap_scenarios() {
  const std::size_t n = 60;
  const auto whole = detail::series_of(n, {{30, 39}});
  const auto edges = detail::series_of(n, {{29, 30}, {39, 40}});
  auto a = detail::make_scenario("swap_block_labels", "block labelling judged against edge labelling", whole);
  detail::add_binary(a, "edges", edges);
  auto b = detail::make_scenario("swap_edge_labels", "edge labelling judged against block labelling", edges);
  detail::add_binary(b, "block", whole);
  return {a, b};
}

inline Scenario proximity_scenario() {
  const std::size_t n = 60;
  auto sc = detail::make_scenario("proximity", "equal-width score bumps at growing distance after the event",
                                  detail::series_of(n, {{20, 24}}));
  for (std::size_t gap = 0; gap < 3; ++gap) {
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < 3; ++i) s[25 + gap + i] = 1.0;
    sc.candidates.push_back({"gap" + std::to_string(gap), std::nullopt, ScoreSeries(s)});
  }
  for (auto id : {MetricId::vus_roc, MetricId::vus_pr}) {
    sc.preferences.push_back({id, "gap0", "gap1", true, "reference"});
    sc.preferences.push_back({id, "gap1", "gap2", true, "reference"});
  }
  for (auto id : {MetricId::auc_roc, MetricId::auc_pr}) sc.preferences.push_back({id, "gap0", "gap2", false, "reference"});
  return sc;
}

inline Scenario gaussian_proximity_scenario() {
  const std::size_t n = 60;
  auto sc = detail::make_scenario("gaussian_proximity", "gaussian scores centred at growing shifts from the event",
                                  detail::series_of(n, {{20, 24}}));
  for (int shift : {0, 4, 8}) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(i) - (22.0 + shift);
      s[i] = std::exp(-d * d / (2.0 * 3.0 * 3.0));
    }
    sc.candidates.push_back({"shift" + std::to_string(shift), std::nullopt, ScoreSeries(s)});
  }
  return sc;
}

/// Four anomalies at the end of an 8-point series whose score falls strictly,
/// padded with normal points that keep falling, up to total_length points.
inline Scenario class_imbalance_scenario(std::size_t total_length) {
  if (total_length < 8) throw invalid_input("class imbalance series needs at least 8 points");
  std::vector<std::uint8_t> lab(total_length, 0);
  for (std::size_t i = 4; i < 8; ++i) lab[i] = 1;
  std::vector<double> s(total_length);
  for (std::size_t i = 0; i < total_length; ++i) s[i] = static_cast<double>(total_length - i);
  char name[48];
  std::snprintf(name, sizeof name, "imbalance_n%03zu", total_length);
  auto sc = detail::make_scenario(name, "strictly falling score, normal points appended", BinarySeries(lab));
  sc.candidates.push_back({"falling", std::nullopt, ScoreSeries(s)});
  return sc;
}

/// A precise partial score against a wide one, in a short and a long series.
inline Scenario imbalance_preference_scenario(std::size_t total_length) {
  if (total_length < 10) throw invalid_input("imbalance preference series needs at least 10 points");
  std::vector<std::uint8_t> lab(total_length, 0);
  for (std::size_t i = 4; i < 8; ++i) lab[i] = 1;
  std::vector<double> precise(total_length, 0.0), wide(total_length, 0.0);
  for (std::size_t i = 4; i < 7; ++i) precise[i] = 1.0;
  for (std::size_t i = 2; i < 10; ++i) wide[i] = 1.0;
  char name[48];
  std::snprintf(name, sizeof name, "imbalance_preference_n%03zu", total_length);
  auto sc = detail::make_scenario(name, "precise partial score versus a wide covering score", BinarySeries(lab));
  sc.candidates.push_back({"precise", std::nullopt, ScoreSeries(precise)});
  sc.candidates.push_back({"wide", std::nullopt, ScoreSeries(wide)});
  return sc;
}

inline std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out{fixture_s1(),
                            fixture_s2(),
                            fixture_s3(),
                            partial_detection_scenario(),
                            long_anomaly_scenario(),
                            clustered_short_scenario(),
                            short_prediction_scenario(),
                            proximity_scenario(),
                            gaussian_proximity_scenario(),
                            imbalance_preference_scenario(12),
                            imbalance_preference_scenario(64)};
  for (auto& s : labelling_swap_scenarios()) out.push_back(std::move(s));
  for (std::size_t n : {8, 16, 32, 64}) out.push_back(class_imbalance_scenario(n));
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  return out;
}

// --- scenario evaluation ----------------------------------------------------

/// Metric value for a candidate, or nullopt when the metric is undefined on it.
inline std::optional<MetricResult> evaluate_candidate(const Scenario& sc, const Candidate& c, MetricId id,
                                                      const MetricConfig& config = {}) {
  try {
    if (info(id).kind == MetricKind::binary) {
      if (!c.prediction) return std::nullopt;
      return evaluate_binary(id, sc.labels, *c.prediction, config);
    }
    if (!c.score) return std::nullopt;
    return evaluate_scores(id, sc.labels, *c.score, config);
  } catch (const undefined_metric&) {
    return std::nullopt;
  }
}

inline double component_of(const MetricResult& r, Component c) {
  if (c == Component::score || !r.components) return r.score;
  return c == Component::precision ? r.components->precision : r.components->recall;
}

/// True when a is strictly better than b for the metric's direction.
inline bool strictly_better(MetricId id, double a, double b) {
  const double eps = 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
  return info(id).direction == Direction::higher_better ? a > b + eps : a < b - eps;
}

struct ScenarioRow {
  std::string scenario;
  std::string candidate;
  std::string metric;
  std::string component;
  std::string parameters;
  std::string value;     // fmt6 or "undefined"
  std::string expected;  // empty when nothing is asserted
  std::string provenance;
  std::string status;  // PASS, FAIL or empty
};

inline std::vector<ScenarioRow> evaluate_scenario(const Scenario& sc) {
  std::vector<ScenarioRow> rows;
  for (const auto& c : sc.candidates) {
    for (auto id : all_metrics()) {
      const bool binary = info(id).kind == MetricKind::binary;
      if ((binary && !c.prediction) || (!binary && !c.score)) continue;
      const MetricConfig config;
      const auto r = evaluate_candidate(sc, c, id, config);
      rows.push_back({sc.name, c.name, std::string(info(id).name), "score", describe_parameters(id, config),
                      r ? fmt6(r->score) : "undefined", "", "", ""});
    }
  }
  for (const auto& e : sc.expected) {
    const auto r = evaluate_candidate(sc, sc.candidate(e.candidate), e.metric, e.config);
    const double v = r ? component_of(*r, e.component) : std::nan("");
    const bool pass = r && std::fabs(v - e.value) <= e.tolerance + 1e-12;
    ScenarioRow row{sc.name,
                    e.candidate,
                    std::string(info(e.metric).name),
                    std::string(to_string(e.component)),
                    describe_parameters(e.metric, e.config),
                    r ? fmt6(v) : "undefined",
                    fmt6(e.value) + "+-" + fmt6(e.tolerance),
                    e.provenance,
                    pass ? "PASS" : "FAIL"};
    auto same = std::find_if(rows.begin(), rows.end(), [&](const ScenarioRow& x) {
      return x.candidate == row.candidate && x.metric == row.metric && x.component == row.component &&
             x.parameters == row.parameters && x.expected.empty();
    });
    if (same != rows.end()) *same = row;
    else rows.push_back(row);
  }
  for (const auto& p : sc.preferences) {
    const auto a = evaluate_candidate(sc, sc.candidate(p.first), p.metric);
    const auto b = evaluate_candidate(sc, sc.candidate(p.second), p.metric);
    const bool better = a && b && strictly_better(p.metric, a->score, b->score);
    const bool pass = a && b && (p.strictly_better ? better : !better);
    rows.push_back({sc.name, p.first + " vs " + p.second, std::string(info(p.metric).name), "preference",
                    describe_parameters(p.metric, {}),
                    a && b ? fmt6(a->score) + " vs " + fmt6(b->score) : "undefined",
                    p.strictly_better ? "first better" : "first not better", p.provenance, pass ? "PASS" : "FAIL"});
  }
  return rows;
}

// --- positional response ----------------------------------------------------

struct PositionalSetup {
  std::size_t length = 100;
  std::size_t event_start = 40;
  std::size_t event_end = 59;
  std::size_t width = 5;

  std::size_t offsets() const { return length - width + 1; }
  BinarySeries labels() const { return events_to_series({{event_start, event_end}}, length); }
  BinarySeries prediction(std::size_t offset) const {
    return events_to_series({{offset, offset + width - 1}}, length);
  }
};

/// Raw metric value for each placement of the predicted event.
inline std::vector<double> positional_response(MetricId id, const MetricConfig& config = {},
                                               const PositionalSetup& setup = {}) {
  if (info(id).kind != MetricKind::binary) throw invalid_input("positional response needs a binary metric");
  const auto labels = setup.labels();
  std::vector<double> out;
  for (std::size_t s = 0; s < setup.offsets(); ++s)
    out.push_back(evaluate_binary(id, labels, setup.prediction(s), config).score);
  return out;
}

/// Linear rescale onto [lo, hi]; a constant curve maps to lo.
inline std::vector<double> min_max_scale(const std::vector<double>& v, double lo = -0.2, double hi = 0.3) {
  if (v.empty()) return {};
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) out.push_back(*mx > *mn ? lo + (hi - lo) * (x - *mn) / (*mx - *mn) : lo);
  return out;
}

struct PositionalRow {
  std::string label;
  MetricId metric;
  MetricConfig config;
};

/// Positional-response rows and the parameters each one is drawn with.
inline std::vector<PositionalRow> positional_rows() {
  using detail::with;
  return {
      {"pw_f", MetricId::pw_f, {}},
      {"pa_f", MetricId::pa_f, {}},
      {"dtpa_f(k=2)", MetricId::dtpa_f, with({{"k", "2"}})},
      {"pak_f(K_pct=20)", MetricId::pak_f, with({{"K_pct", "20"}})},
      {"ls_f(n=2)", MetricId::ls_f, with({{"n", "2"}})},
      {"seg_f", MetricId::seg_f, {}},
      {"composite_f", MetricId::composite_f, {}},
      {"ttol_f(tau=10)", MetricId::ttol_f, with({{"tau", "10"}})},
      {"taf(alpha=0.5,delta=10,theta=0.5)", MetricId::taf, with({{"alpha", "0.5"}, {"delta", "10"}, {"theta", "0.5"}})},
      {"etaf(theta_p=0.5,theta_r=0.1)", MetricId::etaf, with({{"theta_p", "0.5"}, {"theta_r", "0.1"}})},
      {"affiliation_f", MetricId::affiliation_f, {}},
      {"nab", MetricId::nab, {}},
      {"temporal_distance", MetricId::temporal_distance, {}},
      {"range_f(bias=flat,alpha=0.2)", MetricId::range_f, with({{"bias", "flat"}, {"alpha", "0.2"}})},
      {"range_f(bias=front,alpha=0)", MetricId::range_f, with({{"bias", "front"}, {"alpha", "0"}})},
  };
}

/// Parameters used when a positional curve feeds the property matrix.
inline MetricConfig positional_config(MetricId id) {
  for (const auto& r : positional_rows())
    if (r.metric == id) return r.config;
  return {};
}

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Shape checks on the positional-response curves.
inline std::vector<Check> positional_checks(const PositionalSetup& setup = {}) {
  std::vector<Check> out;
  const std::size_t offsets = setup.offsets();
  auto overlaps = [&](std::size_t s) { return s + setup.width - 1 >= setup.event_start && s <= setup.event_end; };

  {
    auto v = positional_response(MetricId::seg_f, {}, setup);
    std::sort(v.begin(), v.end());
    const auto distinct = std::unique(v.begin(), v.end()) - v.begin();
    out.push_back({"seg_f takes exactly 2 distinct values", distinct == 2, std::to_string(distinct) + " distinct"});
  }
  {
    const auto v = min_max_scale(positional_response(MetricId::pa_f, {}, setup), 0.0, 1.0);
    const double plateau = *std::max_element(v.begin(), v.end());
    bool ok = true;
    std::string bad;
    for (std::size_t s = 0; s < offsets; ++s) {
      if (!overlaps(s)) continue;
      const double gap = (plateau - v[s]) / plateau;
      if (gap > 0.05 + 1e-12) {
        ok = false;
        bad += " s=" + std::to_string(s) + ":" + fmt6(100.0 * gap) + "%";
      }
    }
    out.push_back({"pa_f within 5% of its plateau whenever the prediction overlaps the event", ok,
                   ok ? "all overlapping offsets within 5%" : "below plateau by" + bad});
  }
  for (auto id : {MetricId::affiliation_f, MetricId::temporal_distance}) {
    const auto v = positional_response(id, {}, setup);
    bool ok = true;
    std::string bad;
    for (std::size_t s = 0; s < offsets; ++s) {
      const bool left = s > 0 && v[s - 1] != v[s];
      const bool right = s + 1 < offsets && v[s + 1] != v[s];
      if (!left && !right) {
        ok = false;
        bad += " s=" + std::to_string(s);
      }
    }
    out.push_back({std::string(info(id).name) + " non-constant at every offset", ok,
                   ok ? "every offset differs from a neighbour" : "flat at" + bad});
  }
  {
    const auto v = positional_response(MetricId::dtpa_f, positional_config(MetricId::dtpa_f), setup);
    const double mx = *std::max_element(v.begin(), v.end());
    const double mn = *std::min_element(v.begin(), v.end());
    bool ok = true;
    for (std::size_t s = 0; s < offsets; ++s) {
      const bool hits_first_two = s <= setup.event_start + 1 && s + setup.width - 1 >= setup.event_start;
      if (v[s] == mx && !hits_first_two) ok = false;
      if (s > setup.event_start + 1 && v[s] != mn) ok = false;
    }
    out.push_back({"dtpa_f(k=2) maximal only when hitting the first 2 event points", ok,
                   "max " + fmt6(mx) + ", min " + fmt6(mn)});
  }
  {
    const auto v = positional_response(MetricId::ttol_f, positional_config(MetricId::ttol_f), setup);
    bool ok = true;
    for (std::size_t s = 0; s < offsets; ++s) {
      const bool near = s + setup.width - 1 + 10 >= setup.event_start && s <= setup.event_end + 10;
      if (near && !(v[s] > 0.0)) ok = false;
    }
    out.push_back({"ttol_f(tau=10) nonzero within 10 steps on both sides", ok, ""});
  }
  return out;
}

// --- property matrix ----------------------------------------------------------

inline constexpr std::array<std::string_view, 10> property_names{
    "early_detection", "long_anomalies", "short_predicted_anomalies", "partial_detection", "proximity",
    "requires_threshold", "parameters", "time_aware", "indifferent_to_imbalance", "general"};

struct MatrixCell {
  std::string derived;   // has, lacks, partial, or a parameter count
  std::string expected;  // same vocabulary, or "*" when reported only
  bool asserted() const { return expected != "*"; }
  bool passed() const { return !asserted() || derived == expected; }
};

struct PropertyMatrix {
  std::vector<MetricId> metrics;
  std::vector<std::array<MatrixCell, 10>> cells;

  bool all_passed() const {
    for (const auto& row : cells)
      for (const auto& c : row)
        if (!c.passed()) return false;
    return true;
  }
};

/// Expected cells. v = has, x = lacks, * = configuration dependent, digits = parameter count.
inline std::string_view expected_matrix_row(MetricId id) {
  switch (id) {
    case MetricId::pw_f: return "x v x x x v 1 x v x";
    case MetricId::pa_f: return "x v v v x v 1 v v x";
    case MetricId::dtpa_f: return "* v * v x v 2 v v x";
    case MetricId::pak_f: return "x v * * x v 2 v v x";
    case MetricId::ls_f: return "* * * v * v 2 v v x";
    case MetricId::seg_f: return "x x x v x v 1 v v x";
    case MetricId::composite_f: return "x x x v x v 1 v v x";
    case MetricId::ttol_f: return "x * x * v v 2 v v x";
    case MetricId::range_f: return "* x x * x v 8 v v x";
    case MetricId::taf: return "x x x * * v 4 v v x";
    case MetricId::etaf: return "x x x * x v 3 v v x";
    case MetricId::affiliation_f: return "x x x v v v 1 v v x";
    case MetricId::nab: return "v x v v * v 3 v v x";
    case MetricId::temporal_distance: return "x * v * v v 1 v v x";
    case MetricId::patk: return "x v x x * x 1 x v x";
    case MetricId::best_fbeta: return "x v x x * x 1 x v x";
    case MetricId::auc_roc: return "x v x x * x 0 x x x";
    case MetricId::auc_pr: return "x v x x * x 0 x v x";
    case MetricId::vus_roc: return "x * x x v x 1 v x x";
    case MetricId::vus_pr: return "x v x x v x 1 v v x";
  }
  return "";
}

namespace detail {

inline std::string has_if(bool b) { return b ? "has" : "lacks"; }

inline std::vector<std::string> expected_tokens(MetricId id) {
  std::vector<std::string> out;
  for (char ch : expected_matrix_row(id)) {
    if (ch == ' ') continue;
    if (ch == 'v') out.push_back("has");
    else if (ch == 'x') out.push_back("lacks");
    else out.push_back(std::string(1, ch));
  }
  return out;
}

/// Value of a metric on a candidate; binary metrics read the prediction,
/// score metrics the "<name>_score" candidate.
inline double value_on(const Scenario& sc, std::string_view name, MetricId id, const MetricConfig& c) {
  const std::string key = info(id).kind == MetricKind::binary ? std::string(name) : std::string(name) + "_score";
  const auto r = evaluate_candidate(sc, sc.candidate(key), id, c);
  if (!r) throw undefined_metric(std::string(info(id).name) + " undefined in " + sc.name);
  return r->score;
}

inline ScoreSeries random_scores(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform01(rng);
  return ScoreSeries(v);
}

/// Series and score for the time-awareness test: events and predictions are
/// unions of aligned pairs so a pairwise shuffle keeps every event length >= 2.
struct PairedInstance {
  BinarySeries labels, pred;
  ScoreSeries score;
};

inline PairedInstance time_aware_instance() {
  const std::size_t n = 40;
  std::mt19937_64 rng(2024);
  return {series_of(n, {{4, 9}, {20, 27}}), series_of(n, {{2, 3}, {6, 7}, {22, 25}, {34, 35}}),
          random_scores(n, rng)};
}

inline PairedInstance shuffle_pairs(const PairedInstance& in, std::uint64_t seed) {
  const std::size_t pairs = in.labels.size() / 2;
  std::vector<std::size_t> order(pairs);
  for (std::size_t i = 0; i < pairs; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = pairs; i-- > 1;) std::swap(order[i], order[rng() % (i + 1)]);
  std::vector<std::uint8_t> l, p;
  std::vector<double> s;
  for (auto q : order)
    for (std::size_t j = 2 * q; j < 2 * q + 2; ++j) {
      l.push_back(in.labels[j]);
      p.push_back(in.pred[j]);
      s.push_back(in.score[j]);
    }
  return {BinarySeries(l), BinarySeries(p), ScoreSeries(s)};
}

inline double evaluate_instance(MetricId id, const PairedInstance& x, const MetricConfig& c) {
  return info(id).kind == MetricKind::binary ? evaluate_binary(id, x.labels, x.pred, c).score
                                             : evaluate_scores(id, x.labels, x.score, c).score;
}

/// A base instance whose last event is predicted exactly, then padded with
/// normal points scored below everything else.
inline PairedInstance imbalance_instance(std::size_t pad) {
  const std::size_t n = 20;
  std::vector<std::uint8_t> l(n + pad, 0), p(n + pad, 0);
  std::vector<double> s(n + pad);
  for (std::size_t i = 3; i <= 6; ++i) l[i] = 1;
  for (std::size_t i = 10; i <= 13; ++i) l[i] = p[i] = 1;
  for (std::size_t i : {1, 5, 6}) p[i] = 1;
  const std::array<double, n> base{0.2, 0.9, 0.1, 0.4, 0.3, 0.8, 0.7, 0.5, 0.05, 0.35,
                                   0.95, 0.6, 0.85, 0.75, 0.15, 0.25, 0.45, 0.55, 0.65, 0.12};
  for (std::size_t i = 0; i < n; ++i) s[i] = base[i];
  for (std::size_t i = 0; i < pad; ++i) s[n + i] = -1.0 - static_cast<double>(i);
  return {BinarySeries(l), BinarySeries(p), ScoreSeries(s)};
}

inline PairedInstance reversed(const PairedInstance& in) {
  std::vector<std::uint8_t> l(in.labels.begin(), in.labels.end()), p(in.pred.begin(), in.pred.end());
  std::vector<double> s(in.score.begin(), in.score.end());
  std::reverse(l.begin(), l.end());
  std::reverse(p.begin(), p.end());
  std::reverse(s.begin(), s.end());
  return {BinarySeries(l), BinarySeries(p), ScoreSeries(s)};
}

inline bool same_value(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace detail

/// Configuration used for every matrix derivation of a metric.
inline MetricConfig matrix_config(MetricId id) { return positional_config(id); }

inline std::array<std::string, 10> derive_properties(MetricId id) {
  using namespace detail;
  const MetricConfig c = matrix_config(id);
  const bool binary = info(id).kind == MetricKind::binary;
  std::array<std::string, 10> d;

  std::vector<double> curve;
  if (binary) curve = positional_response(id, c);

  // early detection: an early hit beats a late one inside the event
  if (binary) {
    d[0] = has_if(strictly_better(id, curve[40], curve[55]));
  } else {
    const auto x = time_aware_instance();
    d[0] = has_if(!same_value(evaluate_instance(id, x, c), evaluate_instance(id, reversed(x), c)));
  }

  const auto long_sc = long_anomaly_scenario();
  d[1] = has_if(!strictly_better(id, value_on(long_sc, "short_events", id, c), value_on(long_sc, "long_event", id, c)));

  const auto short_sc = short_prediction_scenario();
  d[2] = has_if(strictly_better(id, value_on(short_sc, "spiky", id, c), value_on(short_sc, "wide", id, c)));

  const auto partial_sc = partial_detection_scenario();
  d[3] = has_if(strictly_better(id, value_on(partial_sc, "detect_both", id, c), value_on(partial_sc, "cover_one", id, c)));

  if (binary) {
    double worst = curve[0];
    for (double v : curve)
      if (strictly_better(id, worst, v)) worst = v;
    const bool before = strictly_better(id, curve[35], worst);
    const bool after = strictly_better(id, curve[60], worst);
    d[4] = before && after ? "has" : (before || after ? "partial" : "lacks");
  } else {
    auto ranked = [&](const Scenario& sc) {
      std::vector<double> v;
      for (const auto& cand : sc.candidates) v.push_back(evaluate_candidate(sc, cand, id, c)->score);
      for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!strictly_better(id, v[i], v[i + 1])) return false;
      return true;
    };
    d[4] = ranked(proximity_scenario()) ? "has" : (ranked(gaussian_proximity_scenario()) ? "partial" : "lacks");
  }

  d[5] = has_if(binary);
  d[6] = std::to_string(info(id).parameter_count);

  {
    const auto x = time_aware_instance();
    const double base = evaluate_instance(id, x, c);
    bool changed = false;
    for (std::uint64_t seed = 1; seed <= 5 && !changed; ++seed)
      changed = !same_value(base, evaluate_instance(id, shuffle_pairs(x, seed), c));
    d[7] = has_if(changed);
  }

  d[8] = has_if(same_value(evaluate_instance(id, imbalance_instance(0), c),
                           evaluate_instance(id, imbalance_instance(200), c)));

  d[9] = has_if(d[0] == "has" && d[3] == "has" && d[4] == "has");
  return d;
}

inline PropertyMatrix property_matrix() {
  PropertyMatrix m;
  for (auto id : all_metrics()) {
    const auto derived = derive_properties(id);
    const auto expected = detail::expected_tokens(id);
    std::array<MatrixCell, 10> row;
    for (std::size_t p = 0; p < 10; ++p) row[p] = {derived[p], expected[p]};
    m.metrics.push_back(id);
    m.cells.push_back(row);
  }
  return m;
}

// --- AUC disagreement -----------------------------------------------------------

struct DetectorCurves {
  ScoreSeries score;
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
};

struct AucDisagreement {
  BinarySeries labels;
  DetectorCurves first;
  DetectorCurves second;
  bool disagreement = false;
  std::uint64_t seed = 0;
  int attempts = 0;
};

inline AucDisagreement compare_detectors(const BinarySeries& labels, const ScoreSeries& a, const ScoreSeries& b) {
  auto curves = [&](const ScoreSeries& s) {
    return DetectorCurves{s, auc_roc(labels, s), auc_pr(labels, s), roc_curve(labels, s), pr_curve(labels, s)};
  };
  AucDisagreement out;
  out.labels = labels;
  out.first = curves(a);
  out.second = curves(b);
  const double droc = out.first.auc_roc - out.second.auc_roc;
  const double dpr = out.first.auc_pr - out.second.auc_pr;
  out.disagreement = (droc > 0 && dpr < 0) || (droc < 0 && dpr > 0);
  return out;
}

/// Two synthetic detectors on a 2% anomaly series: one lifts every anomaly a
/// little, the other lifts a few anomalies far above everything and leaves the
/// rest among the normal points. Parameters are drawn until the two AUCs rank
/// the detectors in opposite order.
inline AucDisagreement auc_disagreement_demo(std::uint64_t seed = 7, int max_attempts = 100) {
  const std::size_t n = 1000, anomalies = 20;
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::vector<std::uint8_t> lab(n, 0);
    for (std::size_t placed = 0; placed < anomalies;) {
      const auto i = static_cast<std::size_t>(rng() % n);
      if (!lab[i]) lab[i] = 1, ++placed;
    }
    const double lift = 1.0 + 2.0 * detail::uniform01(rng);
    const double share = 0.2 + 0.5 * detail::uniform01(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!lab[i]) {
        a[i] = detail::normal(rng, 0.0, 1.0);
        b[i] = detail::normal(rng, 0.0, 1.0);
        continue;
      }
      a[i] = detail::normal(rng, lift, 1.0);
      b[i] = detail::uniform01(rng) < share ? detail::normal(rng, 5.0, 0.5) : detail::normal(rng, -0.5, 1.0);
    }
    auto r = compare_detectors(BinarySeries(lab), ScoreSeries(a), ScoreSeries(b));
    if (r.disagreement) {
      r.seed = seed;
      r.attempts = attempt;
      return r;
    }
  }
  throw std::runtime_error("no disagreeing pair found within the attempt budget");
}

}  // namespace tsad
