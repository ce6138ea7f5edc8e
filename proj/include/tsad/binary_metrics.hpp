#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "tsad/core.hpp"

namespace tsad {

enum class Direction { higher_better, lower_better };

inline std::string_view to_string(Direction d) {
  return d == Direction::higher_better ? "higher-better" : "lower-better";
}

struct MetricResult {
  double score = 0.0;
  std::optional<PRF> components;
  Direction direction = Direction::higher_better;
};

namespace detail {

inline MetricResult from_prf(const PRF& prf) { return {prf.fscore, prf, Direction::higher_better}; }

inline void check_pair(const BinarySeries& labels, const BinarySeries& pred) {
  require_non_empty(labels.size());
  require_same_length(labels.size(), pred.size());
}

/// Distance from every index to the closest set index, or npos if none is set.
inline std::vector<std::size_t> nearest_set_distance(const BinarySeries& s) {
  constexpr auto none = static_cast<std::size_t>(-1);
  const std::size_t n = s.size();
  std::vector<std::size_t> d(n, none);
  std::size_t last = none;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i]) last = i;
    if (last != none) d[i] = i - last;
  }
  last = none;
  for (std::size_t i = n; i-- > 0;) {
    if (s[i]) last = i;
    if (last != none) d[i] = std::min(d[i], last - i);
  }
  return d;
}

inline bool overlaps(const Event& e, const BinarySeries& s) {
  for (std::size_t i = e.start; i <= e.end; ++i)
    if (s[i]) return true;
  return false;
}

}  // namespace detail

inline MetricResult pw_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0) {
  detail::check_pair(labels, pred);
  return detail::from_prf(prf_from_counts(point_confusion(labels, pred), beta));
}

inline MetricResult pa_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0) {
  detail::check_pair(labels, pred);
  return pw_f(labels, adjust_prediction(labels, pred, FullAdjust{}), beta);
}

inline MetricResult dtpa_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                           std::size_t k = 2) {
  detail::check_pair(labels, pred);
  return pw_f(labels, adjust_prediction(labels, pred, DelayAdjust{k}), beta);
}

inline MetricResult pak_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                          double k_pct = 20.0) {
  detail::check_pair(labels, pred);
  if (!(k_pct > 0.0 && k_pct <= 100.0)) throw invalid_input("K_pct must be in (0, 100]");
  return pw_f(labels, adjust_prediction(labels, pred, PortionAdjust{k_pct}), beta);
}

inline MetricResult ls_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                         std::size_t n = 2) {
  detail::check_pair(labels, pred);
  const auto adjusted = adjust_prediction(labels, pred, LatencyAdjust{});
  return pw_f(downsample_or(labels, n), downsample_or(adjusted, n), beta);
}

namespace detail {

inline std::pair<double, double> segment_precision_recall(const BinarySeries& labels,
                                                          const BinarySeries& pred) {
  std::size_t tp = 0, fn = 0, fp = 0;
  for (const auto& e : extract_events(labels)) (overlaps(e, pred) ? tp : fn) += 1;
  for (const auto& e : extract_events(pred))
    if (!overlaps(e, labels)) ++fp;
  return {ratio(static_cast<double>(tp), static_cast<double>(tp + fp)),
          ratio(static_cast<double>(tp), static_cast<double>(tp + fn))};
}

}  // namespace detail

inline MetricResult seg_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0) {
  detail::check_pair(labels, pred);
  auto [p, r] = detail::segment_precision_recall(labels, pred);
  return detail::from_prf(make_prf(p, r, beta));
}

/// Point-wise precision combined with segment-wise recall.
inline MetricResult composite_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0) {
  detail::check_pair(labels, pred);
  const auto c = point_confusion(labels, pred);
  const double p = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  const double r = detail::segment_precision_recall(labels, pred).second;
  return detail::from_prf(make_prf(p, r, beta));
}

inline MetricResult ttol_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                           std::size_t tau = 2) {
  detail::check_pair(labels, pred);
  const auto to_label = detail::nearest_set_distance(labels);
  const auto to_pred = detail::nearest_set_distance(pred);
  std::size_t p_hit = 0, p_all = 0, l_hit = 0, l_all = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (pred[i]) {
      ++p_all;
      if (to_label[i] <= tau) ++p_hit;
    }
    if (labels[i]) {
      ++l_all;
      if (to_pred[i] <= tau) ++l_hit;
    }
  }
  return detail::from_prf(make_prf(ratio(static_cast<double>(p_hit), static_cast<double>(p_all)),
                                   ratio(static_cast<double>(l_hit), static_cast<double>(l_all)), beta));
}

/// Weight of position i (1-based) in an event of length len.
inline double positional_weight(Bias bias, std::size_t i, std::size_t len) {
  switch (bias) {
    case Bias::flat: return 1.0;
    case Bias::front: return static_cast<double>(len - i + 1);
    case Bias::back: return static_cast<double>(i);
    case Bias::middle: return static_cast<double>(2 * i <= len ? i : len - i + 1);
  }
  return 1.0;
}

namespace detail {

/// Existence plus positional overlap reward of `e` against `other`.
inline double range_event_score(const Event& e, const BinarySeries& other, double alpha, Bias bias) {
  double covered = 0.0, total = 0.0;
  bool exists = false;
  const std::size_t len = e.length();
  for (std::size_t i = e.start; i <= e.end; ++i) {
    const double w = positional_weight(bias, i - e.start + 1, len);
    total += w;
    if (other[i]) {
      covered += w;
      exists = true;
    }
  }
  return alpha * (exists ? 1.0 : 0.0) + (1.0 - alpha) * covered / total;
}

}  // namespace detail

/// Range-based precision and recall with cardinality factor 1. The existence
/// weight alpha and the bias are shared by both sides.
inline MetricResult range_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                            double alpha = 0.5, Bias bias = Bias::flat) {
  detail::check_pair(labels, pred);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw invalid_input("alpha must be in [0, 1]");
  const auto real = extract_events(labels);
  const auto predicted = extract_events(pred);
  double r = 0.0, p = 0.0;
  for (const auto& e : real) r += detail::range_event_score(e, pred, alpha, bias);
  for (const auto& e : predicted) p += detail::range_event_score(e, labels, alpha, bias);
  r = ratio(r, static_cast<double>(real.size()));
  p = ratio(p, static_cast<double>(predicted.size()));
  return detail::from_prf(make_prf(p, r, beta));
}

/// Sum of distances (raised to eta) from each labelled point to the closest
/// predicted point and back. An empty side costs the series length per point.
inline MetricResult temporal_distance(const BinarySeries& labels, const BinarySeries& pred, double eta = 1.0) {
  detail::check_pair(labels, pred);
  if (!(eta > 0.0)) throw invalid_input("eta must be positive");
  const auto to_label = detail::nearest_set_distance(labels);
  const auto to_pred = detail::nearest_set_distance(pred);
  const double fallback = std::pow(static_cast<double>(labels.size()), eta);
  const bool no_labels = labels.count() == 0, no_pred = pred.count() == 0;
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) total += no_pred ? fallback : std::pow(static_cast<double>(to_pred[i]), eta);
    if (pred[i]) total += no_labels ? fallback : std::pow(static_cast<double>(to_label[i]), eta);
  }
  return {total, std::nullopt, Direction::lower_better};
}

struct NabWeights {
  double tp = 1.0;
  double fp = 0.11;
  double fn = 1.0;
};

inline double nab_scaled_sigmoid(double x) {
  if (x > 3.0) return -1.0;
  return 2.0 / (1.0 + std::exp(5.0 * x)) - 1.0;
}

/// NAB score normalised so that no detections give 0 and a perfect detector 100.
/// Label events are the windows; the earliest hit in a window is rewarded,
/// later hits are ignored, false positives after a window are penalised by
/// their relative distance from it.
inline MetricResult nab_score(const BinarySeries& labels, const BinarySeries& pred, NabWeights w = {}) {
  detail::check_pair(labels, pred);
  const auto windows = extract_events(labels);
  if (windows.empty()) throw undefined_metric("NAB undefined without labelled events");
  for (const auto& e : windows)
    if (e.length() < 2) throw undefined_metric("NAB undefined for point anomalies");

  double raw = 0.0;
  std::size_t next = 0;  // first window not entirely before i
  std::vector<bool> detected(windows.size(), false);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    while (next < windows.size() && windows[next].end < i) ++next;
    if (!pred[i]) continue;
    if (next < windows.size() && windows[next].contains(i)) {
      if (detected[next]) continue;
      detected[next] = true;
      const auto& e = windows[next];
      const double pos = -static_cast<double>(e.end - i + 1) / static_cast<double>(e.length());
      raw += w.tp * nab_scaled_sigmoid(pos) / nab_scaled_sigmoid(-1.0);
    } else if (next == 0) {
      raw -= w.fp;
    } else {
      const auto& prev = windows[next - 1];
      const double pos = static_cast<double>(i - prev.end) / static_cast<double>(prev.length() - 1);
      raw += w.fp * nab_scaled_sigmoid(pos);
    }
  }
  for (bool d : detected)
    if (!d) raw -= w.fn;

  const double events = static_cast<double>(windows.size());
  const double null_score = -events * w.fn;
  const double perfect = events * w.tp;
  if (perfect - null_score == 0.0) throw undefined_metric("NAB undefined for zero weights");
  return {100.0 * (raw - null_score) / (perfect - null_score), std::nullopt, Direction::higher_better};
}

}  // namespace tsad
