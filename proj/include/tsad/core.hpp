#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tsad {

/// Malformed input: empty series, length mismatch, bad parameter values.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but the metric has no defined value for it.
class undefined_metric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BinarySeries {
 public:
  BinarySeries() = default;

  explicit BinarySeries(std::vector<std::uint8_t> flags) : flags_(std::move(flags)) {
    for (auto f : flags_)
      if (f > 1) throw invalid_input("binary series values must be 0 or 1");
  }

  BinarySeries(std::initializer_list<int> flags) {
    flags_.reserve(flags.size());
    for (int f : flags) {
      if (f != 0 && f != 1) throw invalid_input("binary series values must be 0 or 1");
      flags_.push_back(static_cast<std::uint8_t>(f));
    }
  }

  static BinarySeries zeros(std::size_t length) {
    return BinarySeries(std::vector<std::uint8_t>(length, 0));
  }

  static BinarySeries from_indices(std::size_t length, std::span<const std::size_t> indices) {
    std::vector<std::uint8_t> flags(length, 0);
    for (auto i : indices) {
      if (i >= length) throw invalid_input("index outside series");
      flags[i] = 1;
    }
    return BinarySeries(std::move(flags));
  }

  static BinarySeries from_indices(std::size_t length, std::initializer_list<std::size_t> indices) {
    return from_indices(length, std::span<const std::size_t>(indices.begin(), indices.size()));
  }

  std::size_t size() const noexcept { return flags_.size(); }
  bool empty() const noexcept { return flags_.empty(); }
  bool operator[](std::size_t i) const noexcept { return flags_[i] != 0; }
  const std::vector<std::uint8_t>& values() const noexcept { return flags_; }
  auto begin() const noexcept { return flags_.begin(); }
  auto end() const noexcept { return flags_.end(); }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags_.size(); ++i)
      if (flags_[i]) out.push_back(i);
    return out;
  }

  bool operator==(const BinarySeries&) const = default;

 private:
  std::vector<std::uint8_t> flags_;
};

class ScoreSeries {
 public:
  ScoreSeries() = default;

  explicit ScoreSeries(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
      if (!std::isfinite(v)) throw invalid_input("scores must be finite");
  }

  ScoreSeries(std::initializer_list<double> values) : ScoreSeries(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool operator==(const ScoreSeries&) const = default;

 private:
  std::vector<double> values_;
};

/// Inclusive index interval.
struct Event {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start + 1; }
  bool contains(std::size_t i) const noexcept { return start <= i && i <= end; }
  bool operator==(const Event&) const = default;
};

using EventList = std::vector<Event>;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

enum class Bias { flat, front, back, middle };

inline std::string_view to_string(Bias b) {
  switch (b) {
    case Bias::flat: return "flat";
    case Bias::front: return "front";
    case Bias::back: return "back";
    case Bias::middle: return "middle";
  }
  return "flat";
}

inline Bias parse_bias(std::string_view s) {
  if (s == "flat") return Bias::flat;
  if (s == "front") return Bias::front;
  if (s == "back") return Bias::back;
  if (s == "middle") return Bias::middle;
  throw invalid_input("unknown bias '" + std::string(s) + "'");
}

/// Parameters for every metric. Defaults follow the common experiment setup;
/// k_at == 0 means "number of labelled anomalous points".
struct MetricConfig {
  double beta = 1.0;
  std::size_t k = 2;
  double k_pct = 20.0;
  std::size_t n = 2;
  std::size_t tau = 2;
  double alpha = 0.5;
  std::size_t delta = 0;
  double theta = 0.5;
  double theta_p = 0.5;
  double theta_r = 0.1;
  Bias bias = Bias::flat;
  double eta = 1.0;
  std::size_t ell_max = 4;
  std::size_t k_at = 0;
  double w_tp = 1.0;
  double w_fp = 0.11;
  double w_fn = 1.0;

  void validate() const {
    auto fail = [](const char* what) { throw invalid_input(std::string("invalid parameter: ") + what); };
    if (!(beta > 0.0) || !std::isfinite(beta)) fail("beta must be positive");
    if (!(k_pct > 0.0 && k_pct <= 100.0)) fail("K_pct must be in (0, 100]");
    if (n == 0) fail("n must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must be in [0, 1]");
    if (!(theta > 0.0 && theta <= 1.0)) fail("theta must be in (0, 1]");
    if (!(theta_p > 0.0 && theta_p <= 1.0)) fail("theta_p must be in (0, 1]");
    if (!(theta_r > 0.0 && theta_r <= 1.0)) fail("theta_r must be in (0, 1]");
    if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta must be positive");
    if (!std::isfinite(w_tp) || !std::isfinite(w_fp) || !std::isfinite(w_fn)) fail("NAB weights must be finite");
  }
};

inline void require_non_empty(std::size_t length) {
  if (length == 0) throw invalid_input("empty input");
}

inline void require_same_length(std::size_t a, std::size_t b) {
  if (a != b)
    throw invalid_input("length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

inline EventList extract_events(const BinarySeries& series) {
  require_non_empty(series.size());
  EventList events;
  const std::size_t n = series.size();
  std::size_t i = 0;
  while (i < n) {
    if (!series[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && series[j + 1]) ++j;
    events.push_back({i, j});
    i = j + 1;
  }
  return events;
}

inline BinarySeries events_to_series(const EventList& events, std::size_t length) {
  std::vector<std::uint8_t> flags(length, 0);
  for (const auto& e : events) {
    if (e.start > e.end || e.end >= length) throw invalid_input("event outside series");
    std::fill(flags.begin() + static_cast<std::ptrdiff_t>(e.start),
              flags.begin() + static_cast<std::ptrdiff_t>(e.end) + 1, std::uint8_t{1});
  }
  return BinarySeries(std::move(flags));
}

inline ConfusionCounts point_confusion(const BinarySeries& labels, const BinarySeries& pred) {
  require_same_length(labels.size(), pred.size());
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool l = labels[i], p = pred[i];
    if (l && p) ++c.tp;
    else if (p) ++c.fp;
    else if (l) ++c.fn;
    else ++c.tn;
  }
  return c;
}

/// 0 / 0 is taken as 0 so that every score is total.
inline double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline double fbeta(double precision, double recall, double beta) {
  if (!(beta > 0.0)) throw invalid_input("beta must be positive");
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  if (den <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / den;
}

inline PRF make_prf(double precision, double recall, double beta) {
  return {precision, recall, fbeta(precision, recall, beta)};
}

inline PRF prf_from_counts(const ConfusionCounts& c, double beta) {
  return make_prf(ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp)),
                  ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn)), beta);
}

struct FullAdjust {};
struct DelayAdjust {
  std::size_t k = 2;
};
struct PortionAdjust {
  double k_pct = 20.0;
};
struct LatencyAdjust {};

using AdjustMode = std::variant<FullAdjust, DelayAdjust, PortionAdjust, LatencyAdjust>;

namespace detail {
template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;
}  // namespace detail

inline BinarySeries adjust_prediction(const BinarySeries& labels, const BinarySeries& pred,
                                      const AdjustMode& mode) {
  require_same_length(labels.size(), pred.size());
  if (labels.empty()) return pred;
  std::vector<std::uint8_t> out = pred.values();
  for (const auto& ev : extract_events(labels)) {
    std::size_t hits = 0;
    std::size_t first = ev.end + 1;
    for (std::size_t i = ev.start; i <= ev.end; ++i) {
      if (pred[i]) {
        if (hits == 0) first = i;
        ++hits;
      }
    }
    auto fill = [&](std::size_t from, std::uint8_t v) {
      for (std::size_t i = from; i <= ev.end; ++i) out[i] = v;
    };
    std::visit(detail::overloaded{
                   [&](FullAdjust) {
                     if (hits > 0) fill(ev.start, 1);
                   },
                   [&](DelayAdjust d) {
                     // a hit within the first k points marks the event, anything later clears it
                     fill(ev.start, hits > 0 && first - ev.start < d.k ? 1 : 0);
                   },
                   [&](PortionAdjust p) {
                     if (100.0 * static_cast<double>(hits) >= p.k_pct * static_cast<double>(ev.length()))
                       fill(ev.start, 1);
                   },
                   [&](LatencyAdjust) {
                     if (hits > 0) fill(first, 1);
                   }},
               mode);
  }
  return BinarySeries(std::move(out));
}

inline BinarySeries downsample_or(const BinarySeries& series, std::size_t n) {
  if (n == 0) throw invalid_input("downsample factor must be at least 1");
  std::vector<std::uint8_t> out((series.size() + n - 1) / n, 0);
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i]) out[i / n] = 1;
  return BinarySeries(std::move(out));
}

struct ThresholdSet {
  double threshold = 0.0;
  BinarySeries prediction;
};

namespace detail {

/// Indices grouped by equal score, highest score first.
inline std::vector<std::vector<std::size_t>> rank_groups(const ScoreSeries& score) {
  std::vector<std::size_t> order(score.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r == 0 || score[order[r]] != score[order[r - 1]]) groups.emplace_back();
    groups.back().push_back(order[r]);
  }
  return groups;
}

}  // namespace detail

/// Every distinct prediction `score > t`, from all-normal to all-anomalous.
/// The last entry has threshold -inf.
inline std::vector<ThresholdSet> threshold_sweep(const ScoreSeries& score) {
  std::vector<ThresholdSet> out;
  const auto groups = detail::rank_groups(score);
  std::vector<std::uint8_t> flags(score.size(), 0);
  if (groups.empty()) {
    out.push_back({-std::numeric_limits<double>::infinity(), BinarySeries{}});
    return out;
  }
  out.push_back({score[groups.front().front()], BinarySeries(flags)});
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto i : groups[g]) flags[i] = 1;
    const double t = g + 1 < groups.size() ? score[groups[g + 1].front()]
                                           : -std::numeric_limits<double>::infinity();
    out.push_back({t, BinarySeries(flags)});
  }
  return out;
}

}  // namespace tsad
