#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tsad/binary_metrics.hpp"

namespace tsad {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double threshold = 0.0;
};

class SmoothedLabels {
 public:
  SmoothedLabels() = default;
  explicit SmoothedLabels(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

namespace detail {

inline void check_scores(const BinarySeries& labels, const ScoreSeries& score) {
  require_non_empty(labels.size());
  require_same_length(labels.size(), score.size());
}

}  // namespace detail

/// Precision of the points scoring at least the K-th largest score. Ties at
/// the cut are all admitted. k == 0 means the number of labelled anomalies.
inline double patk(const BinarySeries& labels, const ScoreSeries& score, std::size_t k = 0) {
  detail::check_scores(labels, score);
  if (k == 0) k = labels.count();
  if (k == 0 || k > labels.size()) throw undefined_metric("P@K: K out of range");
  std::vector<double> sorted = score.values();
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                   std::greater<>());
  const double cut = sorted[k - 1];
  std::size_t admitted = 0, hits = 0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (score[i] >= cut) {
      ++admitted;
      if (labels[i]) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(admitted);
}

/// Best point-wise f-score over every threshold of the score.
inline double best_fbeta(const BinarySeries& labels, const ScoreSeries& score, double beta = 1.0) {
  detail::check_scores(labels, score);
  if (!(beta > 0.0)) throw invalid_input("beta must be positive");
  const double positives = static_cast<double>(labels.count());
  double tp = 0.0, predicted = 0.0;
  double best = fbeta(0.0, 0.0, beta);
  for (const auto& group : detail::rank_groups(score)) {
    for (auto i : group) {
      predicted += 1.0;
      if (labels[i]) tp += 1.0;
    }
    best = std::max(best, fbeta(ratio(tp, predicted), ratio(tp, positives), beta));
  }
  return best;
}

/// Linear ramp 1 - d/(ell+1) within distance ell of an event, max over events.
inline SmoothedLabels smooth_labels(const BinarySeries& labels, std::size_t ell) {
  std::vector<double> v(labels.size(), 0.0);
  if (labels.empty()) return SmoothedLabels(std::move(v));
  const auto d = detail::nearest_set_distance(labels);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (d[i] <= ell) v[i] = 1.0 - static_cast<double>(d[i]) / static_cast<double>(ell + 1);
  return SmoothedLabels(std::move(v));
}

namespace detail {

struct RocPr {
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
};

/// ROC and PR points for real-valued labels. Recall is scaled by the share of
/// label segments (runs of nonzero label) touched by the prediction.
inline RocPr sweep_curves(const std::vector<double>& label, const ScoreSeries& score, bool existence) {
  const std::size_t n = label.size();
  double pos = 0.0, neg = 0.0;
  std::vector<std::size_t> segment(n, static_cast<std::size_t>(-1));
  std::size_t segments = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pos += label[i];
    neg += 1.0 - label[i];
    if (label[i] > 0.0) {
      if (i == 0 || label[i - 1] <= 0.0) ++segments;
      segment[i] = segments - 1;
    }
  }
  std::vector<bool> touched(segments, false);
  std::size_t touched_count = 0;

  RocPr out;
  const auto groups = rank_groups(score);
  const double top = groups.empty() ? 0.0 : score[groups.front().front()];
  out.roc.push_back({0.0, 0.0, top});
  double tp = 0.0, fp = 0.0, predicted = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto i : groups[g]) {
      tp += label[i];
      fp += 1.0 - label[i];
      predicted += 1.0;
      if (segment[i] != static_cast<std::size_t>(-1) && !touched[segment[i]]) {
        touched[segment[i]] = true;
        ++touched_count;
      }
    }
    const double t = g + 1 < groups.size() ? score[groups[g + 1].front()]
                                           : -std::numeric_limits<double>::infinity();
    double recall = std::min(1.0, ratio(tp, pos));
    if (existence) recall *= ratio(static_cast<double>(touched_count), static_cast<double>(segments));
    out.roc.push_back({ratio(fp, neg), recall, t});
    out.pr.push_back({recall, ratio(tp, predicted), t});
  }
  return out;
}

inline double trapezoid(const std::vector<CurvePoint>& roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].x - roc[i - 1].x) * (roc[i].y + roc[i - 1].y) / 2.0;
  return area;
}

/// Right-step average precision.
inline double average_precision(const std::vector<CurvePoint>& pr) {
  double ap = 0.0, prev_recall = 0.0;
  for (const auto& p : pr) {
    ap += (p.x - prev_recall) * p.y;
    prev_recall = p.x;
  }
  return ap;
}

inline std::vector<double> to_real(const BinarySeries& labels) {
  return {labels.begin(), labels.end()};
}

inline void require_two_classes(const BinarySeries& labels) {
  const auto pos = labels.count();
  if (pos == 0 || pos == labels.size()) throw undefined_metric("ROC undefined");
}

inline void require_positive(const BinarySeries& labels) {
  if (labels.count() == 0) throw undefined_metric("PR undefined without positive labels");
}

}  // namespace detail

/// (FPR, TPR) points from the all-normal to the all-anomalous prediction.
inline std::vector<CurvePoint> roc_curve(const BinarySeries& labels, const ScoreSeries& score) {
  detail::check_scores(labels, score);
  detail::require_two_classes(labels);
  return detail::sweep_curves(detail::to_real(labels), score, false).roc;
}

/// (recall, precision) points, one per non-empty threshold set.
inline std::vector<CurvePoint> pr_curve(const BinarySeries& labels, const ScoreSeries& score) {
  detail::check_scores(labels, score);
  detail::require_positive(labels);
  return detail::sweep_curves(detail::to_real(labels), score, false).pr;
}

inline double auc_roc(const BinarySeries& labels, const ScoreSeries& score) {
  return detail::trapezoid(roc_curve(labels, score));
}

inline double auc_pr(const BinarySeries& labels, const ScoreSeries& score) {
  return detail::average_precision(pr_curve(labels, score));
}

namespace detail {

template <class Area>
double volume(const BinarySeries& labels, const ScoreSeries& score, std::size_t ell_max, Area area) {
  check_scores(labels, score);
  require_two_classes(labels);
  double sum = 0.0;
  for (std::size_t ell = 0; ell <= ell_max; ++ell) {
    const auto curves = sweep_curves(smooth_labels(labels, ell).values(), score, true);
    sum += area(curves);
  }
  return sum / static_cast<double>(ell_max + 1);
}

}  // namespace detail

/// Mean ROC area over label smoothing widths 0 .. ell_max.
inline double vus_roc(const BinarySeries& labels, const ScoreSeries& score, std::size_t ell_max = 4) {
  return detail::volume(labels, score, ell_max, [](const detail::RocPr& c) { return detail::trapezoid(c.roc); });
}

/// Mean average precision over label smoothing widths 0 .. ell_max.
inline double vus_pr(const BinarySeries& labels, const ScoreSeries& score, std::size_t ell_max = 4) {
  return detail::volume(labels, score, ell_max,
                        [](const detail::RocPr& c) { return detail::average_precision(c.pr); });
}

}  // namespace tsad
