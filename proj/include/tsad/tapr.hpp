#pragma once

#include <cmath>
#include <vector>

#include "tsad/binary_metrics.hpp"

namespace tsad {

/// Credit for a predicted point j steps after the end of a labelled event,
/// j = 0 .. delta-1. Sigmoid decay from ~1 down to ~0.
inline double ambiguous_weight(std::size_t j, std::size_t delta) {
  return 1.0 / (1.0 + std::exp(12.0 * static_cast<double>(j) / static_cast<double>(delta) - 6.0));
}

namespace detail {

/// Per (label event, predicted event) overlap, plus decayed credit for
/// predicted points in the delta region after the label event. The region
/// stops at the next label event and at the end of the series.
inline std::vector<std::vector<double>> tapr_overlap(const EventList& real, const EventList& predicted,
                                                     std::size_t length, std::size_t delta) {
  std::vector<std::vector<double>> m(real.size(), std::vector<double>(predicted.size(), 0.0));
  for (std::size_t a = 0; a < real.size(); ++a) {
    const std::size_t stop = a + 1 < real.size() ? real[a + 1].start : length;
    const std::size_t amb_end = std::min(stop, real[a].end + 1 + delta);  // exclusive
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      const auto& pe = predicted[p];
      const std::size_t lo = std::max(real[a].start, pe.start), hi = std::min(real[a].end, pe.end);
      if (lo <= hi) m[a][p] += static_cast<double>(hi - lo + 1);
      const std::size_t alo = std::max(real[a].end + 1, pe.start);
      const std::size_t ahi = std::min(amb_end, pe.end + 1);
      for (std::size_t i = alo; i < ahi; ++i) m[a][p] += ambiguous_weight(i - real[a].end - 1, delta);
    }
  }
  return m;
}

}  // namespace detail

/// Time-series aware precision/recall. Each side mixes a detection term
/// (share of events whose credited mass reaches theta) and a portion term
/// (mean credited share), weighted by alpha.
inline MetricResult taf(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                        double alpha = 0.5, std::size_t delta = 0, double theta = 0.5) {
  detail::check_pair(labels, pred);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw invalid_input("alpha must be in [0, 1]");
  if (!(theta > 0.0 && theta <= 1.0)) throw invalid_input("theta must be in (0, 1]");
  const auto real = extract_events(labels);
  const auto predicted = extract_events(pred);
  if (real.empty() || predicted.empty()) return detail::from_prf(make_prf(0.0, 0.0, beta));
  const auto m = detail::tapr_overlap(real, predicted, labels.size(), delta);

  double r_det = 0.0, r_por = 0.0;
  for (std::size_t a = 0; a < real.size(); ++a) {
    double s = 0.0;
    for (std::size_t p = 0; p < predicted.size(); ++p) s += m[a][p];
    const double share = std::min(1.0, s / static_cast<double>(real[a].length()));
    r_det += share >= theta ? 1.0 : 0.0;
    r_por += share;
  }
  double p_det = 0.0, p_por = 0.0;
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    double s = 0.0;
    for (std::size_t a = 0; a < real.size(); ++a) s += m[a][p];
    const double share = std::min(1.0, s / static_cast<double>(predicted[p].length()));
    p_det += share >= theta ? 1.0 : 0.0;
    p_por += share;
  }
  const double na = static_cast<double>(real.size()), np = static_cast<double>(predicted.size());
  const double recall = alpha * r_det / na + (1.0 - alpha) * r_por / na;
  const double precision = alpha * p_det / np + (1.0 - alpha) * p_por / np;
  return detail::from_prf(make_prf(precision, recall, beta));
}

/// Enhanced time-series aware score. Predictions whose overlap share is below
/// theta_p and label events whose coverage is below theta_r are pruned
/// repeatedly until nothing changes; precision weights predicted events by
/// the square root of their length.
inline MetricResult etaf(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0,
                         double theta_p = 0.5, double theta_r = 0.1) {
  detail::check_pair(labels, pred);
  if (!(theta_p > 0.0 && theta_p <= 1.0)) throw invalid_input("theta_p must be in (0, 1]");
  if (!(theta_r > 0.0 && theta_r <= 1.0)) throw invalid_input("theta_r must be in (0, 1]");
  const auto real = extract_events(labels);
  const auto predicted = extract_events(pred);
  if (real.empty() || predicted.empty()) return detail::from_prf(make_prf(0.0, 0.0, beta));
  const auto m = detail::tapr_overlap(real, predicted, labels.size(), 0);

  std::vector<bool> keep_a(real.size(), true), keep_p(predicted.size(), true);
  auto row = [&](std::size_t a) {
    double s = 0.0;
    for (std::size_t p = 0; p < predicted.size(); ++p)
      if (keep_p[p]) s += m[a][p];
    return s;
  };
  auto col = [&](std::size_t p) {
    double s = 0.0;
    for (std::size_t a = 0; a < real.size(); ++a)
      if (keep_a[a]) s += m[a][p];
    return s;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      if (keep_p[p] && col(p) / static_cast<double>(predicted[p].length()) < theta_p) {
        keep_p[p] = false;
        changed = true;
      }
    }
    for (std::size_t a = 0; a < real.size(); ++a) {
      if (keep_a[a] && row(a) / static_cast<double>(real[a].length()) < theta_r) {
        keep_a[a] = false;
        changed = true;
      }
    }
  }

  double recall = 0.0;
  for (std::size_t a = 0; a < real.size(); ++a) {
    if (!keep_a[a]) continue;
    const double s = row(a);
    recall += ((s > 0.0 ? 1.0 : 0.0) + std::min(1.0, s / static_cast<double>(real[a].length()))) / 2.0;
  }
  recall /= static_cast<double>(real.size());

  double weighted = 0.0, weights = 0.0;
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    const double len = static_cast<double>(predicted[p].length());
    const double w = std::sqrt(len);
    weights += w;
    if (!keep_p[p]) continue;
    const double s = col(p);
    weighted += w * ((s > 0.0 ? 1.0 : 0.0) + std::min(1.0, s / len)) / 2.0;
  }
  return detail::from_prf(make_prf(weighted / weights, recall, beta));
}

}  // namespace tsad
