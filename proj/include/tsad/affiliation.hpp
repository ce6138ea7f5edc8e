#pragma once

#include <algorithm>
#include <vector>

#include "tsad/binary_metrics.hpp"

namespace tsad {

namespace detail {

struct Span {
  double lo;
  double hi;
};

/// Integral of max(0, m*x + c) over [u, v].
inline double ramp_integral(double m, double c, double u, double v) {
  if (v <= u) return 0.0;
  auto f = [&](double x) { return m * x + c; };
  if (m == 0.0) return std::max(0.0, c) * (v - u);
  const double root = -c / m;
  if (m > 0.0) {
    const double lo = std::max(u, root);
    return lo >= v ? 0.0 : (v - lo) * (f(lo) + f(v)) / 2.0;
  }
  const double hi = std::min(v, root);
  return hi <= u ? 0.0 : (hi - u) * (f(u) + f(hi)) / 2.0;
}

/// Integral over [u, v] of the precision survival function: the chance that a
/// uniform point of zone [e1, e2) lies at least as far from J = [a, b) as x.
inline double precision_survival_integral(double u, double v, double a, double b, double e1, double e2) {
  double total = 0.0;
  const double in_lo = std::max(u, a), in_hi = std::min(v, b);
  if (in_hi > in_lo) total += (in_hi - in_lo) * (e2 - e1);
  if (u < a) {
    const double hi = std::min(v, a);
    total += ramp_integral(1.0, -e1, u, hi) + ramp_integral(1.0, e2 - a - b, u, hi);
  }
  if (v > b) {
    const double lo = std::max(u, b);
    total += ramp_integral(-1.0, a + b - e1, lo, v) + ramp_integral(-1.0, e2, lo, v);
  }
  return total / (e2 - e1);
}

/// Integral over J = [a, b) of the recall survival function against the
/// predicted spans of the zone (sorted, disjoint).
inline double recall_survival_integral(double a, double b, const std::vector<Span>& pred, double e1, double e2) {
  std::vector<double> cuts{a, b};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cuts.push_back(pred[i].lo);
    cuts.push_back(pred[i].hi);
    if (i + 1 < pred.size()) cuts.push_back((pred[i].hi + pred[i + 1].lo) / 2.0);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double u = std::max(a, cuts[c]), v = std::min(b, cuts[c + 1]);
    if (v <= u) continue;
    const double mid = (u + v) / 2.0;
    bool inside = false;
    const Span* left = nullptr;
    const Span* right = nullptr;
    for (const auto& s : pred) {
      if (s.lo <= mid && mid < s.hi) inside = true;
      if (s.hi <= mid) left = &s;
      if (s.lo >= mid && right == nullptr) right = &s;
    }
    if (inside) {
      total += (v - u) * (e2 - e1);
    } else if (left != nullptr && (right == nullptr || mid - left->hi <= right->lo - mid)) {
      const double c0 = left->hi;  // distance y - c0
      total += std::max(0.0, c0 - e1) * (v - u) + ramp_integral(-2.0, e2 + c0, u, v);
    } else {
      const double c0 = right->lo;  // distance c0 - y
      total += ramp_integral(2.0, -c0 - e1, u, v) + std::max(0.0, e2 - c0) * (v - u);
    }
  }
  return total / (e2 - e1);
}

}  // namespace detail

/// Affiliation precision/recall. Points are unit cells [i, i+1); the time
/// axis [0, n) is split into zones at the midpoints between label events.
/// Zones without predictions are left out of the precision mean and count
/// zero towards recall.
inline MetricResult affiliation_f(const BinarySeries& labels, const BinarySeries& pred, double beta = 1.0) {
  detail::check_pair(labels, pred);
  const auto real = extract_events(labels);
  if (real.empty()) throw undefined_metric("affiliation undefined");
  const auto predicted = extract_events(pred);
  const double n = static_cast<double>(labels.size());

  double p_sum = 0.0, r_sum = 0.0;
  std::size_t p_zones = 0;
  for (std::size_t k = 0; k < real.size(); ++k) {
    const double a = static_cast<double>(real[k].start);
    const double b = static_cast<double>(real[k].end + 1);
    const double e1 = k == 0 ? 0.0 : (static_cast<double>(real[k - 1].end + 1) + a) / 2.0;
    const double e2 = k + 1 == real.size() ? n : (b + static_cast<double>(real[k + 1].start)) / 2.0;

    std::vector<detail::Span> spans;
    for (const auto& e : predicted) {
      const double lo = std::max(e1, static_cast<double>(e.start));
      const double hi = std::min(e2, static_cast<double>(e.end + 1));
      if (hi > lo) spans.push_back({lo, hi});
    }
    if (spans.empty()) continue;

    double covered = 0.0, integral = 0.0;
    for (const auto& s : spans) {
      covered += s.hi - s.lo;
      integral += detail::precision_survival_integral(s.lo, s.hi, a, b, e1, e2);
    }
    p_sum += integral / covered;
    ++p_zones;
    r_sum += detail::recall_survival_integral(a, b, spans, e1, e2) / (b - a);
  }
  const double precision = ratio(p_sum, static_cast<double>(p_zones));
  const double recall = r_sum / static_cast<double>(real.size());
  return detail::from_prf(make_prf(precision, recall, beta));
}

}  // namespace tsad
