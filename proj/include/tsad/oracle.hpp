#pragma once

// Slow reference versions of every metric, written straight from the
// definitions and sharing no code with the optimised implementations beyond
// the value types. Meant for series of at most a few dozen points.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "tsad/registry.hpp"

namespace tsad::oracle {

namespace detail {

struct Run {
  std::size_t s, e;  // inclusive
};

inline std::vector<Run> runs(const std::vector<int>& v) {
  std::vector<Run> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    if (i > 0 && v[i - 1]) {
      out.back().e = i;
    } else {
      out.push_back({i, i});
    }
  }
  return out;
}

inline std::vector<int> ints(const BinarySeries& s) { return {s.begin(), s.end()}; }

inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline double f_of(double p, double r, double beta) {
  if (p == 0.0 && r == 0.0) return 0.0;
  return (1.0 + beta * beta) * p * r / (beta * beta * p + r);
}

inline double pointwise(const std::vector<int>& l, const std::vector<int>& p, double beta) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    tp += l[i] && p[i];
    fp += !l[i] && p[i];
    fn += l[i] && !p[i];
  }
  return f_of(safe_div(tp, tp + fp), safe_div(tp, tp + fn), beta);
}

/// The label event containing i, found by walking outwards.
inline Run event_at(const std::vector<int>& l, std::size_t i) {
  std::size_t s = i, e = i;
  while (s > 0 && l[s - 1]) --s;
  while (e + 1 < l.size() && l[e + 1]) ++e;
  return {s, e};
}

inline std::size_t hits_in(const std::vector<int>& p, Run r) {
  std::size_t h = 0;
  for (std::size_t i = r.s; i <= r.e; ++i) h += p[i];
  return h;
}

inline std::size_t dist(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

inline bool touches(const std::vector<int>& v, Run r) { return hits_in(v, r) > 0; }

inline double measure_inside(double lo, double hi, double e1, double e2) {
  return std::max(0.0, std::min(hi, e2) - std::max(lo, e1));
}

}  // namespace detail

/// Distance from each element of a to its closest element of b; every
/// distance is series_length when b is empty.
inline std::vector<std::size_t> naive_nearest_distance(const std::vector<std::size_t>& a,
                                                       const std::vector<std::size_t>& b,
                                                       std::size_t series_length) {
  std::vector<std::size_t> out;
  for (auto x : a) {
    std::size_t best = series_length;
    bool found = false;
    for (auto y : b) {
      const auto d = detail::dist(x, y);
      if (!found || d < best) best = d;
      found = true;
    }
    out.push_back(best);
  }
  return out;
}

/// Max of a binary metric over every prediction a threshold can produce.
template <class Metric>
double exhaustive_threshold_max(const BinarySeries& labels, const ScoreSeries& score, Metric&& metric) {
  double best = metric(labels, BinarySeries::zeros(score.size()));
  for (std::size_t t = 0; t < score.size(); ++t) {
    std::vector<std::uint8_t> flags(score.size());
    for (std::size_t i = 0; i < score.size(); ++i) flags[i] = score[i] >= score[t] ? 1 : 0;
    best = std::max(best, metric(labels, BinarySeries(std::move(flags))));
  }
  return best;
}

namespace detail {

inline double naive_affiliation(const std::vector<int>& l, const std::vector<int>& p, double beta) {
  const auto ev = runs(l);
  if (ev.empty()) throw undefined_metric("affiliation undefined");
  const double n = static_cast<double>(l.size());
  std::vector<double> z{0.0};
  for (std::size_t k = 1; k < ev.size(); ++k) z.push_back((ev[k - 1].e + 1 + ev[k].s) / 2.0);
  z.push_back(n);

  const std::size_t zones = ev.size();
  std::vector<double> p_int(zones, 0.0), p_len(zones, 0.0), r_int(zones, 0.0);
  std::vector<bool> has_pred(zones, false);
  for (std::size_t k = 0; k < zones; ++k)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[j] && measure_inside(j, j + 1.0, z[k], z[k + 1]) > 0) has_pred[k] = true;

  const double h = 1.0 / 8.0;
  const auto cells = static_cast<std::size_t>(n / h);
  for (std::size_t c = 0; c < cells; ++c) {
    const double x = (c + 0.5) * h;
    const auto cell = static_cast<std::size_t>(std::floor(x));
    std::size_t k = 0;
    while (!(z[k] <= x && x < z[k + 1])) ++k;
    const double e1 = z[k], e2 = z[k + 1], len = e2 - e1;
    const double a = ev[k].s, b = ev[k].e + 1.0;

    if (p[cell]) {
      const double d = x < a ? a - x : (x >= b ? x - b : 0.0);
      const double surv = d == 0.0 ? 1.0 : (len - measure_inside(a - d, b + d, e1, e2)) / len;
      p_int[k] += surv * h;
      p_len[k] += h;
    }
    if (l[cell] && has_pred[k]) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (!p[j]) continue;
        const double lo = std::max<double>(j, e1), hi = std::min<double>(j + 1.0, e2);
        if (hi <= lo) continue;
        d = std::min(d, x < lo ? lo - x : (x >= hi ? x - hi : 0.0));
      }
      r_int[k] += (len - measure_inside(x - d, x + d, e1, e2)) / len * h;
    }
  }
  double ps = 0.0, rs = 0.0;
  int pz = 0;
  for (std::size_t k = 0; k < zones; ++k) {
    if (p_len[k] > 0) {
      ps += p_int[k] / p_len[k];
      ++pz;
    }
    rs += r_int[k] / (ev[k].e - ev[k].s + 1.0);
  }
  return f_of(safe_div(ps, pz), rs / zones, beta);
}

inline double naive_nab(const std::vector<int>& l, const std::vector<int>& p, const MetricConfig& c) {
  const auto win = runs(l);
  if (win.empty()) throw undefined_metric("NAB undefined without labelled events");
  for (auto w : win)
    if (w.s == w.e) throw undefined_metric("NAB undefined for point anomalies");
  auto sig = [](double x) { return x > 3.0 ? -1.0 : 2.0 * (1.0 / (1.0 + std::exp(5.0 * x))) - 1.0; };
  double raw = 0.0;
  for (auto w : win) {
    bool found = false;
    for (std::size_t i = w.s; i <= w.e && !found; ++i) {
      if (!p[i]) continue;
      found = true;
      const double pos = -double(w.e - i + 1) / double(w.e - w.s + 1);
      raw += c.w_tp * sig(pos) / sig(-1.0);
    }
    if (!found) raw -= c.w_fn;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i] || l[i]) continue;
    const Run* prev = nullptr;
    for (const auto& w : win)
      if (w.e < i) prev = &w;
    if (prev == nullptr) raw -= c.w_fp;
    else raw += c.w_fp * sig(double(i - prev->e) / double(prev->e - prev->s));
  }
  const double k = static_cast<double>(win.size());
  return 100.0 * (raw + k * c.w_fn) / (k * c.w_tp + k * c.w_fn);
}

inline double naive_taf(const std::vector<int>& l, const std::vector<int>& p, const MetricConfig& c) {
  const auto A = runs(l), P = runs(p);
  if (A.empty() || P.empty()) return 0.0;
  // credit of point i of the series towards label event a
  auto credit = [&](std::size_t a, std::size_t i) {
    if (A[a].s <= i && i <= A[a].e) return 1.0;
    if (i <= A[a].e) return 0.0;
    const std::size_t j = i - A[a].e - 1;
    if (j >= c.delta) return 0.0;
    if (a + 1 < A.size() && i >= A[a + 1].s) return 0.0;
    return 1.0 / (1.0 + std::exp(12.0 * j / c.delta - 6.0));
  };
  double rd = 0, rp = 0, pd = 0, pp = 0;
  for (std::size_t a = 0; a < A.size(); ++a) {
    double s = 0;
    for (const auto& q : P)
      for (std::size_t i = q.s; i <= q.e; ++i) s += credit(a, i);
    const double share = std::min(1.0, s / (A[a].e - A[a].s + 1));
    rd += share >= c.theta;
    rp += share;
  }
  for (const auto& q : P) {
    double s = 0;
    for (std::size_t a = 0; a < A.size(); ++a)
      for (std::size_t i = q.s; i <= q.e; ++i) s += credit(a, i);
    const double share = std::min(1.0, s / (q.e - q.s + 1));
    pd += share >= c.theta;
    pp += share;
  }
  const double r = c.alpha * rd / A.size() + (1 - c.alpha) * rp / A.size();
  const double pr = c.alpha * pd / P.size() + (1 - c.alpha) * pp / P.size();
  return f_of(pr, r, c.beta);
}

inline double naive_etaf(const std::vector<int>& l, const std::vector<int>& p, const MetricConfig& c) {
  const auto A = runs(l), P = runs(p);
  if (A.empty() || P.empty()) return 0.0;
  auto ov = [](Run x, Run y) {
    double o = 0;
    for (std::size_t i = x.s; i <= x.e; ++i) o += (y.s <= i && i <= y.e);
    return o;
  };
  std::vector<int> alive_a(A.size(), 1), alive_p(P.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < P.size(); ++j) {
      if (!alive_p[j]) continue;
      double s = 0;
      for (std::size_t i = 0; i < A.size(); ++i) s += alive_a[i] ? ov(A[i], P[j]) : 0;
      if (s / (P[j].e - P[j].s + 1) < c.theta_p) alive_p[j] = 0, changed = true;
    }
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (!alive_a[i]) continue;
      double s = 0;
      for (std::size_t j = 0; j < P.size(); ++j) s += alive_p[j] ? ov(A[i], P[j]) : 0;
      if (s / (A[i].e - A[i].s + 1) < c.theta_r) alive_a[i] = 0, changed = true;
    }
  }
  double r = 0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!alive_a[i]) continue;
    double s = 0;
    for (std::size_t j = 0; j < P.size(); ++j) s += alive_p[j] ? ov(A[i], P[j]) : 0;
    r += ((s > 0) + std::min(1.0, s / (A[i].e - A[i].s + 1))) / 2;
  }
  r /= A.size();
  double num = 0, den = 0;
  for (std::size_t j = 0; j < P.size(); ++j) {
    const double len = P[j].e - P[j].s + 1;
    den += std::sqrt(len);
    if (!alive_p[j]) continue;
    double s = 0;
    for (std::size_t i = 0; i < A.size(); ++i) s += alive_a[i] ? ov(A[i], P[j]) : 0;
    num += std::sqrt(len) * ((s > 0) + std::min(1.0, s / len)) / 2;
  }
  return f_of(num / den, r, c.beta);
}

inline double naive_range(const std::vector<int>& l, const std::vector<int>& p, const MetricConfig& c) {
  auto weight = [&](std::size_t i, std::size_t len) -> double {
    switch (c.bias) {
      case Bias::flat: return 1;
      case Bias::front: return double(len - i + 1);
      case Bias::back: return double(i);
      case Bias::middle: return double(i <= len - i + 1 ? i : len - i + 1);
    }
    return 1;
  };
  auto side = [&](const std::vector<int>& from, const std::vector<int>& against) {
    const auto ev = runs(from);
    double total = 0;
    for (auto e : ev) {
      const std::size_t len = e.e - e.s + 1;
      double num = 0, den = 0;
      for (std::size_t i = e.s; i <= e.e; ++i) {
        den += weight(i - e.s + 1, len);
        if (against[i]) num += weight(i - e.s + 1, len);
      }
      total += c.alpha * (num > 0) + (1 - c.alpha) * num / den;
    }
    return safe_div(total, ev.size());
  };
  return f_of(side(p, l), side(l, p), c.beta);
}

}  // namespace detail

/// Reference value of a binary metric.
inline double naive_metric(const BinarySeries& labels, const BinarySeries& pred, MetricId id,
                           const MetricConfig& c = {}) {
  using namespace detail;
  c.validate();
  if (labels.empty()) throw invalid_input("empty input");
  if (labels.size() != pred.size()) throw invalid_input("length mismatch");
  const auto l = ints(labels), p = ints(pred);
  const std::size_t n = l.size();

  auto adjusted = [&](auto rule) {
    std::vector<int> out = p;
    for (std::size_t i = 0; i < n; ++i)
      if (l[i]) out[i] = rule(event_at(l, i), i);
    return out;
  };

  switch (id) {
    case MetricId::pw_f: return pointwise(l, p, c.beta);
    case MetricId::pa_f:
      return pointwise(l, adjusted([&](Run r, std::size_t i) { return touches(p, r) ? 1 : p[i]; }), c.beta);
    case MetricId::dtpa_f:
      return pointwise(l, adjusted([&](Run r, std::size_t) {
                         for (std::size_t j = r.s; j <= r.e && j < r.s + c.k; ++j)
                           if (p[j]) return 1;
                         return 0;
                       }),
                       c.beta);
    case MetricId::pak_f:
      return pointwise(l, adjusted([&](Run r, std::size_t i) {
                         const double share = 100.0 * hits_in(p, r) / (r.e - r.s + 1);
                         return share >= c.k_pct ? 1 : p[i];
                       }),
                       c.beta);
    case MetricId::ls_f: {
      const auto adj = adjusted([&](Run r, std::size_t i) {
        for (std::size_t j = r.s; j <= i; ++j)
          if (p[j]) return 1;
        return p[i];
      });
      std::vector<int> dl, dp;
      for (std::size_t b = 0; b * c.n < n; ++b) {
        int x = 0, y = 0;
        for (std::size_t i = b * c.n; i < std::min(n, (b + 1) * c.n); ++i) x |= l[i], y |= adj[i];
        dl.push_back(x);
        dp.push_back(y);
      }
      return pointwise(dl, dp, c.beta);
    }
    case MetricId::seg_f:
    case MetricId::composite_f: {
      double tp = 0, fn = 0, fp = 0;
      for (auto r : runs(l)) (touches(p, r) ? tp : fn) += 1;
      for (auto r : runs(p)) fp += !touches(l, r);
      const double recall = safe_div(tp, tp + fn);
      if (id == MetricId::seg_f) return f_of(safe_div(tp, tp + fp), recall, c.beta);
      double ptp = 0, pfp = 0;
      for (std::size_t i = 0; i < n; ++i) ptp += l[i] && p[i], pfp += !l[i] && p[i];
      return f_of(safe_div(ptp, ptp + pfp), recall, c.beta);
    }
    case MetricId::ttol_f: {
      auto near = [&](const std::vector<int>& v, std::size_t i) {
        for (std::size_t j = 0; j < n; ++j)
          if (v[j] && dist(i, j) <= c.tau) return true;
        return false;
      };
      double ph = 0, pa = 0, lh = 0, la = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (p[i]) pa += 1, ph += near(l, i);
        if (l[i]) la += 1, lh += near(p, i);
      }
      return f_of(safe_div(ph, pa), safe_div(lh, la), c.beta);
    }
    case MetricId::range_f: return naive_range(l, p, c);
    case MetricId::taf: return naive_taf(l, p, c);
    case MetricId::etaf: return naive_etaf(l, p, c);
    case MetricId::affiliation_f: return naive_affiliation(l, p, c.beta);
    case MetricId::nab: return naive_nab(l, p, c);
    case MetricId::temporal_distance: {
      const auto li = labels.indices(), pi = pred.indices();
      double total = 0;
      for (auto d : naive_nearest_distance(li, pi, n)) total += std::pow(double(d), c.eta);
      for (auto d : naive_nearest_distance(pi, li, n)) total += std::pow(double(d), c.eta);
      return total;
    }
    default: break;
  }
  throw invalid_input("not a binary metric");
}

namespace detail {

struct Sweep {
  std::vector<double> fpr, recall, precision;  // one entry per distinct score, descending
};

/// Evaluates each prediction `score >= v` directly; label values may be real.
inline Sweep naive_sweep(const std::vector<double>& lab, const ScoreSeries& score, bool existence) {
  std::vector<double> values = score.values();
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<int> support(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i) support[i] = lab[i] > 0;
  const auto segs = runs(support);
  double pos = 0, neg = 0;
  for (double v : lab) pos += v, neg += 1 - v;
  Sweep s;
  for (double v : values) {
    double tp = 0, fp = 0, count = 0;
    for (std::size_t i = 0; i < lab.size(); ++i)
      if (score[i] >= v) tp += lab[i], fp += 1 - lab[i], count += 1;
    double touched = 0;
    for (auto r : segs) {
      bool hit = false;
      for (std::size_t i = r.s; i <= r.e; ++i) hit = hit || score[i] >= v;
      touched += hit;
    }
    double rec = std::min(1.0, safe_div(tp, pos));
    if (existence) rec *= safe_div(touched, segs.size());
    s.fpr.push_back(safe_div(fp, neg));
    s.recall.push_back(rec);
    s.precision.push_back(safe_div(tp, count));
  }
  return s;
}

inline double sweep_roc(const Sweep& s) {
  double area = 0, x = 0, y = 0;
  for (std::size_t i = 0; i < s.fpr.size(); ++i) {
    area += (s.fpr[i] - x) * (s.recall[i] + y) / 2;
    x = s.fpr[i];
    y = s.recall[i];
  }
  return area;
}

inline double sweep_ap(const Sweep& s) {
  double ap = 0, prev = 0;
  for (std::size_t i = 0; i < s.recall.size(); ++i) {
    ap += (s.recall[i] - prev) * s.precision[i];
    prev = s.recall[i];
  }
  return ap;
}

inline std::vector<double> naive_smooth(const BinarySeries& labels, std::size_t ell) {
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j)
      if (labels[j] && dist(i, j) <= ell) out[i] = std::max(out[i], 1.0 - double(dist(i, j)) / (ell + 1.0));
  return out;
}

}  // namespace detail

/// Reference value of a score-based metric.
inline double naive_metric(const BinarySeries& labels, const ScoreSeries& score, MetricId id,
                           const MetricConfig& c = {}) {
  using namespace detail;
  c.validate();
  if (labels.empty()) throw invalid_input("empty input");
  if (labels.size() != score.size()) throw invalid_input("length mismatch");
  const std::size_t n = labels.size(), pos = labels.count();
  const bool two_classes = pos > 0 && pos < n;
  switch (id) {
    case MetricId::patk: {
      const std::size_t k = c.k_at == 0 ? pos : c.k_at;
      if (k == 0 || k > n) throw undefined_metric("P@K: K out of range");
      std::vector<double> v = score.values();
      std::sort(v.begin(), v.end(), std::greater<>());
      double hit = 0, all = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (score[i] >= v[k - 1]) all += 1, hit += labels[i];
      return hit / all;
    }
    case MetricId::best_fbeta:
      return exhaustive_threshold_max(labels, score, [&](const BinarySeries& l, const BinarySeries& p) {
        return pointwise(ints(l), ints(p), c.beta);
      });
    case MetricId::auc_roc: {
      if (!two_classes) throw undefined_metric("ROC undefined");
      double wins = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (labels[i] && !labels[j]) wins += score[i] > score[j] ? 1.0 : (score[i] == score[j] ? 0.5 : 0.0);
      return wins / (double(pos) * double(n - pos));
    }
    case MetricId::auc_pr: {
      if (pos == 0) throw undefined_metric("PR undefined without positive labels");
      std::vector<double> lab(labels.begin(), labels.end());
      return sweep_ap(naive_sweep(lab, score, false));
    }
    case MetricId::vus_roc:
    case MetricId::vus_pr: {
      if (!two_classes) throw undefined_metric("ROC undefined");
      double total = 0;
      for (std::size_t ell = 0; ell <= c.ell_max; ++ell) {
        const auto s = naive_sweep(naive_smooth(labels, ell), score, true);
        total += id == MetricId::vus_roc ? sweep_roc(s) : sweep_ap(s);
      }
      return total / (c.ell_max + 1.0);
    }
    default: break;
  }
  throw invalid_input("not a score metric");
}

}  // namespace tsad::oracle
