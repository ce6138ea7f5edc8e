#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "tsad/harness.hpp"
#include "tsad/oracle.hpp"

namespace tsad::testkit {

struct Instance {
  BinarySeries labels;
  BinarySeries pred;
  ScoreSeries score;
  MetricConfig config;
};

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <class T>
T choose(std::mt19937_64& rng, std::initializer_list<T> options) {
  return *(options.begin() + pick(rng, 0, options.size() - 1));
}

/// Runs of ones with random lengths and gaps.
inline BinarySeries random_events(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::uint8_t> v(n, 0);
  std::bernoulli_distribution start(density);
  for (std::size_t i = 0; i < n;) {
    if (start(rng)) {
      const std::size_t len = pick(rng, 1, 8);
      for (std::size_t j = i; j < std::min(n, i + len); ++j) v[j] = 1;
      i += len + 1;
    } else {
      ++i;
    }
  }
  return BinarySeries(std::move(v));
}

/// Prediction loosely correlated with the labels: jittered copies of events plus noise.
inline BinarySeries random_prediction(std::mt19937_64& rng, const BinarySeries& labels) {
  const std::size_t n = labels.size();
  switch (pick(rng, 0, 3)) {
    case 0: return random_events(rng, n, 0.1);
    case 1: {
      std::vector<std::uint8_t> v(labels.begin(), labels.end());
      for (auto& x : v)
        if (std::bernoulli_distribution(0.15)(rng)) x ^= 1;
      return BinarySeries(std::move(v));
    }
    case 2: {
      std::vector<std::uint8_t> v(n, 0);
      const long shift = static_cast<long>(pick(rng, 0, 6)) - 3;
      for (std::size_t i = 0; i < n; ++i) {
        const long j = static_cast<long>(i) + shift;
        if (labels[i] && j >= 0 && j < static_cast<long>(n)) v[static_cast<std::size_t>(j)] = 1;
      }
      return BinarySeries(std::move(v));
    }
    default: {
      std::vector<std::uint8_t> v(n, 0);
      const std::size_t k = pick(rng, 0, std::min<std::size_t>(n, 4));
      for (std::size_t t = 0; t < k; ++t) v[pick(rng, 0, n - 1)] = 1;
      return BinarySeries(std::move(v));
    }
  }
}

/// Scores with frequent ties, sometimes label-informed.
inline ScoreSeries random_score(std::mt19937_64& rng, const BinarySeries& labels) {
  const std::size_t n = labels.size();
  std::vector<double> s(n);
  const bool coarse = std::bernoulli_distribution(0.5)(rng);
  const double signal = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = noise(rng) + signal * labels[i];
    s[i] = coarse ? std::round(v * 2.0) : v;
  }
  return ScoreSeries(std::move(s));
}

inline MetricConfig random_config(std::mt19937_64& rng, MetricId id, std::size_t n) {
  MetricConfig c = positional_config(id);
  c.beta = choose(rng, {0.5, 1.0, 1.0, 2.0});
  c.k = pick(rng, 0, 6);
  c.k_pct = choose(rng, {5.0, 20.0, 33.0, 50.0, 100.0});
  c.n = pick(rng, 1, 4);
  c.tau = pick(rng, 0, 6);
  c.alpha = choose(rng, {0.0, 0.2, 0.5, 1.0});
  c.delta = pick(rng, 0, 6);
  c.theta = choose(rng, {0.2, 0.5, 1.0});
  c.theta_p = choose(rng, {0.1, 0.5, 1.0});
  c.theta_r = choose(rng, {0.1, 0.5, 1.0});
  c.bias = choose(rng, {Bias::flat, Bias::front, Bias::middle, Bias::back});
  c.eta = choose(rng, {0.5, 1.0, 2.0});
  c.ell_max = pick(rng, 0, 5);
  c.k_at = pick(rng, 0, n);
  return c;
}

inline Instance random_instance(std::mt19937_64& rng, MetricId id, std::size_t max_length = 64) {
  const std::size_t n = pick(rng, 1, max_length);
  Instance x{random_events(rng, n, choose(rng, {0.02, 0.08, 0.2})), BinarySeries::zeros(n),
             ScoreSeries(std::vector<double>(n, 0.0)), {}};
  x.pred = random_prediction(rng, x.labels);
  x.score = random_score(rng, x.labels);
  x.config = random_config(rng, id, n);
  return x;
}

inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline std::string series_text(const BinarySeries& s) {
  std::string out;
  for (auto v : s) out += v ? '1' : '0';
  return out;
}

struct Outcome {
  bool passed = true;
  std::size_t compared = 0;
  std::size_t undefined = 0;
  std::string detail;

  void fail(const std::string& what) {
    if (passed) detail = what;
    passed = false;
  }
};

/// Optimised metric against its naive transcription. Undefined cases must be
/// undefined on both sides; they count toward the instance total.
inline Outcome oracle_equivalence(MetricId id, std::size_t instances = 500, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(id) * 7919);
  Outcome o;
  const bool binary = info(id).kind == MetricKind::binary;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto x = random_instance(rng, id);
    std::optional<double> fast, slow;
    bool fast_undef = false, slow_undef = false;
    try {
      fast = binary ? evaluate_binary(id, x.labels, x.pred, x.config).score
                    : evaluate_scores(id, x.labels, x.score, x.config).score;
    } catch (const undefined_metric&) {
      fast_undef = true;
    }
    try {
      slow = binary ? oracle::naive_metric(x.labels, x.pred, id, x.config)
                    : oracle::naive_metric(x.labels, x.score, id, x.config);
    } catch (const undefined_metric&) {
      slow_undef = true;
    }
    ++o.compared;
    if (fast_undef || slow_undef) {
      ++o.undefined;
      if (fast_undef != slow_undef)
        o.fail("definedness differs on labels " + series_text(x.labels) + " pred " + series_text(x.pred));
      continue;
    }
    if (!close(*fast, *slow, 1e-9)) {
      std::ostringstream ss;
      ss.precision(12);
      ss << "instance " << t << ": " << *fast << " vs oracle " << *slow << " labels " << series_text(x.labels)
         << " pred " << series_text(x.pred) << " params " << describe_parameters(id, x.config);
      o.fail(ss.str());
    }
  }
  return o;
}

inline Outcome best_fbeta_exhaustive(std::size_t instances = 500, std::uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto x = random_instance(rng, MetricId::best_fbeta);
    const double beta = x.config.beta;
    const double fast = best_fbeta(x.labels, x.score, beta);
    const double slow = oracle::exhaustive_threshold_max(
        x.labels, x.score, [&](const BinarySeries& l, const BinarySeries& p) { return pw_f(l, p, beta).score; });
    ++o.compared;
    if (fast != slow) {
      std::ostringstream ss;
      ss.precision(17);
      ss << "instance " << t << ": " << fast << " vs exhaustive " << slow;
      o.fail(ss.str());
    }
  }
  return o;
}

/// Strictly increasing transforms must not change any non-binary metric.
inline Outcome monotone_invariance(MetricId id, std::size_t instances = 100, std::uint64_t seed = 5) {
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(id));
  Outcome o;
  for (std::size_t t = 0; t < instances; ++t) {
    auto x = random_instance(rng, id);
    std::vector<double> moved(x.score.size());
    const int kind = static_cast<int>(t % 3);
    for (std::size_t i = 0; i < moved.size(); ++i) {
      const double v = x.score[i];
      moved[i] = kind == 0 ? 3.0 * v + 7.0 : kind == 1 ? std::exp(v / 4.0) : v * v * v + v;
    }
    double a = 0.0, b = 0.0;
    try {
      a = evaluate_scores(id, x.labels, x.score, x.config).score;
    } catch (const undefined_metric&) {
      ++o.undefined;
      continue;
    }
    b = evaluate_scores(id, x.labels, ScoreSeries(moved), x.config).score;
    ++o.compared;
    if (!close(a, b, 1e-12)) o.fail("instance " + std::to_string(t) + ": " + fmt6(a) + " became " + fmt6(b));
  }
  return o;
}

/// Growing one predicted event by a point never lowers seg_f.
inline Outcome seg_extension_monotone(std::size_t instances = 100, std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  Outcome o;
  while (o.compared < instances) {
    const auto x = random_instance(rng, MetricId::seg_f);
    const auto events = extract_events(x.pred);
    if (events.empty()) continue;
    auto grown = events;
    auto& e = grown[pick(rng, 0, grown.size() - 1)];
    const bool left = std::bernoulli_distribution(0.5)(rng);
    if (left && e.start > 0) --e.start;
    else if (e.end + 1 < x.pred.size()) ++e.end;
    else continue;
    const double before = seg_f(x.labels, x.pred).score;
    const double after = seg_f(x.labels, events_to_series(grown, x.pred.size())).score;
    ++o.compared;
    if (after < before - 1e-12) o.fail("extension lowered seg_f from " + fmt6(before) + " to " + fmt6(after));
  }
  return o;
}

inline Outcome pa_at_least_pw(std::size_t instances = 100, std::uint64_t seed = 13) {
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t t = 0; t < instances; ++t) {
    const auto x = random_instance(rng, MetricId::pa_f);
    const double pa = pa_f(x.labels, x.pred).score, pw = pw_f(x.labels, x.pred).score;
    ++o.compared;
    if (pa < pw - 1e-12) o.fail("pa_f " + fmt6(pa) + " < pw_f " + fmt6(pw));
  }
  return o;
}

/// Appending normal points scored below everything: auc_pr unchanged, auc_roc rises.
inline Outcome tn_append_random(std::size_t instances = 100, std::uint64_t seed = 17) {
  std::mt19937_64 rng(seed);
  Outcome o;
  while (o.compared < instances) {
    const auto x = random_instance(rng, MetricId::auc_pr);
    const auto pos = x.labels.count();
    if (pos == 0 || pos == x.labels.size()) continue;
    // needs a negative ranked at or above some positive, otherwise auc_roc is already 1
    const double before_roc = auc_roc(x.labels, x.score);
    if (before_roc >= 1.0) continue;
    std::vector<std::uint8_t> lab(x.labels.begin(), x.labels.end());
    std::vector<double> s = x.score.values();
    double low = *std::min_element(s.begin(), s.end());
    for (std::size_t k = 0, extra = pick(rng, 1, 20); k < extra; ++k) {
      lab.push_back(0);
      s.push_back(low -= 1.0);
    }
    const BinarySeries l2(lab);
    const ScoreSeries s2(s);
    ++o.compared;
    const double pr_a = auc_pr(x.labels, x.score), pr_b = auc_pr(l2, s2);
    const double roc_b = auc_roc(l2, s2);
    if (!close(pr_a, pr_b, 1e-12)) o.fail("auc_pr changed " + fmt6(pr_a) + " -> " + fmt6(pr_b));
    if (!(roc_b > before_roc)) o.fail("auc_roc did not rise " + fmt6(before_roc) + " -> " + fmt6(roc_b));
  }
  return o;
}

struct ImbalanceSeries {
  std::vector<std::size_t> lengths{8, 16, 32, 64};
  std::vector<double> auc_roc, auc_pr, vus_roc;
};

inline ImbalanceSeries imbalance_series() {
  ImbalanceSeries r;
  for (auto n : r.lengths) {
    const auto sc = class_imbalance_scenario(n);
    const auto& s = *sc.candidates.front().score;
    r.auc_roc.push_back(tsad::auc_roc(sc.labels, s));
    r.auc_pr.push_back(tsad::auc_pr(sc.labels, s));
    r.vus_roc.push_back(tsad::vus_roc(sc.labels, s));
  }
  return r;
}

}  // namespace tsad::testkit
