#include <gtest/gtest.h>

#include <random>

#include "tsad/core.hpp"

using namespace tsad;

TEST(Series, RejectsNonBinaryValues) {
  EXPECT_THROW(BinarySeries(std::vector<std::uint8_t>{0, 2}), invalid_input);
  EXPECT_THROW((BinarySeries{0, 1, 3}), invalid_input);
  EXPECT_THROW(BinarySeries::from_indices(3, {3}), invalid_input);
}

TEST(Series, ScoresMustBeFinite) {
  EXPECT_THROW(ScoreSeries({1.0, std::nan("")}), invalid_input);
  EXPECT_THROW(ScoreSeries({std::numeric_limits<double>::infinity()}), invalid_input);
}

TEST(ExtractEvents, MaximalRuns) {
  EXPECT_EQ(extract_events(BinarySeries{0, 1, 1, 0, 1}), (EventList{{1, 2}, {4, 4}}));
  EXPECT_TRUE(extract_events(BinarySeries{0, 0, 0}).empty());
  EXPECT_EQ(extract_events(BinarySeries{1, 1, 1}), (EventList{{0, 2}}));
}

TEST(ExtractEvents, RoundTripsThroughSeries) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint8_t> v(1 + rng() % 40);
    for (auto& x : v) x = rng() % 3 == 0;
    const BinarySeries s(v);
    EXPECT_EQ(events_to_series(extract_events(s), s.size()), s);
  }
  EXPECT_THROW(events_to_series({{2, 5}}, 5), invalid_input);
}

TEST(PointConfusion, S2Counts) {
  const auto labels = events_to_series({{7, 19}}, 30);
  const auto pred = BinarySeries::from_indices(30, {13, 14, 24, 25});
  EXPECT_EQ(point_confusion(labels, pred), (ConfusionCounts{2, 2, 11, 15}));
}

TEST(PointConfusion, TrivialCases) {
  const BinarySeries l{0, 1, 1, 0};
  const auto c = point_confusion(l, l);
  EXPECT_EQ(c.fp, 0u);
  EXPECT_EQ(c.fn, 0u);
  EXPECT_EQ(point_confusion(BinarySeries::zeros(4), BinarySeries{1, 1, 1, 1}), (ConfusionCounts{0, 4, 0, 0}));
  EXPECT_THROW(point_confusion(l, BinarySeries{0, 1}), invalid_input);
}

TEST(PointConfusion, TalliesSumToLength) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::uint8_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng() & 1, b[i] = rng() & 1;
    const auto c = point_confusion(BinarySeries(a), BinarySeries(b));
    EXPECT_EQ(c.tp + c.fp + c.fn + c.tn, n);
  }
}

TEST(Fbeta, Values) {
  EXPECT_NEAR(fbeta(0.5, 2.0 / 13.0, 1.0), 0.235, 5e-4);
  EXPECT_DOUBLE_EQ(fbeta(1.0, 1.0, 1.0), 1.0);
  EXPECT_NEAR(fbeta(10.0 / 11.0, 1.0, 1.0), 0.9524, 5e-5);
  EXPECT_DOUBLE_EQ(fbeta(0.0, 0.0, 1.0), 0.0);
  // standard form (1+b^2)PR/(b^2 P + R)
  EXPECT_DOUBLE_EQ(fbeta(0.5, 0.25, 2.0), 5.0 * 0.125 / (4.0 * 0.5 + 0.25));
  EXPECT_THROW(fbeta(0.5, 0.5, 0.0), invalid_input);
}

TEST(Fbeta, SymmetricAndMonotone) {
  for (double p = 0.0; p <= 1.0; p += 0.1)
    for (double r = 0.0; r <= 1.0; r += 0.1) {
      EXPECT_DOUBLE_EQ(fbeta(p, r, 1.0), fbeta(r, p, 1.0));
      EXPECT_LE(fbeta(p, r, 2.0), fbeta(std::min(1.0, p + 0.1), r, 2.0) + 1e-15);
      EXPECT_LE(fbeta(p, r, 2.0), fbeta(p, std::min(1.0, r + 0.1), 2.0) + 1e-15);
    }
}

TEST(Adjust, S2Modes) {
  const auto labels = events_to_series({{7, 19}}, 30);
  const auto pred = BinarySeries::from_indices(30, {13, 14, 24, 25});
  EXPECT_EQ(adjust_prediction(labels, pred, FullAdjust{}), events_to_series({{7, 19}, {24, 25}}, 30));
  EXPECT_EQ(adjust_prediction(labels, pred, DelayAdjust{2}), events_to_series({{24, 25}}, 30));
  EXPECT_EQ(adjust_prediction(labels, pred, LatencyAdjust{}), events_to_series({{13, 19}, {24, 25}}, 30));
  EXPECT_EQ(adjust_prediction(labels, pred, PortionAdjust{20}), pred);
  EXPECT_EQ(adjust_prediction(labels, pred, PortionAdjust{10}), events_to_series({{7, 19}, {24, 25}}, 30));
}

TEST(Adjust, FullNeverLowersPointwiseCounts) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::uint8_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng() % 3 == 0, b[i] = rng() % 4 == 0;
    const BinarySeries l(a), p(b);
    const auto adj = adjust_prediction(l, p, FullAdjust{});
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i]) {
        EXPECT_TRUE(adj[i]);
      }
      if (adj[i] && !p[i]) {
        EXPECT_TRUE(l[i]);
      }
    }
    const auto before = prf_from_counts(point_confusion(l, p), 1.0);
    const auto after = prf_from_counts(point_confusion(l, adj), 1.0);
    EXPECT_GE(after.precision, before.precision - 1e-15);
    EXPECT_GE(after.recall, before.recall - 1e-15);
  }
}

TEST(Downsample, BlockOr) {
  EXPECT_EQ(downsample_or(BinarySeries{0, 1, 0, 0}, 2), (BinarySeries{1, 0}));
  EXPECT_EQ(downsample_or(BinarySeries{1, 0, 0}, 2), (BinarySeries{1, 0}));
  const BinarySeries s{0, 1, 1, 0, 1};
  EXPECT_EQ(downsample_or(s, 1), s);
  EXPECT_THROW(downsample_or(s, 0), invalid_input);
}

TEST(ThresholdSweep, DistinctValues) {
  const auto sweep = threshold_sweep(ScoreSeries{3, 1, 2});
  ASSERT_EQ(sweep.size(), 4u);
  EXPECT_EQ(sweep[0].prediction, (BinarySeries{0, 0, 0}));
  EXPECT_EQ(sweep[1].prediction, (BinarySeries{1, 0, 0}));
  EXPECT_EQ(sweep[2].prediction, (BinarySeries{1, 0, 1}));
  EXPECT_EQ(sweep[3].prediction, (BinarySeries{1, 1, 1}));
  // strict comparison: each set is {score > threshold}
  for (const auto& t : sweep)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.prediction[i], (ScoreSeries{3, 1, 2})[i] > t.threshold);
}

TEST(ThresholdSweep, ConstantScore) {
  const auto sweep = threshold_sweep(ScoreSeries{5, 5, 5, 5});
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_EQ(sweep[0].prediction.count(), 0u);
  EXPECT_EQ(sweep[1].prediction.count(), 4u);
}

TEST(ThresholdSweep, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(1 + rng() % 30), b;
    for (auto& x : a) x = static_cast<double>(rng() % 7);
    for (double x : a) b.push_back(std::exp(x) + 2.0);
    const auto s1 = threshold_sweep(ScoreSeries(a)), s2 = threshold_sweep(ScoreSeries(b));
    ASSERT_EQ(s1.size(), s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i].prediction, s2[i].prediction);
  }
}

TEST(Config, ValidationAndBias) {
  MetricConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), invalid_input);
  EXPECT_EQ(parse_bias("middle"), Bias::middle);
  EXPECT_EQ(to_string(Bias::back), "back");
  EXPECT_THROW(parse_bias("centre"), invalid_input);
}

TEST(Errors, Messages) {
  try {
    require_same_length(3, 4);
    FAIL();
  } catch (const invalid_input& e) {
    EXPECT_STREQ(e.what(), "length mismatch (3 vs 4)");
  }
  EXPECT_THROW(require_non_empty(0), invalid_input);
}
