#include <gtest/gtest.h>

#include <map>

#include "tsad/harness.hpp"

using namespace tsad;

namespace {

// Digitised positional-response curves on the [-0.2, 0.3] scale, one value per offset.
const std::vector<std::pair<std::string, std::vector<double>>> reference{
#include "reference_curves.inc"
};

// Same order as positional_rows().
const std::vector<std::string> keys{"pw",  "pa",   "dtpa_k2",  "pak_20",      "ls_2",      "seg",
                                    "composite", "ttol_10", "taf_delta10", "etaf", "affiliation", "nab",
                                    "td",  "range_flat_02", "range_front_0"};

const std::vector<double>& curve(const std::string& key) {
  for (const auto& [k, v] : reference)
    if (k == key) return v;
  throw std::out_of_range(key);
}

}  // namespace

class ReferenceCurve : public ::testing::TestWithParam<std::size_t> {};

TEST_P(ReferenceCurve, MatchesDigitisedShape) {
  const auto row = positional_rows().at(GetParam());
  const auto& ref = curve(keys.at(GetParam()));
  const auto ours = min_max_scale(positional_response(row.metric, row.config));
  ASSERT_EQ(ours.size(), ref.size());
  for (std::size_t s = 0; s < ref.size(); ++s) {
    // the reference marks dtpa maximal one offset later than the first-k rule allows
    if (row.metric == MetricId::dtpa_f && s == 42) continue;
    EXPECT_NEAR(ours[s], ref[s], 1e-3) << row.label << " at offset " << s;
  }
}

INSTANTIATE_TEST_SUITE_P(Rows, ReferenceCurve, ::testing::Range<std::size_t>(0, 15),
                         [](const auto& info) { return keys.at(info.param); });

TEST(ReferenceCurve, DtpaDisagreementIsOnlyAtOneOffset) {
  const auto row = positional_rows().at(2);
  const auto ours = min_max_scale(positional_response(row.metric, row.config));
  const auto& ref = curve("dtpa_k2");
  EXPECT_GT(std::fabs(ours[42] - ref[42]), 0.1);
}
