#include "support/oracles.hpp"

#include <shadelab/error.hpp>
#include <shadelab/eval.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace shadelab;

namespace {

ShadingClass cls_of(int c) { return static_cast<ShadingClass>(c + 1); }

std::vector<LabeledSample> to_samples(const std::vector<oracle::PrSample>& in) {
    std::vector<LabeledSample> out;
    for (std::size_t i = 0; i < in.size(); ++i)
        out.push_back({0, static_cast<int>(i), 0, cls_of(in[i].cls), in[i].score});
    return out;
}

std::vector<oracle::PrSample> random_samples(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_dist(3, 1000);
    std::uniform_int_distribution<int> cls(0, 2);
    std::uniform_int_distribution<int> coarse(0, 20);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int n = n_dist(rng);
    std::vector<oracle::PrSample> s;
    for (int c = 0; c < 3; ++c) s.push_back({c, noise(rng)});
    while (static_cast<int>(s.size()) < n) {
        const int c = cls(rng);
        // Mix in quantized scores so ties are common.
        const double v = rng() % 2 ? coarse(rng) / 10.0 : noise(rng) + (c == 0 ? 0.8 : 0.0);
        s.push_back({c, v});
    }
    std::shuffle(s.begin(), s.end(), rng);
    return s;
}

}  // namespace

TEST(BalanceSpec, ParseAndValidate) {
    const BalanceSpec b = BalanceSpec::parse("2:1:1");
    EXPECT_EQ(b.smooth, 2.0);
    EXPECT_EQ(b.nsnd, 1.0);
    EXPECT_EQ(b.nssb, 1.0);
    const auto f = b.fractions();
    EXPECT_EQ(f[0], 0.5);
    EXPECT_EQ(f[1], 0.25);
    EXPECT_EQ(f[2], 0.25);
    EXPECT_NO_THROW(BalanceSpec::parse("1:1:0").validate());
    EXPECT_THROW(BalanceSpec::parse("2:1"), InvalidArgument);
    EXPECT_THROW(BalanceSpec::parse("2:1:1x"), InvalidArgument);
    EXPECT_THROW(BalanceSpec::parse("0:1:1").validate(), InvalidArgument);
    EXPECT_THROW(BalanceSpec::parse("1:0:0").validate(), InvalidArgument);
    EXPECT_THROW(BalanceSpec::parse("1:-1:1").validate(), InvalidArgument);
}

TEST(CollectSamples, SkipsUnlabeledRowMajor) {
    const SmoothScoreMap scores(2, 2, {0.1, 0.2, 0.3, 0.4}, ScoreKind::Probability);
    const ShadingLabelMap labels(2, 2,
                                 {ShadingClass::Smooth, ShadingClass::Unlabeled, ShadingClass::NsSb,
                                  ShadingClass::NsNd});
    const auto s = collect_samples(scores, labels, 7);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].score, 0.1);
    EXPECT_EQ(s[1].x, 0);
    EXPECT_EQ(s[1].y, 1);
    EXPECT_EQ(s[1].label, ShadingClass::NsSb);
    EXPECT_EQ(s[2].label, ShadingClass::NsNd);
    EXPECT_EQ(s[2].image, 7);
    EXPECT_THROW(collect_samples(scores, ShadingLabelMap::unlabeled(3, 2)), DimensionMismatch);
}

TEST(BalancedPr, PerfectSeparation) {
    std::vector<oracle::PrSample> raw;
    for (int i = 0; i < 10; ++i) raw.push_back({0, 1.0 + i});
    for (int i = 0; i < 30; ++i) raw.push_back({1, -1.0 - i});
    for (int i = 0; i < 5; ++i) raw.push_back({2, -50.0 - i});
    const auto samples = to_samples(raw);
    const PrCurve c = balanced_pr(samples);
    for (const auto& p : c.points)
        if (p.threshold > 0.0) EXPECT_EQ(p.precision, 1.0);
    EXPECT_EQ(precision_at_recall(c, 0.3), 1.0);
    EXPECT_EQ(precision_at_recall(c, 0.7), 1.0);
    EXPECT_EQ(precision_at_recall(c, 1.0), 1.0);
}

TEST(BalancedPr, ConstantPredictorIsHalf) {
    for (auto [ns, nd, sb] : {std::tuple{1, 1, 1}, std::tuple{500, 3, 70}, std::tuple{7, 900, 11}}) {
        std::vector<oracle::PrSample> raw;
        for (int i = 0; i < ns; ++i) raw.push_back({0, 0.25});
        for (int i = 0; i < nd; ++i) raw.push_back({1, 0.25});
        for (int i = 0; i < sb; ++i) raw.push_back({2, 0.25});
        const auto samples = to_samples(raw);
        const PrCurve c = balanced_pr(samples);
        ASSERT_EQ(c.points.size(), 1u);
        EXPECT_EQ(c.points[0].precision, 0.5);
        EXPECT_EQ(c.points[0].recall, 1.0);
    }
}

TEST(BalancedPr, MatchesExhaustiveOracleExactly) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const auto raw = random_samples(rng);
        const std::array<double, 3> ratio{2.0, 1.0, 1.0};
        const auto ref = oracle::balanced_pr(raw, ratio);
        const auto samples = to_samples(raw);
        const PrCurve c = balanced_pr(samples);
        ASSERT_EQ(c.points.size(), ref.size()) << "trial " << trial;
        for (std::size_t k = 0; k < ref.size(); ++k) {
            ASSERT_EQ(c.points[k].threshold, ref[k].threshold);
            ASSERT_EQ(c.points[k].precision, ref[k].precision) << "trial " << trial << " point " << k;
            ASSERT_EQ(c.points[k].recall, ref[k].recall);
        }
    }
}

TEST(BalancedPr, WeightsFollowRatio) {
    std::mt19937_64 rng(103);
    const auto raw = random_samples(rng);
    const auto samples = to_samples(raw);
    const PrCurve c = balanced_pr(samples, BalanceSpec::parse("3:2:1"));
    const std::array<double, 3> share{0.5, 2.0 / 6.0, 1.0 / 6.0};
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(c.class_weights[k] * static_cast<double>(c.class_counts[k]), share[k], 1e-15);
}

TEST(BalancedPr, RecallMonotoneAndEndsAtOne) {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const auto samples = to_samples(random_samples(rng));
        const PrCurve c = balanced_pr(samples);
        for (std::size_t k = 1; k < c.points.size(); ++k) {
            ASSERT_GE(c.points[k].recall, c.points[k - 1].recall);
            ASSERT_LT(c.points[k].threshold, c.points[k - 1].threshold);
        }
        EXPECT_EQ(c.points.back().recall, 1.0);
    }
}

TEST(BalancedPr, SampleOrderDoesNotMatter) {
    std::mt19937_64 rng(109);
    auto raw = random_samples(rng);
    const PrCurve a = balanced_pr(to_samples(raw));
    std::shuffle(raw.begin(), raw.end(), rng);
    const PrCurve b = balanced_pr(to_samples(raw));
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) EXPECT_EQ(a.points[k].precision, b.points[k].precision);
}

TEST(BalancedPr, MissingClassThrows) {
    const auto samples = to_samples({{0, 1.0}, {1, 0.5}});
    EXPECT_THROW(balanced_pr(samples), InvalidArgument);
    EXPECT_NO_THROW(balanced_pr(samples, BalanceSpec::parse("1:1:0")));
}

TEST(PrecisionAtRecall, FirstPointReachingLevel) {
    PrCurve c;
    c.points = {{3.0, 1.0, 0.2}, {2.0, 0.9, 0.5}, {1.0, 0.7, 0.6}};
    EXPECT_EQ(precision_at_recall(c, 0.3), 0.9);
    EXPECT_EQ(precision_at_recall(c, 0.5), 0.9);
    EXPECT_EQ(precision_at_recall(c, 0.6), 0.7);
    EXPECT_FALSE(precision_at_recall(c, 0.7).has_value());
    const auto row = summarize("m", c);
    EXPECT_EQ(row.precision[0], 0.9);
    EXPECT_FALSE(row.precision[2].has_value());
}

TEST(PrCsv, RoundTripIsExact) {
    std::mt19937_64 rng(113);
    const PrCurve c = balanced_pr(to_samples(random_samples(rng)));
    const auto path = std::filesystem::temp_directory_path() / "shadelab_pr_roundtrip.csv";
    write_pr_csv(path, c);
    const PrCurve back = read_pr_csv(path);
    std::filesystem::remove(path);
    ASSERT_EQ(back.points.size(), c.points.size());
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        EXPECT_EQ(back.points[k].threshold, c.points[k].threshold);
        EXPECT_EQ(back.points[k].precision, c.points[k].precision);
        EXPECT_EQ(back.points[k].recall, c.points[k].recall);
    }
}

TEST(TableFormat, MarksUnreachableLevels) {
    PrCurve c;
    c.points = {{1.0, 0.75, 0.4}};
    const std::vector<PrecisionAtRecallRow> rows{summarize("flat", c)};
    const std::string text = format_table(rows);
    EXPECT_NE(text.find("flat"), std::string::npos);
    EXPECT_NE(text.find("n/a"), std::string::npos);
    EXPECT_NE(text.find("0.75"), std::string::npos);
}
