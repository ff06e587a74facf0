#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <shadelab/error.hpp>
#include <shadelab/filters.hpp>
#include <shadelab/image.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace shadelab;

namespace {

ScalarField field(int w, int h, std::vector<double> v) { return ScalarField(w, h, std::move(v)); }

BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double p) {
    std::bernoulli_distribution b(p);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) x = b(rng);
    return BinaryMask(w, h, std::move(v));
}

std::vector<std::uint8_t> bits(const BinaryMask& m) { return {m.data().begin(), m.data().end()}; }

}  // namespace

TEST(ImageTypes, RejectsBadConstruction) {
    EXPECT_THROW(LinearImage(2, 2, 3, std::vector<double>(11)), InvalidArgument);
    EXPECT_THROW(LinearImage(2, 2, 2, std::vector<double>(8)), InvalidArgument);
    EXPECT_THROW(LinearImage(0, 2, 1, {}), InvalidArgument);
    EXPECT_THROW(ScalarField(2, 1, {1.0, NAN}), InvalidArgument);
    EXPECT_THROW(ScalarField(2, 1, {1.0, INFINITY}), InvalidArgument);
    EXPECT_THROW(BinaryMask(3, 3, std::vector<std::uint8_t>(8)), InvalidArgument);
    EXPECT_NO_THROW(LinearImage(1, 1, 1, {1.7}));  // above 1 is allowed
}

TEST(Luminance, Rec709Weights) {
    const LinearImage img(3, 1, 3, {1, 1, 1, 0, 0, 0, 1, 0, 0});
    const ScalarField lum = luminance(img);
    EXPECT_DOUBLE_EQ(lum.at(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(lum.at(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(lum.at(2, 0), 0.2126);
}

TEST(Luminance, SingleChannelIsCopied) {
    const LinearImage img(2, 1, 1, {0.25, 3.0});
    const ScalarField lum = luminance(img);
    EXPECT_EQ(lum.at(0, 0), 0.25);
    EXPECT_EQ(lum.at(1, 0), 3.0);
}

TEST(GradientMagnitude, ConstantIsZero) {
    const ScalarField g = gradient_magnitude(ScalarField::filled(5, 4, 0.7));
    for (double v : g.data()) EXPECT_EQ(v, 0.0);
}

TEST(GradientMagnitude, UnitRampIsOne) {
    std::vector<double> v(6 * 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 6; ++x) v[y * 6 + x] = x;
    const ScalarField g = gradient_magnitude(field(6, 3, v));
    for (double m : g.data()) EXPECT_DOUBLE_EQ(m, 1.0);
}

TEST(GradientMagnitude, CenterSpikeMatchesHandStencil) {
    const double h = 2.5;
    const ScalarField g = gradient_magnitude(field(3, 3, {0, 0, 0, 0, h, 0, 0, 0, 0}));
    // Forward differences, backward on the last row/column.
    const std::vector<double> expected{0, h, 0, h, h * std::sqrt(2.0), h, 0, h, 0};
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_DOUBLE_EQ(g[i], expected[i]) << i;
}

TEST(GradientMagnitude, DegenerateFieldsThrow) {
    EXPECT_THROW(gradient_magnitude(ScalarField::filled(1, 5, 0.0)), InvalidArgument);
    EXPECT_THROW(gradient_magnitude(ScalarField::filled(5, 1, 0.0)), InvalidArgument);
}

TEST(MaxFilter, SizeOneIsIdentity) {
    std::mt19937_64 rng(1);
    const ScalarField f = fixtures::random_field(rng, 7, 5, -1, 1);
    const ScalarField out = max_filter(f, 1);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(out[i], f[i]);
}

TEST(MaxFilter, ConstantUnchanged) {
    const ScalarField out = max_filter(ScalarField::filled(9, 4, -3.25), 10);
    for (double v : out.data()) EXPECT_EQ(v, -3.25);
}

TEST(MaxFilter, SpikeSpreadsOverEvenWindowTowardPositive) {
    const int w = 30, h = 30;
    std::vector<double> v(w * h, 0.0);
    v[10 * w + 10] = 4.0;
    const ScalarField out = max_filter(field(w, h, v), 10);
    const auto ref = oracle::max_filter(v, w, h, 10);
    std::size_t spread = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            EXPECT_EQ(out.at(x, y), ref[y * w + x]);
            // Window [-4, +5] around (x, y) contains 10 iff x in [5, 14].
            const bool inside = x >= 5 && x <= 14 && y >= 5 && y <= 14;
            EXPECT_EQ(out.at(x, y), inside ? 4.0 : 0.0) << x << "," << y;
            spread += inside;
        }
    }
    EXPECT_EQ(spread, 100u);
}

TEST(MaxFilter, MatchesBruteForceAndDominatesInput) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 17);
        const int h = 1 + static_cast<int>(rng() % 17);
        const int size = 1 + static_cast<int>(rng() % 12);
        const ScalarField f = fixtures::random_field(rng, w, h, -5, 5);
        const std::vector<double> v(f.data().begin(), f.data().end());
        const ScalarField out = max_filter(f, size);
        const auto ref = oracle::max_filter(v, w, h, size);
        for (std::size_t i = 0; i < v.size(); ++i) {
            ASSERT_EQ(out[i], ref[i]);
            ASSERT_GE(out[i], f[i]);
        }
    }
}

TEST(MaxFilter, ZeroSizeThrows) {
    EXPECT_THROW(max_filter(ScalarField::filled(3, 3, 0.0), 0), InvalidArgument);
}

TEST(BinaryErosion, ZeroIterationsIsIdentity) {
    std::mt19937_64 rng(3);
    const BinaryMask m = random_mask(rng, 8, 6, 0.5);
    EXPECT_EQ(binary_erosion(m, 0), m);
}

TEST(BinaryErosion, AllFalseStaysFalse) {
    EXPECT_EQ(binary_erosion(BinaryMask::filled(5, 5, false), 3).count(), 0u);
}

TEST(BinaryErosion, SevenSquareShrinksToCenter) {
    const int w = 11;
    std::vector<std::uint8_t> v(w * w, 0);
    for (int y = 2; y <= 8; ++y)
        for (int x = 2; x <= 8; ++x) v[y * w + x] = 1;
    const BinaryMask out = binary_erosion(BinaryMask(w, w, v), 3);
    EXPECT_EQ(bits(out), oracle::erode(v, w, w, 3));
    EXPECT_EQ(out.count(), 1u);
    EXPECT_TRUE(out.at(5, 5));
}

TEST(BinaryErosion, BorderCountsAsFalse) {
    const BinaryMask out = binary_erosion(BinaryMask::filled(6, 5, true), 1);
    EXPECT_EQ(out.count(), 4u * 3u);
    EXPECT_FALSE(out.at(0, 2));
    EXPECT_TRUE(out.at(1, 1));
}

TEST(BinaryErosion, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 15);
        const int h = 1 + static_cast<int>(rng() % 15);
        const int it = static_cast<int>(rng() % 4);
        const BinaryMask m = random_mask(rng, w, h, 0.8);
        ASSERT_EQ(bits(binary_erosion(m, it)), oracle::erode(bits(m), w, h, it));
    }
}

TEST(BinaryDilation, WindowOneIsIdentity) {
    std::mt19937_64 rng(5);
    const BinaryMask m = random_mask(rng, 9, 4, 0.3);
    EXPECT_EQ(binary_dilation(m, 1), m);
}

TEST(BinaryDilation, SinglePixelBecomesClippedBlock) {
    std::vector<std::uint8_t> v(10 * 10, 0);
    v[5 * 10 + 5] = 1;
    EXPECT_EQ(binary_dilation(BinaryMask(10, 10, v), 5).count(), 25u);
    std::vector<std::uint8_t> corner(10 * 10, 0);
    corner[0] = 1;
    EXPECT_EQ(binary_dilation(BinaryMask(10, 10, corner), 5).count(), 9u);
}

TEST(BinaryDilation, DiagonalPointsUnionOfBlocks) {
    const int w = 10;
    std::vector<std::uint8_t> v(w * w, 0);
    v[2 * w + 2] = 1;
    v[6 * w + 6] = 1;
    const BinaryMask out = binary_dilation(BinaryMask(w, w, v), 5);
    EXPECT_EQ(bits(out), oracle::dilate(v, w, w, 5));
    EXPECT_EQ(out.count(), 49u);  // two 5x5 blocks sharing pixel (4, 4)
}

TEST(BinaryDilation, EvenWindowThrows) {
    EXPECT_THROW(binary_dilation(BinaryMask::filled(3, 3, false), 4), InvalidArgument);
    EXPECT_THROW(binary_dilation(BinaryMask::filled(3, 3, false), 0), InvalidArgument);
}

TEST(Morphology, ErodeThenDilateNeverGrows) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 2 + static_cast<int>(rng() % 20);
        const int h = 2 + static_cast<int>(rng() % 20);
        const BinaryMask m = random_mask(rng, w, h, 0.7);
        const BinaryMask opened = binary_dilation(binary_erosion(m, 1), 3);
        EXPECT_EQ(bits(opened), oracle::dilate(oracle::erode(bits(m), w, h, 1), w, h, 3));
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (opened[i]) ASSERT_TRUE(m[i]);
        }
    }
}

TEST(Resize, WithinBoundUnchanged) {
    const LinearImage img = LinearImage::filled(512, 384, 3, 0.3);
    const LinearImage out = resize_max_dim(img, 512);
    EXPECT_EQ(out.width(), 512);
    EXPECT_EQ(out.height(), 384);
}

TEST(Resize, ExactHalving) {
    std::vector<double> v(1024 * 768);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 1024) / 1024.0;
    const LinearImage out = resize_max_dim(LinearImage(1024, 768, 1, v), 512);
    EXPECT_EQ(out.width(), 512);
    EXPECT_EQ(out.height(), 384);
    // Pixel-center sampling lands between source columns 2x and 2x + 1.
    EXPECT_NEAR(out.at(10, 7), (20.0 + 21.0) / 2.0 / 1024.0, 1e-12);
}

TEST(Resize, ConstantStaysConstant) {
    const LinearImage out = resize_max_dim(LinearImage::filled(733, 419, 3, 0.4217), 100);
    EXPECT_EQ(out.width(), 100);
    for (double v : out.data()) EXPECT_EQ(v, 0.4217);
}

TEST(Resize, MaxDimBoundAndAspect) {
    for (auto [w, h] : std::vector<std::pair<int, int>>{{1000, 3}, {3, 1000}, {640, 480}, {513, 512}, {77, 1301}}) {
        for (int max_dim : {1, 16, 100, 512}) {
            const auto [ow, oh] = fit_max_dim(w, h, max_dim);
            EXPECT_LE(std::max(ow, oh), max_dim);
            if (std::max(w, h) > max_dim) {
                EXPECT_EQ(std::max(ow, oh), max_dim);
                // Aspect ratio preserved within one pixel of rounding.
                if (w >= h) EXPECT_NEAR(oh, h * static_cast<double>(max_dim) / w, 1.0);
                else EXPECT_NEAR(ow, w * static_cast<double>(max_dim) / h, 1.0);
            }
        }
    }
}

TEST(Resize, NearestKeepsMaskBinary) {
    std::vector<std::uint8_t> v(4 * 4, 0);
    v[0] = 1;
    const BinaryMask out = resize_nearest(BinaryMask(4, 4, v), 2, 2);
    EXPECT_EQ(out.count(), 0u);  // samples (1, 1) etc.
    const BinaryMask up = resize_nearest(BinaryMask(4, 4, v), 8, 8);
    EXPECT_EQ(up.count(), 4u);
}
