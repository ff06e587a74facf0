#include <shadelab/annotation_json.hpp>
#include <shadelab/error.hpp>
#include <shadelab/image_io.hpp>
#include <shadelab/retinex.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace shadelab;
namespace fs = std::filesystem;

namespace {

class ImageIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("shadelab_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

}  // namespace

TEST(Srgb, TransferFunctionRoundTrip) {
    EXPECT_DOUBLE_EQ(srgb_to_linear(0.0), 0.0);
    EXPECT_DOUBLE_EQ(srgb_to_linear(1.0), 1.0);
    EXPECT_NEAR(srgb_to_linear(0.5), 0.214041140, 1e-9);
    for (int i = 0; i <= 255; ++i) {
        const double v = i / 255.0;
        EXPECT_NEAR(linear_to_srgb(srgb_to_linear(v)), v, 1e-12);
    }
}

TEST_F(ImageIo, PfmRoundTripIsLosslessForFloatValues) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(-10.0f, 10.0f);
    std::vector<double> rgb(5 * 3 * 3);
    for (auto& v : rgb) v = u(rng);
    const LinearImage img(5, 3, 3, rgb);
    write_pfm(dir_ / "a.pfm", img);
    const LinearImage back = read_pfm(dir_ / "a.pfm");
    ASSERT_EQ(back.width(), 5);
    ASSERT_EQ(back.height(), 3);
    ASSERT_EQ(back.channels(), 3);
    for (std::size_t i = 0; i < rgb.size(); ++i) EXPECT_EQ(back.data()[i], rgb[i]);

    const ScalarField f(2, 2, {0.0, 0.25, 0.5, 1.0});
    write_pfm(dir_ / "b.pfm", f);
    const ScalarField fb = read_pfm_field(dir_ / "b.pfm");
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(fb[i], f[i]);
    EXPECT_THROW(read_pfm_field(dir_ / "a.pfm"), IoError);
}

TEST_F(ImageIo, PfmHeaderIsLittleEndianBottomUp) {
    write_pfm(dir_ / "c.pfm", ScalarField(1, 2, {1.0, 2.0}));
    std::ifstream in(dir_ / "c.pfm", std::ios::binary);
    std::string magic, scale;
    int w = 0, h = 0;
    in >> magic >> w >> h >> scale;
    in.get();
    float first = 0.0f;
    in.read(reinterpret_cast<char*>(&first), 4);
    EXPECT_EQ(magic, "Pf");
    EXPECT_EQ(scale, "-1.0");
    EXPECT_EQ(first, 2.0f);  // bottom row stored first
}

TEST_F(ImageIo, ReadsBigEndianPfm) {
    {
        std::ofstream out(dir_ / "be.pfm", std::ios::binary);
        out << "Pf\n1 1\n1.0\n";
        const unsigned char bytes[4] = {0x3f, 0x80, 0x00, 0x00};  // 1.0f big-endian
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    EXPECT_EQ(read_pfm_field(dir_ / "be.pfm")[0], 1.0);
}

TEST_F(ImageIo, RejectsTruncatedPfm) {
    {
        std::ofstream out(dir_ / "t.pfm", std::ios::binary);
        out << "Pf\n4 4\n-1.0\n";
        out.write("abcd", 4);
    }
    EXPECT_THROW(read_pfm(dir_ / "t.pfm"), IoError);
    EXPECT_THROW(read_pfm(dir_ / "missing.pfm"), IoError);
}

TEST_F(ImageIo, PngRawRoundTrip8And16) {
    RawImage a{3, 2, 3, 8, {0, 1, 2, 3, 4, 5, 250, 251, 252, 253, 254, 255, 9, 8, 7, 6, 5, 4}};
    write_png_raw(dir_ / "a.png", a);
    const RawImage ab = read_png_raw(dir_ / "a.png");
    EXPECT_EQ(ab.samples, a.samples);
    EXPECT_EQ(ab.bit_depth, 8);

    RawImage b{2, 2, 1, 16, {0, 1, 65534, 65535}};
    write_png_raw(dir_ / "b.png", b);
    const RawImage bb = read_png_raw(dir_ / "b.png");
    EXPECT_EQ(bb.samples, b.samples);
    EXPECT_EQ(bb.bit_depth, 16);
}

TEST_F(ImageIo, PngDecodesThroughSrgb) {
    write_png_raw(dir_ / "g.png", RawImage{2, 1, 1, 8, {0, 255}});
    const LinearImage img = read_png(dir_ / "g.png");
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_EQ(img.at(1, 0), 1.0);

    const LinearImage lin(2, 1, 1, {0.214041140, 0.5});
    write_png(dir_ / "h.png", lin, 16);
    const LinearImage back = read_png(dir_ / "h.png");
    EXPECT_NEAR(back.at(0, 0), 0.214041140, 1e-4);
    EXPECT_NEAR(back.at(1, 0), 0.5, 1e-4);
}

TEST_F(ImageIo, RejectsNonPng) {
    std::ofstream(dir_ / "x.png") << "not a png";
    EXPECT_THROW(read_png(dir_ / "x.png"), IoError);
}

TEST_F(ImageIo, LabelPngRoundTrip) {
    const ShadingLabelMap labels(
        2, 2, {ShadingClass::Unlabeled, ShadingClass::Smooth, ShadingClass::NsNd, ShadingClass::NsSb});
    write_label_png(dir_ / "l.png", labels);
    EXPECT_EQ(read_label_png(dir_ / "l.png"), labels);
    EXPECT_EQ(read_png_raw(dir_ / "l.png").samples, (std::vector<std::uint16_t>{0, 1, 2, 3}));

    write_png_raw(dir_ / "bad.png", RawImage{1, 1, 1, 8, {7}});
    EXPECT_THROW(read_label_png(dir_ / "bad.png"), IoError);
}

TEST_F(ImageIo, HeatmapFromSixteenBitPng) {
    write_png_raw(dir_ / "h_heat.png", RawImage{3, 1, 1, 16, {0, 32768, 65535}});
    const HeatMap heat = read_heatmap(dir_ / "h_heat.png");
    EXPECT_EQ(heat[0], 0.0);
    EXPECT_DOUBLE_EQ(heat[1], 32768.0 / 65535.0);
    EXPECT_EQ(heat[2], 1.0);

    write_pfm(dir_ / "bad_heat.pfm", ScalarField(1, 1, {1.5}));
    EXPECT_THROW(read_heatmap(dir_ / "bad_heat.pfm"), InvalidArgument);
}
