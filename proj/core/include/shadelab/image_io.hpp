/**
 * @file image_io.hpp
 * @brief PNG and PFM reading/writing.
 *
 * PNG pixels are treated as sRGB-encoded and decoded with the piecewise sRGB
 * transfer function. Raw PNG access (no transfer function) is used for label
 * maps and 16-bit heatmaps. PFM files are written little-endian (scale -1.0)
 * with rows stored bottom-to-top; reading accepts either byte order.
 */
#pragma once

#include <shadelab/image.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace shadelab {

/// Undecoded PNG samples, bit depth 8 or 16, 1 or 3 channels (alpha dropped).
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;
};

double srgb_to_linear(double v);
double linear_to_srgb(double v);

RawImage read_png_raw(const std::filesystem::path& path);
void write_png_raw(const std::filesystem::path& path, const RawImage& img);

/// Reads an 8- or 16-bit PNG and converts it to linear intensity.
LinearImage read_png(const std::filesystem::path& path);

/// sRGB-encodes `img` (clamped to [0, 1]) and writes it with the given bit depth.
void write_png(const std::filesystem::path& path, const LinearImage& img, int bit_depth = 8);

LinearImage read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const LinearImage& img);

/// Single-channel helpers. read_pfm_field rejects 3-channel files.
ScalarField read_pfm_field(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const ScalarField& f);

}  // namespace shadelab
