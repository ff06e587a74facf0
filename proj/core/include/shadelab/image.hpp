/**
 * @file image.hpp
 * @brief Value-type image containers: LinearImage, ScalarField, BinaryMask.
 *
 * All containers are row-major, immutable after construction and validated
 * on construction (size and finiteness). Pixel (x, y) lives at index
 * y * width + x; multi-channel images interleave channels.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shadelab {

/// H x W x C image in linear intensity. Values are nominally in [0, 1]
/// but anything finite is accepted.
class LinearImage {
public:
    LinearImage() = default;
    LinearImage(int width, int height, int channels, std::vector<double> data);

    static LinearImage filled(int width, int height, int channels, double value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    double at(int x, int y, int c = 0) const noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::span<const double> data() const noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Single-channel real field (luminance, log intensity, gradient magnitude, ...).
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int width, int height, std::vector<double> data);

    static ScalarField filled(int width, int height, double value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double at(int x, int y) const noexcept {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    std::span<const double> data() const noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Per-pixel boolean mask. Stored as bytes (0 / 1).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, std::vector<std::uint8_t> data);

    static BinaryMask filled(int width, int height, bool value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool at(int x, int y) const noexcept {
        return data_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    bool operator[](std::size_t i) const noexcept { return data_[i] != 0; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    std::size_t count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Rec. 709 luminance (0.2126 R + 0.7152 G + 0.0722 B). A 1-channel image is copied.
ScalarField luminance(const LinearImage& img);

/// Returns the given channel of an image as a field.
ScalarField channel(const LinearImage& img, int c);

}  // namespace shadelab
