#include <shadelab/image.hpp>

#include <shadelab/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace shadelab {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw InvalidArgument("image dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

void check_finite(std::span<const double> data) {
    if (!std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidArgument("image data contains non-finite values");
    }
}

}  // namespace

LinearImage::LinearImage(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_dims(width, height);
    if (channels != 1 && channels != 3) {
        throw InvalidArgument("LinearImage supports 1 or 3 channels, got " +
                              std::to_string(channels));
    }
    if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
        throw InvalidArgument("LinearImage data length does not match width*height*channels");
    }
    check_finite(data_);
}

LinearImage LinearImage::filled(int width, int height, int channels, double value) {
    check_dims(width, height);
    return LinearImage(width, height, channels,
                       std::vector<double>(static_cast<std::size_t>(width) * height * channels,
                                           value));
}

ScalarField::ScalarField(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("ScalarField data length does not match width*height");
    }
    check_finite(data_);
}

ScalarField ScalarField::filled(int width, int height, double value) {
    check_dims(width, height);
    return ScalarField(width, height,
                       std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("BinaryMask data length does not match width*height");
    }
    for (auto& v : data_) v = v ? 1 : 0;
}

BinaryMask BinaryMask::filled(int width, int height, bool value) {
    check_dims(width, height);
    return BinaryMask(width, height,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height,
                                                value ? 1 : 0));
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

ScalarField luminance(const LinearImage& img) {
    if (img.empty()) throw InvalidArgument("luminance of an empty image");
    const std::size_t n = img.pixel_count();
    std::vector<double> out(n);
    auto src = img.data();
    if (img.channels() == 1) {
        std::copy(src.begin(), src.end(), out.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = 0.2126 * src[3 * i] + 0.7152 * src[3 * i + 1] + 0.0722 * src[3 * i + 2];
        }
    }
    return ScalarField(img.width(), img.height(), std::move(out));
}

ScalarField channel(const LinearImage& img, int c) {
    if (c < 0 || c >= img.channels()) throw InvalidArgument("channel index out of range");
    const std::size_t n = img.pixel_count();
    std::vector<double> out(n);
    auto src = img.data();
    for (std::size_t i = 0; i < n; ++i) out[i] = src[i * img.channels() + c];
    return ScalarField(img.width(), img.height(), std::move(out));
}

}  // namespace shadelab
