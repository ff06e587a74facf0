#include <shadelab/image_io.hpp>

#include <shadelab/error.hpp>

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace shadelab {

double srgb_to_linear(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err) *err = msg;
    png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

}  // namespace

RawImage read_png_raw(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw IoError(path.string() + " is not a PNG file");
    }

    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    RawImage out;
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode " + path.string() + ": " + message);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.bit_depth = png_get_bit_depth(png, info);

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (out.channels != 1 && out.channels != 3) {
        throw IoError(path.string() + ": unsupported channel count " +
                      std::to_string(out.channels));
    }
    const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(n);
    if (out.bit_depth == 16) {
        for (int y = 0; y < out.height; ++y) {
            const std::size_t per_row = static_cast<std::size_t>(out.width) * out.channels;
            std::memcpy(out.samples.data() + per_row * y, rows[y], per_row * 2);
        }
    } else {
        for (int y = 0; y < out.height; ++y) {
            const std::size_t per_row = static_cast<std::size_t>(out.width) * out.channels;
            for (std::size_t i = 0; i < per_row; ++i) {
                out.samples[per_row * y + i] = rows[y][i];
            }
        }
    }
    return out;
}

void write_png_raw(const std::filesystem::path& path, const RawImage& img) {
    if (img.channels != 1 && img.channels != 3) {
        throw InvalidArgument("write_png_raw supports 1 or 3 channels");
    }
    if (img.bit_depth != 8 && img.bit_depth != 16) {
        throw InvalidArgument("write_png_raw supports bit depth 8 or 16");
    }
    if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
        throw InvalidArgument("write_png_raw sample count mismatch");
    }

    const int bytes = img.bit_depth / 8;
    const std::size_t rowbytes = static_cast<std::size_t>(img.width) * img.channels * bytes;
    std::vector<unsigned char> buffer(rowbytes * img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        if (bytes == 1) {
            buffer[i] = static_cast<unsigned char>(std::min<std::uint16_t>(img.samples[i], 255));
        } else {
            // PNG stores 16-bit samples big-endian.
            buffer[2 * i] = static_cast<unsigned char>(img.samples[i] >> 8);
            buffer[2 * i + 1] = static_cast<unsigned char>(img.samples[i] & 0xff);
        }
    }
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) rows[y] = buffer.data() + rowbytes * y;

    FilePtr file = open_file(path, "wb");
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode " + path.string() + ": " + message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), img.bit_depth,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

LinearImage read_png(const std::filesystem::path& path) {
    const RawImage raw = read_png_raw(path);
    const double max_value = raw.bit_depth == 16 ? 65535.0 : 255.0;
    std::vector<double> data(raw.samples.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = srgb_to_linear(raw.samples[i] / max_value);
    }
    return LinearImage(raw.width, raw.height, raw.channels, std::move(data));
}

void write_png(const std::filesystem::path& path, const LinearImage& img, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw InvalidArgument("bit depth must be 8 or 16");
    const double max_value = bit_depth == 16 ? 65535.0 : 255.0;
    RawImage raw{img.width(), img.height(), img.channels(), bit_depth, {}};
    raw.samples.resize(img.data().size());
    for (std::size_t i = 0; i < raw.samples.size(); ++i) {
        const double v = linear_to_srgb(std::clamp(img.data()[i], 0.0, 1.0));
        raw.samples[i] = static_cast<std::uint16_t>(std::lround(v * max_value));
    }
    write_png_raw(path, raw);
}

namespace {

float byteswap_float(float v) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
           ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
    return std::bit_cast<float>(bits);
}

}  // namespace

LinearImage read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    std::string magic;
    int width = 0;
    int height = 0;
    double scale = 0.0;
    in >> magic >> width >> height >> scale;
    if (!in || (magic != "PF" && magic != "Pf")) {
        throw IoError(path.string() + " is not a PFM file");
    }
    if (width <= 0 || height <= 0 || scale == 0.0) {
        throw IoError(path.string() + ": bad PFM header");
    }
    in.get();  // single whitespace byte before the raster

    const int channels = magic == "PF" ? 3 : 1;
    const std::size_t n = static_cast<std::size_t>(width) * height * channels;
    std::vector<float> raster(n);
    in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float)) {
        throw IoError(path.string() + ": truncated PFM raster");
    }

    const bool file_little = scale < 0.0;
    const bool swap = file_little != (std::endian::native == std::endian::little);
    std::vector<double> data(n);
    const std::size_t per_row = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        // PFM rows run bottom-to-top.
        const std::size_t src_row = static_cast<std::size_t>(height - 1 - y) * per_row;
        for (std::size_t i = 0; i < per_row; ++i) {
            float v = raster[src_row + i];
            if (swap) v = byteswap_float(v);
            data[static_cast<std::size_t>(y) * per_row + i] = v;
        }
    }
    return LinearImage(width, height, channels, std::move(data));
}

void write_pfm(const std::filesystem::path& path, const LinearImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (img.channels() == 3 ? "PF" : "Pf") << '\n'
        << img.width() << ' ' << img.height() << '\n'
        << "-1.0\n";

    const std::size_t per_row = static_cast<std::size_t>(img.width()) * img.channels();
    std::vector<float> row(per_row);
    for (int y = img.height() - 1; y >= 0; --y) {
        for (std::size_t i = 0; i < per_row; ++i) {
            float v = static_cast<float>(img.data()[static_cast<std::size_t>(y) * per_row + i]);
            if constexpr (std::endian::native != std::endian::little) v = byteswap_float(v);
            row[i] = v;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(per_row * sizeof(float)));
    }
    if (!out) throw IoError("failed writing " + path.string());
}

ScalarField read_pfm_field(const std::filesystem::path& path) {
    LinearImage img = read_pfm(path);
    if (img.channels() != 1) throw IoError(path.string() + ": expected a single-channel PFM");
    return ScalarField(img.width(), img.height(),
                       std::vector<double>(img.data().begin(), img.data().end()));
}

void write_pfm(const std::filesystem::path& path, const ScalarField& f) {
    write_pfm(path, LinearImage(f.width(), f.height(), 1,
                                std::vector<double>(f.data().begin(), f.data().end())));
}

}  // namespace shadelab
