#include <shadelab/filters.hpp>

#include <shadelab/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace shadelab {

std::pair<ScalarField, ScalarField> forward_gradient(const ScalarField& f) {
    const int w = f.width();
    const int h = f.height();
    if (w < 2 || h < 2) {
        throw InvalidArgument("gradient needs at least a 2x2 field, got " + std::to_string(w) +
                              "x" + std::to_string(h));
    }
    std::vector<double> dx(f.size());
    std::vector<double> dy(f.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            dx[i] = x + 1 < w ? f.at(x + 1, y) - f.at(x, y) : f.at(x, y) - f.at(x - 1, y);
            dy[i] = y + 1 < h ? f.at(x, y + 1) - f.at(x, y) : f.at(x, y) - f.at(x, y - 1);
        }
    }
    return {ScalarField(w, h, std::move(dx)), ScalarField(w, h, std::move(dy))};
}

ScalarField gradient_magnitude(const ScalarField& f) {
    auto [dx, dy] = forward_gradient(f);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(dx[i], dy[i]);
    return ScalarField(f.width(), f.height(), std::move(out));
}

ScalarField max_filter(const ScalarField& f, int size) {
    if (size < 1) throw InvalidArgument("max_filter size must be >= 1");
    const int w = f.width();
    const int h = f.height();
    const int lo = (size - 1) / 2;
    const int hi = size / 2;

    // Rectangular max is separable: rows first, then columns.
    std::vector<double> rows(f.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - lo);
            const int x1 = std::min(w - 1, x + hi);
            double m = f.at(x0, y);
            for (int xx = x0 + 1; xx <= x1; ++xx) m = std::max(m, f.at(xx, y));
            rows[static_cast<std::size_t>(y) * w + x] = m;
        }
    }
    std::vector<double> out(f.size());
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - lo);
        const int y1 = std::min(h - 1, y + hi);
        for (int x = 0; x < w; ++x) {
            double m = rows[static_cast<std::size_t>(y0) * w + x];
            for (int yy = y0 + 1; yy <= y1; ++yy) {
                m = std::max(m, rows[static_cast<std::size_t>(yy) * w + x]);
            }
            out[static_cast<std::size_t>(y) * w + x] = m;
        }
    }
    return ScalarField(w, h, std::move(out));
}

BinaryMask binary_erosion(const BinaryMask& m, int iterations) {
    if (iterations < 0) throw InvalidArgument("erosion iterations must be >= 0");
    const int w = m.width();
    const int h = m.height();
    std::vector<std::uint8_t> cur(m.data().begin(), m.data().end());
    std::vector<std::uint8_t> next(cur.size());
    for (int it = 0; it < iterations; ++it) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::uint8_t keep = 1;
                for (int dy = -1; dy <= 1 && keep; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int xx = x + dx;
                        const int yy = y + dy;
                        if (xx < 0 || yy < 0 || xx >= w || yy >= h ||
                            !cur[static_cast<std::size_t>(yy) * w + xx]) {
                            keep = 0;
                            break;
                        }
                    }
                }
                next[static_cast<std::size_t>(y) * w + x] = keep;
            }
        }
        cur.swap(next);
    }
    return BinaryMask(w, h, std::move(cur));
}

BinaryMask binary_dilation(const BinaryMask& m, int window) {
    if (window < 1 || window % 2 == 0) {
        throw InvalidArgument("dilation window must be odd and >= 1, got " +
                              std::to_string(window));
    }
    const int w = m.width();
    const int h = m.height();
    const int r = window / 2;
    std::vector<std::uint8_t> rows(m.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t any = 0;
            for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r) && !any; ++xx) {
                any = m.at(xx, y) ? 1 : 0;
            }
            rows[static_cast<std::size_t>(y) * w + x] = any;
        }
    }
    std::vector<std::uint8_t> out(m.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t any = 0;
            for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r) && !any; ++yy) {
                any = rows[static_cast<std::size_t>(yy) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = any;
        }
    }
    return BinaryMask(w, h, std::move(out));
}

std::pair<int, int> fit_max_dim(int width, int height, int max_dim) {
    if (max_dim < 1) throw InvalidArgument("max_dim must be >= 1");
    const int longest = std::max(width, height);
    if (longest <= max_dim) return {width, height};
    const double scale = static_cast<double>(max_dim) / longest;
    if (width >= height) {
        return {max_dim, std::max(1, static_cast<int>(std::lround(height * scale)))};
    }
    return {std::max(1, static_cast<int>(std::lround(width * scale))), max_dim};
}

namespace {

struct Tap {
    int i0;
    int i1;
    double t;
};

std::vector<Tap> bilinear_taps(int in_size, int out_size) {
    std::vector<Tap> taps(out_size);
    const double scale = static_cast<double>(in_size) / out_size;
    for (int o = 0; o < out_size; ++o) {
        double src = (o + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
        const int i0 = static_cast<int>(std::floor(src));
        const int i1 = std::min(i0 + 1, in_size - 1);
        taps[o] = {i0, i1, src - i0};
    }
    return taps;
}

// a + t (b - a) returns a exactly when a == b, so constants survive resampling.
inline double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

LinearImage resize_bilinear(const LinearImage& img, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("resize target must be positive");
    const auto tx = bilinear_taps(img.width(), width);
    const auto ty = bilinear_taps(img.height(), height);
    const int c = img.channels();
    std::vector<double> out(static_cast<std::size_t>(width) * height * c);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int k = 0; k < c; ++k) {
                const double top = lerp(img.at(tx[x].i0, ty[y].i0, k), img.at(tx[x].i1, ty[y].i0, k),
                                        tx[x].t);
                const double bot = lerp(img.at(tx[x].i0, ty[y].i1, k), img.at(tx[x].i1, ty[y].i1, k),
                                        tx[x].t);
                out[(static_cast<std::size_t>(y) * width + x) * c + k] = lerp(top, bot, ty[y].t);
            }
        }
    }
    return LinearImage(width, height, c, std::move(out));
}

ScalarField resize_bilinear(const ScalarField& f, int width, int height) {
    LinearImage as_image(f.width(), f.height(), 1,
                         std::vector<double>(f.data().begin(), f.data().end()));
    auto r = resize_bilinear(as_image, width, height);
    return ScalarField(width, height, std::vector<double>(r.data().begin(), r.data().end()));
}

LinearImage resize_max_dim(const LinearImage& img, int max_dim) {
    const auto [w, h] = fit_max_dim(img.width(), img.height(), max_dim);
    if (w == img.width() && h == img.height()) return img;
    return resize_bilinear(img, w, h);
}

BinaryMask resize_nearest(const BinaryMask& m, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("resize target must be positive");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(m.height() - 1,
                                static_cast<int>((y + 0.5) * m.height() / height));
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(m.width() - 1,
                                    static_cast<int>((x + 0.5) * m.width() / width));
            out[static_cast<std::size_t>(y) * width + x] = m.at(sx, sy) ? 1 : 0;
        }
    }
    return BinaryMask(width, height, std::move(out));
}

}  // namespace shadelab
