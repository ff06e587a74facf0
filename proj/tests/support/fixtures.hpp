// Shared generators for tests: random images, Retinex instances, label fixture.
#pragma once

#include "oracles.hpp"

#include <shadelab/annotations.hpp>
#include <shadelab/image.hpp>
#include <shadelab/retinex.hpp>

#include <random>
#include <vector>

namespace fixtures {

inline shadelab::LinearImage to_image(const oracle::RetinexInstance& in) {
    std::vector<double> data;
    data.reserve(in.rgb.size() * 3);
    for (const auto& c : in.rgb) data.insert(data.end(), c.begin(), c.end());
    return shadelab::LinearImage(in.w, in.h, 3, std::move(data));
}

inline shadelab::RetinexParams to_params(const oracle::RetinexInstance& in) {
    shadelab::RetinexParams p;
    p.t = in.t;
    p.w_reflectance = in.weight;
    p.luminance_floor = in.floor;
    p.use_prior = !in.heat.empty();
    return p;
}

// Random image up to max_side x max_side. Pixels draw from a small palette
// of base colors with intensity jitter, so some neighbors share chromaticity
// (weight on) and others do not (weight off).
inline oracle::RetinexInstance random_instance(std::mt19937_64& rng, int max_side, bool with_heat) {
    std::uniform_int_distribution<int> side(2, max_side);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    oracle::RetinexInstance in;
    in.w = side(rng);
    in.h = side(rng);
    in.t = 0.005 + 0.05 * u(rng);

    std::vector<std::array<double, 3>> palette(3);
    for (auto& c : palette) c = {0.1 + 0.9 * u(rng), 0.1 + 0.9 * u(rng), 0.1 + 0.9 * u(rng)};
    std::uniform_int_distribution<int> pick(0, static_cast<int>(palette.size()) - 1);
    const int n = in.w * in.h;
    in.rgb.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto& base = palette[pick(rng)];
        const double scale = 0.05 + 0.95 * u(rng);
        const double tint = u(rng) < 0.2 ? 0.01 * u(rng) : 0.0;
        in.rgb[i] = {base[0] * scale + tint, base[1] * scale, base[2] * scale};
    }
    if (with_heat) {
        in.heat.resize(n);
        for (auto& v : in.heat) v = u(rng);
    }
    return in;
}

inline shadelab::ScalarField random_field(std::mt19937_64& rng, int w, int h, double lo,
                                          double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) x = u(rng);
    return shadelab::ScalarField(w, h, std::move(v));
}

// 40x40 label-generation fixture:
//  - smooth polygon covering pixel centers 2..12 in x and y (11x11), eroded 3x -> 5x5
//  - depth 0 for x < 20 and 5 for x >= 20 (gradient 5 at column 19), constant normals,
//    fully reliable mask: mask erosion trims rows 0..2 and 37..39, margin 2 px
//    -> NS-ND column 19, rows 3..36 (34 pixels)
//  - one validated shadow point at pixel (30, 30)
struct LabelFixture {
    static constexpr int kSize = 40;

    shadelab::AnnotationSet annotations() const {
        shadelab::AnnotationSet set;
        set.photo_id = "fixture";
        set.width = kSize;
        set.height = kSize;
        const double a = 2.0 / kSize;
        const double b = 13.0 / kSize;
        set.regions.push_back({{{a, a}, {b, a}, {b, b}, {a, b}}});
        set.shadow_points.push_back({{30.5 / kSize, 30.5 / kSize}, true});
        set.shadow_points.push_back({{0.9, 0.1}, false});
        return set;
    }

    shadelab::ScalarField depth() const {
        std::vector<double> d(kSize * kSize);
        for (int y = 0; y < kSize; ++y)
            for (int x = 0; x < kSize; ++x) d[y * kSize + x] = x < 20 ? 0.0 : 5.0;
        return shadelab::ScalarField(kSize, kSize, std::move(d));
    }

    shadelab::LinearImage normals() const {
        std::vector<double> n(kSize * kSize * 3, 0.0);
        for (int i = 0; i < kSize * kSize; ++i) n[3 * i + 2] = 1.0;
        return shadelab::LinearImage(kSize, kSize, 3, std::move(n));
    }

    // Hand-computed counts.
    static constexpr std::size_t kSmooth = 25;
    static constexpr std::size_t kNsNdTest = 34;
    static constexpr std::size_t kNsSbTest = 1;
    // Train mode: column 19 rows 3..36 dilated 5x5 -> columns 17..21, rows 1..38.
    static constexpr std::size_t kNsNdTrain = 5 * 38;
    static constexpr std::size_t kNsSbTrain = 25;
};

}  // namespace fixtures
