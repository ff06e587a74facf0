#include <shadelab/annotations.hpp>

#include <shadelab/error.hpp>

#include <algorithm>
#include <cmath>

namespace shadelab {

const char* to_string(ShadingClass c) noexcept {
    switch (c) {
        case ShadingClass::Unlabeled: return "unlabeled";
        case ShadingClass::Smooth: return "smooth";
        case ShadingClass::NsNd: return "nsnd";
        case ShadingClass::NsSb: return "nssb";
    }
    return "?";
}

const char* to_string(Judgment j) noexcept {
    switch (j) {
        case Judgment::Point1Darker: return "P1";
        case Judgment::Point2Darker: return "P2";
        case Judgment::Equal: return "E";
    }
    return "?";
}

ShadingLabelMap::ShadingLabelMap(int width, int height, std::vector<ShadingClass> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (width <= 0 || height <= 0) throw InvalidArgument("label map dimensions must be positive");
    if (labels_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidArgument("label map length does not match width*height");
    }
    for (auto c : labels_) {
        if (static_cast<std::uint8_t>(c) > 3) throw InvalidArgument("invalid shading class code");
    }
}

ShadingLabelMap ShadingLabelMap::unlabeled(int width, int height) {
    if (width <= 0 || height <= 0) throw InvalidArgument("label map dimensions must be positive");
    return ShadingLabelMap(width, height,
                           std::vector<ShadingClass>(static_cast<std::size_t>(width) * height,
                                                     ShadingClass::Unlabeled));
}

std::size_t ShadingLabelMap::count(ShadingClass c) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

std::array<int, 2> nearest_pixel(NormPoint p, int width, int height) noexcept {
    const int x = static_cast<int>(std::floor(p.x * width));
    const int y = static_cast<int>(std::floor(p.y * height));
    return {std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1)};
}

namespace {

bool in_unit_square(NormPoint p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 &&
           p.y <= 1.0;
}

double cross(NormPoint o, NormPoint a, NormPoint b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(NormPoint a, NormPoint b, NormPoint p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(NormPoint a, NormPoint b, NormPoint c, NormPoint d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) ||
           (d3 == 0 && on_segment(a, b, c)) || (d4 == 0 && on_segment(a, b, d));
}

}  // namespace

void validate(const ConstantShadingRegion& region) {
    const auto& v = region.vertices;
    const std::size_t n = v.size();
    if (n < 3) throw InvalidArgument("constant-shading polygon needs at least 3 vertices");
    for (const auto& p : v) {
        if (!in_unit_square(p)) throw InvalidArgument("polygon vertex outside [0,1]^2");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
                throw InvalidArgument("constant-shading polygon is self-intersecting");
            }
        }
    }
}

void validate(const PointComparison& c) {
    if (!in_unit_square(c.point1) || !in_unit_square(c.point2)) {
        throw InvalidArgument("comparison point outside [0,1]^2");
    }
    if (c.votes.empty()) throw InvalidArgument("comparison has no votes");
}

Judgment majority_vote(const PointComparison& c) {
    if (c.votes.empty()) throw InvalidArgument("majority_vote on an empty vote list");
    std::array<int, 3> counts{};
    for (auto v : c.votes) ++counts[static_cast<std::size_t>(v)];
    const int top = *std::max_element(counts.begin(), counts.end());
    if (std::count(counts.begin(), counts.end(), top) > 1) return Judgment::Equal;
    return static_cast<Judgment>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

NormalMap::NormalMap(LinearImage xyz) : normals_(std::move(xyz)) {
    if (normals_.channels() != 3) throw InvalidArgument("normal map needs 3 channels");
    const std::size_t n = normals_.pixel_count();
    auto d = normals_.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = std::sqrt(d[3 * i] * d[3 * i] + d[3 * i + 1] * d[3 * i + 1] +
                                      d[3 * i + 2] * d[3 * i + 2]);
        if (norm != 0.0 && std::abs(norm - 1.0) > 1e-3) {
            throw InvalidArgument("normal map contains a non-unit normal");
        }
    }
}

void NsNdParams::validate() const {
    if (!(tau_depth > 0.0) || !(tau_normal > 0.0)) {
        throw InvalidArgument("NS-ND thresholds must be positive");
    }
    if (mask_erosion_iters < 0) throw InvalidArgument("mask erosion iterations must be >= 0");
    if (!(border_margin_frac >= 0.0) || border_margin_frac >= 0.5) {
        throw InvalidArgument("border margin fraction must be in [0, 0.5)");
    }
}

}  // namespace shadelab
