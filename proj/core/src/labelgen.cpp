#include <shadelab/labelgen.hpp>

#include <shadelab/error.hpp>
#include <shadelab/filters.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace shadelab {

ScalarField normal_gradient_magnitude(const NormalMap& normal) {
    const int w = normal.width();
    const int h = normal.height();
    std::vector<double> sum_sq(static_cast<std::size_t>(w) * h, 0.0);
    for (int c = 0; c < 3; ++c) {
        auto [dx, dy] = forward_gradient(channel(normal.normals(), c));
        for (std::size_t i = 0; i < sum_sq.size(); ++i) {
            sum_sq[i] += dx[i] * dx[i] + dy[i] * dy[i];
        }
    }
    for (auto& v : sum_sq) v = std::sqrt(v);
    return ScalarField(w, h, std::move(sum_sq));
}

BinaryMask generate_nsnd(const DepthMap& depth, const NormalMap& normal,
                         const BinaryMask& reliable, const NsNdParams& params) {
    params.validate();
    const int w = depth.width();
    const int h = depth.height();
    if (normal.width() != w || normal.height() != h || reliable.width() != w ||
        reliable.height() != h) {
        throw DimensionMismatch("depth, normal and mask dimensions differ");
    }

    const ScalarField depth_grad = gradient_magnitude(depth.field());
    const ScalarField normal_grad = normal_gradient_magnitude(normal);
    const BinaryMask trusted = binary_erosion(reliable, params.mask_erosion_iters);
    const double margin = params.border_margin_frac * w;

    std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int edge_dist = std::min({x, y, w - 1 - x, h - 1 - y});
            if (edge_dist < margin) continue;
            if (!trusted.at(x, y)) continue;
            if (depth_grad.at(x, y) > params.tau_depth || normal_grad.at(x, y) > params.tau_normal) {
                out[static_cast<std::size_t>(y) * w + x] = 1;
            }
        }
    }
    return BinaryMask(w, h, std::move(out));
}

BinaryMask rasterize_smooth_regions(std::span<const ConstantShadingRegion> regions, int width,
                                    int height, int erosion_iters) {
    if (width <= 0 || height <= 0) throw InvalidArgument("raster size must be positive");
    std::vector<std::uint8_t> fill(static_cast<std::size_t>(width) * height, 0);
    std::vector<double> crossings;

    for (const auto& region : regions) {
        validate(region);
        const auto& v = region.vertices;
        const std::size_t n = v.size();
        for (int y = 0; y < height; ++y) {
            const double yc = y + 0.5;
            crossings.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const double ax = v[i].x * width;
                const double ay = v[i].y * height;
                const double bx = v[(i + 1) % n].x * width;
                const double by = v[(i + 1) % n].y * height;
                // Half-open rule: a vertex on the scanline is counted once.
                if ((ay <= yc && yc < by) || (by <= yc && yc < ay)) {
                    crossings.push_back(ax + (yc - ay) * (bx - ax) / (by - ay));
                }
            }
            std::sort(crossings.begin(), crossings.end());
            for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
                // Pixel x is inside when its center x + 0.5 lies in [xa, xb).
                const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[k] - 0.5)));
                const int x1 = std::min(width, static_cast<int>(std::ceil(crossings[k + 1] - 0.5)));
                for (int x = x0; x < x1; ++x) fill[static_cast<std::size_t>(y) * width + x] = 1;
            }
        }
    }
    return binary_erosion(BinaryMask(width, height, std::move(fill)), erosion_iters);
}

std::vector<std::array<int, 2>> bresenham_line(int x0, int y0, int x1, int y1) {
    std::vector<std::array<int, 2>> pts;
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0;
    int y = y0;
    pts.reserve(static_cast<std::size_t>(std::max(dx, -dy)) + 1);
    while (true) {
        pts.push_back({x, y});
        if (x == x1 && y == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return pts;
}

namespace {

ScalarField log_intensity_gradient(const LinearImage& img, double eps) {
    const ScalarField lum = luminance(img);
    std::vector<double> logs(lum.size());
    for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(lum[i] + eps);
    return gradient_magnitude(ScalarField(lum.width(), lum.height(), std::move(logs)));
}

}  // namespace

ShadowCandidateFinder::ShadowCandidateFinder(const LinearImage& img, CandidateRules rules)
    : rules_(rules), gradient_(log_intensity_gradient(img, rules.log_epsilon)) {}

std::optional<ShadowCandidate> ShadowCandidateFinder::find(const PointComparison& c) const {
    validate(c);
    if (majority_vote(c) == Judgment::Equal) {
        throw InvalidArgument("shadow candidates need a non-equal shading comparison");
    }
    if (c.point1 == c.point2) throw InvalidArgument("comparison points coincide");

    const int w = gradient_.width();
    const int h = gradient_.height();
    const double dx = (c.point2.x - c.point1.x) * w;
    const double dy = (c.point2.y - c.point1.y) * h;
    const double length = std::hypot(dx, dy) / std::hypot(static_cast<double>(w), h);
    if (length > rules_.max_segment_length) return std::nullopt;

    const auto [x0, y0] = nearest_pixel(c.point1, w, h);
    const auto [x1, y1] = nearest_pixel(c.point2, w, h);
    ShadowCandidate best;
    best.gradient = -1.0;
    for (const auto& [x, y] : bresenham_line(x0, y0, x1, y1)) {
        const double g = gradient_.at(x, y);
        if (g > best.gradient) {
            best.gradient = g;
            best.x = x;
            best.y = y;
        }
    }
    if (best.gradient < rules_.min_gradient) return std::nullopt;
    best.position = {(best.x + 0.5) / w, (best.y + 0.5) / h};
    return best;
}

std::optional<ShadowCandidate> candidate_shadow_point(const LinearImage& img,
                                                      const PointComparison& c,
                                                      CandidateRules rules) {
    return ShadowCandidateFinder(img, rules).find(c);
}

ShadingLabelMap build_label_map(const BinaryMask& smooth, const BinaryMask& nsnd,
                                std::span<const ShadowBoundaryPoint> nssb_points,
                                bool dilate_ns) {
    const int w = smooth.width();
    const int h = smooth.height();
    if (nsnd.width() != w || nsnd.height() != h) {
        throw DimensionMismatch("smooth and NS-ND masks differ in size");
    }

    std::vector<std::uint8_t> stamped(static_cast<std::size_t>(w) * h, 0);
    for (const auto& p : nssb_points) {
        if (!p.validated) throw InvalidArgument("unvalidated shadow-boundary point");
        const auto [x, y] = nearest_pixel(p.position, w, h);
        stamped[static_cast<std::size_t>(y) * w + x] = 1;
    }
    BinaryMask nssb(w, h, std::move(stamped));
    BinaryMask nd = nsnd;
    if (dilate_ns) {
        nssb = binary_dilation(nssb, kLabelDilationWindow);
        nd = binary_dilation(nd, kLabelDilationWindow);
    }

    std::vector<ShadingClass> labels(static_cast<std::size_t>(w) * h, ShadingClass::Unlabeled);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (nssb[i]) {
            labels[i] = ShadingClass::NsSb;
        } else if (nd[i]) {
            labels[i] = ShadingClass::NsNd;
        } else if (smooth[i]) {
            labels[i] = ShadingClass::Smooth;
        }
    }
    return ShadingLabelMap(w, h, std::move(labels));
}

}  // namespace shadelab
