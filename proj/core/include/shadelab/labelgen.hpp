/**
 * @file labelgen.hpp
 * @brief Turns annotations and RGB-D data into per-pixel shading labels.
 */
#pragma once

#include <shadelab/annotations.hpp>
#include <shadelab/image.hpp>

#include <optional>
#include <span>

namespace shadelab {

/// Normal/depth discontinuity mask. A pixel fires when the depth gradient
/// magnitude exceeds tau_depth or the normal gradient magnitude (L2 over all
/// six partials) exceeds tau_normal, it survives the eroded reliability mask,
/// and it is at least border_margin_frac * width pixels from every edge.
BinaryMask generate_nsnd(const DepthMap& depth, const NormalMap& normal,
                         const BinaryMask& reliable, const NsNdParams& params = {});

/// L2 norm of the six forward-difference partials of a normal map.
ScalarField normal_gradient_magnitude(const NormalMap& normal);

/// Even-odd scanline fill of every polygon (pixel centers), unioned, then eroded.
BinaryMask rasterize_smooth_regions(std::span<const ConstantShadingRegion> regions, int width,
                                    int height, int erosion_iters = 3);

/// A proposed shadow-boundary point along a comparison segment.
struct ShadowCandidate {
    NormPoint position;  ///< center of the chosen pixel, normalized
    int x = 0;
    int y = 0;
    double gradient = 0.0;  ///< log-intensity gradient magnitude there
};

struct CandidateRules {
    double max_segment_length = 0.2;  ///< pixel length / image diagonal
    double min_gradient = 0.3;
    double log_epsilon = 1e-4;
};

/// Pixels visited by Bresenham's line from (x0, y0) to (x1, y1), endpoints included.
std::vector<std::array<int, 2>> bresenham_line(int x0, int y0, int x1, int y1);

/// Finds shadow-boundary candidates on one image. The log-intensity gradient
/// field log(luminance + eps) is computed once and reused for every comparison.
class ShadowCandidateFinder {
public:
    explicit ShadowCandidateFinder(const LinearImage& img, CandidateRules rules = {});

    /// Highest-gradient pixel on the segment between the two compared points,
    /// or nullopt when the segment is too long or the peak is too weak.
    /// Ties go to the pixel nearest point1. Throws InvalidArgument when the
    /// majority vote is Equal or the two points coincide.
    std::optional<ShadowCandidate> find(const PointComparison& c) const;

    const ScalarField& log_gradient() const noexcept { return gradient_; }

private:
    CandidateRules rules_;
    ScalarField gradient_;
};

std::optional<ShadowCandidate> candidate_shadow_point(const LinearImage& img,
                                                      const PointComparison& c,
                                                      CandidateRules rules = {});

/// Composes the label map. Shadow points are stamped at their nearest pixel;
/// with dilate_ns both non-smooth masks grow by a 5x5 window first.
/// Precedence on conflicts: NsSb > NsNd > Smooth > Unlabeled.
/// Throws InvalidArgument if any point is not validated.
ShadingLabelMap build_label_map(const BinaryMask& smooth, const BinaryMask& nsnd,
                                std::span<const ShadowBoundaryPoint> nssb_points,
                                bool dilate_ns);

inline constexpr int kLabelDilationWindow = 5;

}  // namespace shadelab
