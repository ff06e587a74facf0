/**
 * @file annotations.hpp
 * @brief Shading annotation data model: classes, label maps, polygons,
 *        point comparisons, shadow-boundary points, depth/normal maps.
 *
 * Annotation geometry is stored in normalized image coordinates: x in [0, 1]
 * across the width, y in [0, 1] down the height.
 */
#pragma once

#include <shadelab/image.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shadelab {

/// Label codes. Numeric values are the on-disk PNG codes.
enum class ShadingClass : std::uint8_t {
    Unlabeled = 0,
    Smooth = 1,
    NsNd = 2,  ///< non-smooth: normal/depth discontinuity
    NsSb = 3,  ///< non-smooth: shadow boundary
};

const char* to_string(ShadingClass c) noexcept;

class ShadingLabelMap {
public:
    ShadingLabelMap() = default;
    ShadingLabelMap(int width, int height, std::vector<ShadingClass> labels);

    static ShadingLabelMap unlabeled(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }

    ShadingClass at(int x, int y) const noexcept {
        return labels_[static_cast<std::size_t>(y) * width_ + x];
    }
    ShadingClass operator[](std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<ShadingClass>& labels() const noexcept { return labels_; }

    /// Pixel count of one class.
    std::size_t count(ShadingClass c) const noexcept;

    friend bool operator==(const ShadingLabelMap&, const ShadingLabelMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<ShadingClass> labels_;
};

/// Point in normalized image coordinates.
struct NormPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const NormPoint&, const NormPoint&) = default;
};

/// Pixel holding a normalized point: floor(x * width), clamped into the image.
/// This is the pixel whose center is nearest to the point.
std::array<int, 2> nearest_pixel(NormPoint p, int width, int height) noexcept;

/// Polygon drawn around an area of approximately constant shading.
struct ConstantShadingRegion {
    std::vector<NormPoint> vertices;
};

/// Throws InvalidArgument unless the polygon has >= 3 vertices, all inside
/// [0, 1]^2, and no two non-adjacent edges intersect.
void validate(const ConstantShadingRegion& region);

enum class Judgment : std::uint8_t { Point1Darker, Point2Darker, Equal };

const char* to_string(Judgment j) noexcept;

/// Relative shading comparison between two points with crowd votes.
struct PointComparison {
    NormPoint point1;
    NormPoint point2;
    std::vector<Judgment> votes;
};

void validate(const PointComparison& c);

/// Modal vote. Any tie for the top count yields Equal.
/// Throws InvalidArgument on an empty vote list.
Judgment majority_vote(const PointComparison& c);

struct ShadowBoundaryPoint {
    NormPoint position;
    bool validated = false;
};

/// Everything annotated for one photo.
struct AnnotationSet {
    std::string photo_id;
    int width = 0;   ///< original photo width in pixels
    int height = 0;  ///< original photo height in pixels
    std::vector<ConstantShadingRegion> regions;
    std::vector<PointComparison> comparisons;
    std::vector<ShadowBoundaryPoint> shadow_points;
};

/// Depth in scene units.
class DepthMap {
public:
    DepthMap() = default;
    explicit DepthMap(ScalarField depth) : depth_(std::move(depth)) {}

    int width() const noexcept { return depth_.width(); }
    int height() const noexcept { return depth_.height(); }
    const ScalarField& field() const noexcept { return depth_; }

private:
    ScalarField depth_;
};

/// Per-pixel surface normals. Non-zero normals must have unit length within
/// 1e-3; all-zero vectors mark pixels without a valid normal.
class NormalMap {
public:
    NormalMap() = default;
    /// `xyz` is a 3-channel image holding (nx, ny, nz).
    explicit NormalMap(LinearImage xyz);

    int width() const noexcept { return normals_.width(); }
    int height() const noexcept { return normals_.height(); }
    const LinearImage& normals() const noexcept { return normals_; }

private:
    LinearImage normals_;
};

/// Thresholds and cleanup parameters for normal/depth discontinuity labels.
struct NsNdParams {
    double tau_depth = 2.0;
    double tau_normal = 1.5;
    int mask_erosion_iters = 3;
    double border_margin_frac = 0.05;  ///< fraction of the image width

    void validate() const;
};

}  // namespace shadelab
