/**
 * @file retinex.hpp
 * @brief Retinex intrinsic decomposition with an optional smooth-shading prior.
 *
 * Works in the log domain on luminance: i = log(max(lum, floor)), i = r + s.
 * Over all 4-neighbor pairs (p, q) the solver minimizes
 *
 *     E(s) = sum (s_p - s_q)^2 + w_pq * ((i_p - i_q) - (s_p - s_q))^2
 *
 * where w_pq is the Retinex weight: 0 when the chromaticities of p and q
 * differ by more than t (or either is undefined), otherwise
 * w_reflectance, scaled by 1 - (H_p + H_q) / 2 when a smooth-shading
 * heatmap H is supplied. E fixes s only up to a constant; results are
 * anchored to mean(s) = 0.
 */
#pragma once

#include <shadelab/image.hpp>

#include <array>
#include <filesystem>
#include <vector>

namespace shadelab {

/// Per-pixel probability of smooth shading, every value in [0, 1].
class HeatMap {
public:
    HeatMap() = default;
    HeatMap(int width, int height, std::vector<double> probs);
    explicit HeatMap(const ScalarField& f);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double at(int x, int y) const noexcept {
        return probs_[static_cast<std::size_t>(y) * width_ + x];
    }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }
    std::span<const double> data() const noexcept { return probs_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> probs_;
};

/// Reads a heatmap from .pfm (values taken as-is) or .png (raw samples
/// divided by 255 or 65535, no transfer function).
HeatMap read_heatmap(const std::filesystem::path& path);

enum class ShadingAnchor { ZeroMeanLog };

struct RetinexParams {
    double t = 0.02;               ///< chromaticity distance threshold
    double w_reflectance = 100.0;  ///< weight of the reflectance-constancy term
    bool use_prior = false;
    ShadingAnchor anchor = ShadingAnchor::ZeroMeanLog;
    double luminance_floor = 1e-4;  ///< clamp before taking the log
    double cg_tolerance = 1e-10;    ///< relative residual ||b - Ax|| / ||b||
    int max_iterations = 0;         ///< 0 means 10 * pixel count

    void validate() const;
};

/// (r, g) / (r + g + b) per pixel. `valid` is 0 where r + g + b < 1e-6.
struct ChromaImage {
    int width = 0;
    int height = 0;
    std::vector<std::array<double, 2>> chroma;
    std::vector<std::uint8_t> valid;
};

ChromaImage chromaticity(const LinearImage& img);

/// Weights on 4-neighbor pairs. horizontal[y * (width - 1) + x] couples
/// (x, y)-(x + 1, y); vertical[y * width + x] couples (x, y)-(x, y + 1).
struct PairWeights {
    int width = 0;
    int height = 0;
    std::vector<double> horizontal;
    std::vector<double> vertical;
};

/// Throws InvalidArgument when a heatmap is given without use_prior or vice
/// versa, and DimensionMismatch when its size differs from the image.
PairWeights retinex_weights(const LinearImage& img, const RetinexParams& params,
                            const HeatMap* heat = nullptr);

/// log(max(luminance, floor)).
ScalarField log_luminance(const LinearImage& img, double floor = 1e-4);

/// Energy of a log-shading field under precomputed weights.
double retinex_energy(const ScalarField& log_lum, const PairWeights& weights,
                      std::span<const double> log_shading);

double energy(const LinearImage& img, const ScalarField& log_shading,
              const RetinexParams& params, const HeatMap* heat = nullptr);

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Solves the normal equations of the energy with Jacobi-preconditioned
/// conjugate gradients and anchors the result. Throws SolverError if the
/// iteration cap is reached first.
std::vector<double> solve_log_shading(const ScalarField& log_lum, const PairWeights& weights,
                                      const RetinexParams& params, SolveStats* stats = nullptr);

struct Decomposition {
    LinearImage reflectance;  ///< img / shading, per channel
    ScalarField shading;      ///< exp(log shading), strictly positive
};

struct RetinexResult {
    Decomposition layers;
    ScalarField log_shading;
    double energy = 0.0;
    SolveStats stats;
};

RetinexResult decompose_retinex(const LinearImage& img, const RetinexParams& params = {},
                                const HeatMap* heat = nullptr);

}  // namespace shadelab
