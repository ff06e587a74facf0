/**
 * @file classify.hpp
 * @brief Smooth vs. non-smooth shading scores.
 *
 * Scores are oriented so that higher means "more likely smooth"; a pixel is
 * predicted smooth when its score is above the chosen threshold.
 */
#pragma once

#include <shadelab/image.hpp>
#include <shadelab/retinex.hpp>

#include <filesystem>
#include <vector>

namespace shadelab {

enum class ScoreKind { NegGradient, Probability };

class SmoothScoreMap {
public:
    SmoothScoreMap() = default;
    SmoothScoreMap(int width, int height, std::vector<double> scores, ScoreKind kind);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    ScoreKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return scores_.size(); }
    double operator[](std::size_t i) const noexcept { return scores_[i]; }
    double at(int x, int y) const noexcept {
        return scores_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::span<const double> scores() const noexcept { return scores_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> scores_;
    ScoreKind kind_ = ScoreKind::NegGradient;
};

inline constexpr int kBaselineMaxFilterSize = 10;

/// -max_filter(|grad log S|, 10). Thresholding the score at -tau is the rule
/// "filtered log-shading gradient < tau". Throws InvalidArgument on
/// non-positive shading.
SmoothScoreMap score_from_shading(const ScalarField& shading,
                                  int filter_size = kBaselineMaxFilterSize);

/// Constant-reflectance baseline: the shading layer is the image luminance,
/// floored at `floor` so black pixels stay valid.
SmoothScoreMap score_constant_reflectance(const LinearImage& img, double floor = 1e-4,
                                          int filter_size = kBaselineMaxFilterSize);

/// Heatmap probabilities used directly as scores.
SmoothScoreMap score_from_heatmap(const HeatMap& heat);

/// Pixels whose score is strictly greater than `threshold`.
BinaryMask predict_smooth(const SmoothScoreMap& scores, double threshold);

void write_scores_pfm(const std::filesystem::path& path, const SmoothScoreMap& scores);
SmoothScoreMap read_scores_pfm(const std::filesystem::path& path, ScoreKind kind);

}  // namespace shadelab
