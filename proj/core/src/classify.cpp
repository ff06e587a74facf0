#include <shadelab/classify.hpp>

#include <shadelab/error.hpp>
#include <shadelab/filters.hpp>
#include <shadelab/image_io.hpp>

#include <algorithm>
#include <cmath>

namespace shadelab {

SmoothScoreMap::SmoothScoreMap(int width, int height, std::vector<double> scores, ScoreKind kind)
    : width_(width), height_(height), scores_(std::move(scores)), kind_(kind) {
    if (width <= 0 || height <= 0) throw InvalidArgument("score map dimensions must be positive");
    if (scores_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidArgument("score map length does not match width*height");
    }
    for (double s : scores_) {
        if (!std::isfinite(s)) throw InvalidArgument("score map contains non-finite values");
        if (kind == ScoreKind::Probability && (s < 0.0 || s > 1.0)) {
            throw InvalidArgument("probability score outside [0, 1]");
        }
    }
}

SmoothScoreMap score_from_shading(const ScalarField& shading, int filter_size) {
    std::vector<double> logs(shading.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (!(shading[i] > 0.0)) throw InvalidArgument("shading layer must be strictly positive");
        logs[i] = std::log(shading[i]);
    }
    const ScalarField filtered = max_filter(
        gradient_magnitude(ScalarField(shading.width(), shading.height(), std::move(logs))),
        filter_size);
    std::vector<double> scores(filtered.size());
    // 0.0 - g keeps flat regions at +0.0 rather than -0.0.
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = 0.0 - filtered[i];
    return SmoothScoreMap(shading.width(), shading.height(), std::move(scores),
                          ScoreKind::NegGradient);
}

SmoothScoreMap score_constant_reflectance(const LinearImage& img, double floor,
                                          int filter_size) {
    const ScalarField lum = luminance(img);
    std::vector<double> clamped(lum.size());
    for (std::size_t i = 0; i < clamped.size(); ++i) clamped[i] = std::max(lum[i], floor);
    return score_from_shading(ScalarField(lum.width(), lum.height(), std::move(clamped)),
                              filter_size);
}

SmoothScoreMap score_from_heatmap(const HeatMap& heat) {
    return SmoothScoreMap(heat.width(), heat.height(),
                          std::vector<double>(heat.data().begin(), heat.data().end()),
                          ScoreKind::Probability);
}

BinaryMask predict_smooth(const SmoothScoreMap& scores, double threshold) {
    std::vector<std::uint8_t> out(scores.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scores[i] > threshold ? 1 : 0;
    return BinaryMask(scores.width(), scores.height(), std::move(out));
}

void write_scores_pfm(const std::filesystem::path& path, const SmoothScoreMap& scores) {
    write_pfm(path, ScalarField(scores.width(), scores.height(),
                                std::vector<double>(scores.scores().begin(), scores.scores().end())));
}

SmoothScoreMap read_scores_pfm(const std::filesystem::path& path, ScoreKind kind) {
    const ScalarField f = read_pfm_field(path);
    return SmoothScoreMap(f.width(), f.height(),
                          std::vector<double>(f.data().begin(), f.data().end()), kind);
}

}  // namespace shadelab
