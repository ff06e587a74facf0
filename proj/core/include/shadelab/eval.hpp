/**
 * @file eval.hpp
 * @brief Class-balanced precision/recall of smooth-shading predictions.
 *
 * Every labeled pixel is one sample. Classes are reweighted so that their
 * total masses follow the balance ratio (S : NS-ND : NS-SB, default 2:1:1):
 * a sample of class c weighs f_c / N_c where f_c is the class's share of the
 * ratio and N_c its sample count. Smooth is the positive class.
 */
#pragma once

#include <shadelab/annotations.hpp>
#include <shadelab/classify.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shadelab {

struct BalanceSpec {
    double smooth = 2.0;
    double nsnd = 1.0;
    double nssb = 1.0;

    /// Parses "S:ND:SB", e.g. "2:1:1".
    static BalanceSpec parse(const std::string& text);

    /// Entries must be >= 0 with a positive smooth share and a positive
    /// non-smooth share.
    void validate() const;

    /// Normalized class shares indexed by ShadingClass code - 1.
    std::array<double, 3> fractions() const;
};

struct LabeledSample {
    int image = 0;
    int x = 0;
    int y = 0;
    ShadingClass label = ShadingClass::Unlabeled;
    double score = 0.0;
};

/// One sample per labeled pixel, in row-major order. Unlabeled pixels are skipped.
std::vector<LabeledSample> collect_samples(const SmoothScoreMap& scores,
                                           const ShadingLabelMap& labels, int image_index = 0);

struct PrPoint {
    double threshold = 0.0;  ///< lowest score predicted smooth at this point
    double precision = 0.0;
    double recall = 0.0;
};

struct PrCurve {
    /// Ordered by descending threshold, i.e. non-decreasing recall.
    std::vector<PrPoint> points;
    /// Per-sample weights for Smooth, NsNd, NsSb.
    std::array<double, 3> class_weights{};
    std::array<std::size_t, 3> class_counts{};
};

/// Sweeps one operating point per distinct score value v, predicting smooth
/// for every sample with score >= v (equivalently score > sigma for any sigma
/// in the gap below v). Precision is left unsmoothed.
/// Throws InvalidArgument when a class with a positive share has no samples.
PrCurve balanced_pr(std::span<const LabeledSample> samples, const BalanceSpec& spec = {});

/// Precision at the first point whose recall is >= r; nullopt when the
/// curve never reaches r.
std::optional<double> precision_at_recall(const PrCurve& curve, double r);

/// CSV with header `threshold,precision,recall`.
void write_pr_csv(const std::filesystem::path& path, const PrCurve& curve);
PrCurve read_pr_csv(const std::filesystem::path& path);

inline constexpr std::array<double, 3> kReportRecalls{0.3, 0.5, 0.7};

struct PrecisionAtRecallRow {
    std::string method;
    std::array<std::optional<double>, 3> precision;  ///< at kReportRecalls
};

PrecisionAtRecallRow summarize(const std::string& method, const PrCurve& curve);

/// `method,p@30,p@50,p@70`; unreachable levels are written as `n/a`.
void write_table_csv(const std::filesystem::path& path,
                     std::span<const PrecisionAtRecallRow> rows);
std::string format_table(std::span<const PrecisionAtRecallRow> rows);

}  // namespace shadelab
