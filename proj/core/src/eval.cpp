#include <shadelab/eval.hpp>

#include <shadelab/error.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace shadelab {

BalanceSpec BalanceSpec::parse(const std::string& text) {
    std::array<double, 3> v{};
    std::istringstream in(text);
    for (int i = 0; i < 3; ++i) {
        if (!(in >> v[i])) throw InvalidArgument("balance must look like 2:1:1, got '" + text + "'");
        if (i < 2) {
            char sep = 0;
            if (!(in >> sep) || sep != ':') {
                throw InvalidArgument("balance must look like 2:1:1, got '" + text + "'");
            }
        }
    }
    in >> std::ws;
    if (!in.eof()) throw InvalidArgument("trailing characters in balance '" + text + "'");
    BalanceSpec spec{v[0], v[1], v[2]};
    spec.validate();
    return spec;
}

void BalanceSpec::validate() const {
    for (double v : {smooth, nsnd, nssb}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("balance entries must be >= 0");
    }
    if (!(smooth > 0.0)) throw InvalidArgument("balance needs a positive smooth share");
    if (!(nsnd + nssb > 0.0)) throw InvalidArgument("balance needs a positive non-smooth share");
}

std::array<double, 3> BalanceSpec::fractions() const {
    const double total = smooth + nsnd + nssb;
    return {smooth / total, nsnd / total, nssb / total};
}

std::vector<LabeledSample> collect_samples(const SmoothScoreMap& scores,
                                           const ShadingLabelMap& labels, int image_index) {
    if (scores.width() != labels.width() || scores.height() != labels.height()) {
        throw DimensionMismatch("score map and label map sizes differ");
    }
    std::vector<LabeledSample> out;
    for (int y = 0; y < labels.height(); ++y) {
        for (int x = 0; x < labels.width(); ++x) {
            const ShadingClass c = labels.at(x, y);
            if (c == ShadingClass::Unlabeled) continue;
            out.push_back({image_index, x, y, c, scores.at(x, y)});
        }
    }
    return out;
}

PrCurve balanced_pr(std::span<const LabeledSample> samples, const BalanceSpec& spec) {
    spec.validate();
    const auto share = spec.fractions();

    PrCurve curve;
    std::vector<const LabeledSample*> used;
    used.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.label == ShadingClass::Unlabeled) {
            throw InvalidArgument("unlabeled sample passed to balanced_pr");
        }
        if (!std::isfinite(s.score)) throw InvalidArgument("non-finite sample score");
        const auto c = static_cast<std::size_t>(s.label) - 1;
        ++curve.class_counts[c];
        // Classes with a zero share carry no weight and cannot move the curve.
        if (share[c] > 0.0) used.push_back(&s);
    }
    for (std::size_t c = 0; c < 3; ++c) {
        if (share[c] > 0.0 && curve.class_counts[c] == 0) {
            throw InvalidArgument(std::string("no samples of class ") +
                                  to_string(static_cast<ShadingClass>(c + 1)) +
                                  " but its balance share is positive");
        }
        curve.class_weights[c] =
            share[c] > 0.0 ? share[c] / static_cast<double>(curve.class_counts[c]) : 0.0;
    }

    std::stable_sort(used.begin(), used.end(), [](const LabeledSample* a, const LabeledSample* b) {
        if (a->score != b->score) return a->score > b->score;
        if (a->image != b->image) return a->image < b->image;
        if (a->y != b->y) return a->y < b->y;
        return a->x < b->x;
    });

    const auto& total = curve.class_counts;
    std::array<std::size_t, 3> predicted{};
    std::size_t i = 0;
    while (i < used.size()) {
        const double v = used[i]->score;
        while (i < used.size() && used[i]->score == v) {
            ++predicted[static_cast<std::size_t>(used[i]->label) - 1];
            ++i;
        }
        // Class mass predicted smooth: share * (predicted / total).
        std::array<double, 3> mass{};
        for (std::size_t c = 0; c < 3; ++c) {
            mass[c] = share[c] > 0.0 ? share[c] * (static_cast<double>(predicted[c]) /
                                                   static_cast<double>(total[c]))
                                     : 0.0;
        }
        const double precision = mass[0] / ((mass[0] + mass[1]) + mass[2]);
        const double recall =
            static_cast<double>(predicted[0]) / static_cast<double>(total[0]);
        curve.points.push_back({v, precision, recall});
    }
    return curve;
}

std::optional<double> precision_at_recall(const PrCurve& curve, double r) {
    for (const auto& p : curve.points) {
        if (p.recall >= r) return p.precision;
    }
    return std::nullopt;
}

void write_pr_csv(const std::filesystem::path& path, const PrCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "threshold,precision,recall\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : curve.points) {
        out << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

PrCurve read_pr_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "threshold,precision,recall") {
        throw IoError(path.string() + ": missing PR CSV header");
    }
    PrCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        PrPoint p;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> p.threshold >> c1 >> p.precision >> c2 >> p.recall) || c1 != ',' ||
            c2 != ',') {
            throw IoError(path.string() + ": malformed row '" + line + "'");
        }
        curve.points.push_back(p);
    }
    return curve;
}

PrecisionAtRecallRow summarize(const std::string& method, const PrCurve& curve) {
    PrecisionAtRecallRow row{method, {}};
    for (std::size_t k = 0; k < kReportRecalls.size(); ++k) {
        row.precision[k] = precision_at_recall(curve, kReportRecalls[k]);
    }
    return row;
}

namespace {

std::string fmt_precision(const std::optional<double>& p) {
    if (!p) return "n/a";
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << *p;
    return s.str();
}

}  // namespace

void write_table_csv(const std::filesystem::path& path,
                     std::span<const PrecisionAtRecallRow> rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "method,p@30,p@50,p@70\n";
    for (const auto& r : rows) {
        out << r.method;
        for (const auto& p : r.precision) out << ',' << fmt_precision(p);
        out << '\n';
    }
}

std::string format_table(std::span<const PrecisionAtRecallRow> rows) {
    std::size_t name_width = std::string("Method").size();
    for (const auto& r : rows) name_width = std::max(name_width, r.method.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width)) << "Method"
        << "  " << std::right << std::setw(6) << "@30%" << "  " << std::setw(6) << "@50%" << "  "
        << std::setw(6) << "@70%" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(name_width)) << r.method << std::right;
        for (const auto& p : r.precision) out << "  " << std::setw(6) << fmt_precision(p);
        out << '\n';
    }
    return out.str();
}

}  // namespace shadelab
