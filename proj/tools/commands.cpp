#include "commands.hpp"

#include <shadelab/annotation_json.hpp>
#include <shadelab/classify.hpp>
#include <shadelab/error.hpp>
#include <shadelab/filters.hpp>
#include <shadelab/image_io.hpp>
#include <shadelab/labelgen.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

namespace shadelab::cli {

using nlohmann::json;

MethodSpec parse_method_spec(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos || first == 0) {
        throw InvalidArgument("method must be name:kind:dir, got '" + text + "'");
    }
    MethodSpec spec;
    spec.name = text.substr(0, first);
    const std::string kind = text.substr(first + 1, second - first - 1);
    spec.dir = text.substr(second + 1);
    if (kind == "scores") {
        spec.source = ScoreSource::Scores;
    } else if (kind == "shading") {
        spec.source = ScoreSource::Shading;
    } else if (kind == "heatmap") {
        spec.source = ScoreSource::Heatmap;
    } else if (kind == "constant-r") {
        spec.source = ScoreSource::ConstantReflectance;
    } else {
        throw InvalidArgument("unknown method kind '" + kind + "'");
    }
    if (spec.dir.empty()) throw InvalidArgument("method '" + spec.name + "' has no directory");
    return spec;
}

namespace {

std::vector<std::string> ids_from(const RunConfig& config, const fs::path& dir,
                                  const std::string& suffix) {
    std::vector<std::string> ids;
    if (config.photo_list) {
        std::ifstream in(*config.photo_list);
        if (!in) throw IoError("cannot open photo list " + config.photo_list->string());
        std::string line;
        while (std::getline(in, line)) {
            line.erase(0, line.find_first_not_of(" \t\r"));
            line.erase(line.find_last_not_of(" \t\r") + 1);
            if (line.empty() || line.front() == '#') continue;
            ids.push_back(line);
        }
        return ids;
    }
    if (!fs::is_directory(dir)) throw IoError("input directory " + dir.string() + " not found");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            ids.push_back(name.substr(0, name.size() - suffix.size()));
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void prepare_output(const RunConfig& config) {
    if (config.output_dir.empty()) throw InvalidArgument("no output directory given");
    fs::create_directories(config.output_dir);
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

json failures_json(const std::vector<PhotoFailure>& failures) {
    json arr = json::array();
    for (const auto& f : failures) arr.push_back({{"photo_id", f.photo_id}, {"error", f.error}});
    return arr;
}

/// Per-photo outcome slot; filled by workers, read in photo order.
struct Slot {
    bool ok = false;
    std::string error;
    json info;
};

template <typename Fn>
std::vector<Slot> run_photos(const std::vector<std::string>& ids, int jobs, Fn&& fn) {
    std::vector<Slot> slots(ids.size());
    parallel_for(ids.size(), jobs, [&](std::size_t i) {
        try {
            slots[i].info = fn(ids[i]);
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    });
    return slots;
}

CommandResult finish(const std::string& command, const std::vector<std::string>& ids,
                     const std::vector<Slot>& slots, const fs::path& summary_path, json extra) {
    CommandResult result;
    json photos = json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (slots[i].ok) {
            json entry = {{"photo_id", ids[i]}, {"status", "ok"}};
            for (auto& [k, v] : slots[i].info.items()) entry[k] = v;
            photos.push_back(std::move(entry));
            ++result.processed;
        } else {
            result.failures.push_back({ids[i], slots[i].error});
        }
    }
    json doc = {{"command", command},
                {"photos", photos},
                {"failures", failures_json(result.failures)}};
    for (auto& [k, v] : extra.items()) doc[k] = v;
    write_json(summary_path, doc);
    result.summary_path = summary_path;
    return result;
}

fs::path heatmap_path(const fs::path& dir, const std::string& id) {
    fs::path pfm = dir / (id + "_heat.pfm");
    if (fs::exists(pfm)) return pfm;
    fs::path png = dir / (id + "_heat.png");
    if (fs::exists(png)) return png;
    throw IoError("no heatmap for " + id + " in " + dir.string());
}

LinearImage as_rgb(const LinearImage& img) {
    if (img.channels() == 3) return img;
    std::vector<double> rgb(img.pixel_count() * 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = img.data()[i];
    }
    return LinearImage(img.width(), img.height(), 3, std::move(rgb));
}

LinearImage load_photo(const fs::path& path, int max_dim) {
    LinearImage img = read_png(path);
    return max_dim > 0 ? resize_max_dim(img, max_dim) : img;
}

NormalMap resize_normals(const LinearImage& normals, int width, int height) {
    if (normals.width() == width && normals.height() == height) return NormalMap(normals);
    const LinearImage r = resize_bilinear(normals, width, height);
    std::vector<double> data(r.data().begin(), r.data().end());
    for (std::size_t i = 0; i < r.pixel_count(); ++i) {
        const double norm = std::sqrt(data[3 * i] * data[3 * i] + data[3 * i + 1] * data[3 * i + 1] +
                                      data[3 * i + 2] * data[3 * i + 2]);
        for (int c = 0; c < 3; ++c) data[3 * i + c] = norm > 1e-6 ? data[3 * i + c] / norm : 0.0;
    }
    return NormalMap(LinearImage(width, height, 3, std::move(data)));
}

BinaryMask load_mask(const fs::path& path, int width, int height) {
    const RawImage raw = read_png_raw(path);
    if (raw.channels != 1) throw IoError(path.string() + ": mask must be single-channel");
    std::vector<std::uint8_t> bits(raw.samples.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = raw.samples[i] != 0 ? 1 : 0;
    BinaryMask mask(raw.width, raw.height, std::move(bits));
    if (mask.width() == width && mask.height() == height) return mask;
    return resize_nearest(mask, width, height);
}

BinaryMask nsnd_for_photo(const RunConfig& config, const std::string& id, int width,
                          int height) {
    const fs::path depth_path = config.input_dir / (id + "_depth.pfm");
    const fs::path normal_path = config.input_dir / (id + "_normal.pfm");
    const bool has_depth = fs::exists(depth_path);
    const bool has_normal = fs::exists(normal_path);
    if (!has_depth && !has_normal) return BinaryMask::filled(width, height, false);
    if (has_depth != has_normal) {
        throw IoError("photo " + id + " has a depth map or a normal map but not both");
    }

    ScalarField depth = read_pfm_field(depth_path);
    if (depth.width() != width || depth.height() != height) {
        depth = resize_bilinear(depth, width, height);
    }
    const LinearImage normals = read_pfm(normal_path);
    if (normals.channels() != 3) throw IoError(normal_path.string() + ": expected 3 channels");

    const fs::path mask_path = config.input_dir / (id + "_mask.png");
    const BinaryMask mask = fs::exists(mask_path) ? load_mask(mask_path, width, height)
                                                  : BinaryMask::filled(width, height, true);
    return generate_nsnd(DepthMap(std::move(depth)), resize_normals(normals, width, height), mask,
                         config.nsnd);
}

json candidates_for_photo(const RunConfig& config, const AnnotationSet& ann, const std::string& id,
                          int width, int height) {
    LinearImage img = read_png(config.input_dir / (id + ".png"));
    if (img.width() != width || img.height() != height) img = resize_bilinear(img, width, height);
    const ShadowCandidateFinder finder(img);

    json found = json::array();
    int equal = 0;
    int rejected = 0;
    int invalid = 0;
    for (std::size_t k = 0; k < ann.comparisons.size(); ++k) {
        const auto& c = ann.comparisons[k];
        if (majority_vote(c) == Judgment::Equal) {
            ++equal;
            continue;
        }
        std::optional<ShadowCandidate> cand;
        try {
            cand = finder.find(c);
        } catch (const InvalidArgument&) {
            ++invalid;
            continue;
        }
        if (!cand) {
            ++rejected;
            continue;
        }
        found.push_back({{"comparison", k},
                         {"pos", {cand->position.x, cand->position.y}},
                         {"pixel", {cand->x, cand->y}},
                         {"gradient", cand->gradient}});
    }
    return {{"photo_id", id},
            {"candidates", found},
            {"equal_votes", equal},
            {"rejected", rejected},
            {"invalid", invalid}};
}

}  // namespace

std::vector<std::string> resolve_photo_ids(const RunConfig& config, const std::string& suffix) {
    return ids_from(config, config.input_dir, suffix);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

CommandResult cmd_labelgen(const RunConfig& config) {
    config.nsnd.validate();
    if (config.smooth_erosion < 0) throw InvalidArgument("smooth erosion must be >= 0");
    prepare_output(config);
    const auto ids = resolve_photo_ids(config, ".json");

    auto slots = run_photos(ids, config.jobs, [&](const std::string& id) {
        const AnnotationSet ann = load_annotations(config.input_dir / (id + ".json"));
        const auto [w, h] = fit_max_dim(ann.width, ann.height, config.max_dim);

        const BinaryMask smooth = rasterize_smooth_regions(ann.regions, w, h, config.smooth_erosion);
        const BinaryMask nsnd = nsnd_for_photo(config, id, w, h);
        std::vector<ShadowBoundaryPoint> validated;
        for (const auto& p : ann.shadow_points) {
            if (p.validated) validated.push_back(p);
        }
        const ShadingLabelMap labels = build_label_map(smooth, nsnd, validated, config.train);
        write_label_png(config.output_dir / (id + "_labels.png"), labels);

        if (config.emit_candidates && !ann.comparisons.empty()) {
            write_json(config.output_dir / (id + "_candidates.json"),
                       candidates_for_photo(config, ann, id, w, h));
        }
        return json{{"width", w},
                    {"height", h},
                    {"counts",
                     {{"smooth", labels.count(ShadingClass::Smooth)},
                      {"nsnd", labels.count(ShadingClass::NsNd)},
                      {"nssb", labels.count(ShadingClass::NsSb)}}}};
    });

    json params = {{"tau_depth", config.nsnd.tau_depth},
                   {"tau_normal", config.nsnd.tau_normal},
                   {"mask_erosion_iters", config.nsnd.mask_erosion_iters},
                   {"border_margin_frac", config.nsnd.border_margin_frac},
                   {"smooth_erosion", config.smooth_erosion},
                   {"max_dim", config.max_dim},
                   {"label_dilation", config.train}};
    return finish("labelgen", ids, slots, config.output_dir / "labelgen_summary.json",
                  {{"params", params}});
}

CommandResult cmd_decompose(const RunConfig& config) {
    config.retinex.validate();
    prepare_output(config);
    const auto ids = resolve_photo_ids(config, ".png");
    const fs::path heat_dir = config.heatmap_dir.empty() ? config.input_dir : config.heatmap_dir;

    auto slots = run_photos(ids, config.jobs, [&](const std::string& id) {
        const LinearImage img = as_rgb(load_photo(config.input_dir / (id + ".png"), config.max_dim));
        std::optional<HeatMap> heat;
        if (config.retinex.use_prior) {
            heat = read_heatmap(heatmap_path(heat_dir, id));
            if (heat->width() != img.width() || heat->height() != img.height()) {
                const ScalarField f(heat->width(), heat->height(),
                                    std::vector<double>(heat->data().begin(), heat->data().end()));
                heat = HeatMap(resize_bilinear(f, img.width(), img.height()));
            }
        }

        const RetinexResult r = decompose_retinex(img, config.retinex, heat ? &*heat : nullptr);
        write_pfm(config.output_dir / (id + "_shading.pfm"), r.layers.shading);
        write_pfm(config.output_dir / (id + "_reflectance.pfm"), r.layers.reflectance);
        write_png(config.output_dir / (id + "_reflectance.png"), r.layers.reflectance);
        return json{{"width", img.width()},
                    {"height", img.height()},
                    {"energy", r.energy},
                    {"cg_iterations", r.stats.iterations},
                    {"relative_residual", r.stats.relative_residual}};
    });

    json params = {{"t", config.retinex.t},
                   {"w_reflectance", config.retinex.w_reflectance},
                   {"use_prior", config.retinex.use_prior},
                   {"cg_tolerance", config.retinex.cg_tolerance},
                   {"max_dim", config.max_dim}};
    return finish("decompose", ids, slots, config.output_dir / "decompose_summary.json",
                  {{"params", params}});
}

namespace {

SmoothScoreMap load_scores(ScoreSource source, const fs::path& dir, const std::string& id,
                           int max_dim) {
    switch (source) {
        case ScoreSource::Scores:
            return read_scores_pfm(dir / (id + "_scores.pfm"), ScoreKind::NegGradient);
        case ScoreSource::Shading:
            return score_from_shading(read_pfm_field(dir / (id + "_shading.pfm")));
        case ScoreSource::Heatmap:
            return score_from_heatmap(read_heatmap(heatmap_path(dir, id)));
        case ScoreSource::ConstantReflectance:
            return score_constant_reflectance(load_photo(dir / (id + ".png"), max_dim));
    }
    throw InvalidArgument("unknown score source");
}

const char* suffix_for(ScoreSource source) {
    switch (source) {
        case ScoreSource::Scores: return "_scores.pfm";
        case ScoreSource::Shading: return "_shading.pfm";
        case ScoreSource::Heatmap: return "_heat.pfm";
        case ScoreSource::ConstantReflectance: return ".png";
    }
    return "";
}

const char* name_of(ScoreSource source) {
    switch (source) {
        case ScoreSource::Scores: return "scores";
        case ScoreSource::Shading: return "shading";
        case ScoreSource::Heatmap: return "heatmap";
        case ScoreSource::ConstantReflectance: return "constant-r";
    }
    return "";
}

}  // namespace

CommandResult cmd_classify(const RunConfig& config) {
    if (config.classify_source == ScoreSource::Scores) {
        throw InvalidArgument("classify needs a shading, heatmap or constant-r source");
    }
    prepare_output(config);
    const auto ids = resolve_photo_ids(config, suffix_for(config.classify_source));

    auto slots = run_photos(ids, config.jobs, [&](const std::string& id) {
        const SmoothScoreMap scores =
            load_scores(config.classify_source, config.input_dir, id, config.max_dim);
        write_scores_pfm(config.output_dir / (id + "_scores.pfm"), scores);
        return json{{"width", scores.width()}, {"height", scores.height()}};
    });
    return finish("classify", ids, slots, config.output_dir / "classify_summary.json",
                  {{"source", name_of(config.classify_source)}, {"max_dim", config.max_dim}});
}

CommandResult cmd_eval(const RunConfig& config) {
    config.balance.validate();
    if (config.methods.empty()) throw InvalidArgument("eval-pr needs at least one --method");
    prepare_output(config);
    const fs::path labels_dir = config.labels_dir.empty() ? config.input_dir : config.labels_dir;
    const auto ids = ids_from(config, labels_dir, "_labels.png");

    std::vector<std::optional<ShadingLabelMap>> labels(ids.size());
    std::vector<std::string> errors(ids.size());
    parallel_for(ids.size(), config.jobs, [&](std::size_t i) {
        try {
            labels[i] = read_label_png(labels_dir / (ids[i] + "_labels.png"));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    CommandResult result;
    std::vector<PrecisionAtRecallRow> rows;
    json methods = json::array();
    for (const auto& method : config.methods) {
        std::vector<std::vector<LabeledSample>> per_photo(ids.size());
        std::vector<std::string> method_errors(ids.size());
        parallel_for(ids.size(), config.jobs, [&](std::size_t i) {
            if (!labels[i]) return;
            try {
                const SmoothScoreMap scores =
                    load_scores(method.source, method.dir, ids[i], config.max_dim);
                per_photo[i] = collect_samples(scores, *labels[i], static_cast<int>(i));
            } catch (const std::exception& e) {
                method_errors[i] = e.what();
            }
        });

        std::vector<LabeledSample> merged;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!method_errors[i].empty()) {
                result.failures.push_back({ids[i], method.name + ": " + method_errors[i]});
            }
            merged.insert(merged.end(), per_photo[i].begin(), per_photo[i].end());
        }
        if (merged.empty()) {
            throw Error("method '" + method.name + "' has no labeled samples to evaluate");
        }

        const PrCurve curve = balanced_pr(merged, config.balance);
        write_pr_csv(config.output_dir / (method.name + "_pr.csv"), curve);
        rows.push_back(summarize(method.name, curve));

        json at_recall = json::object();
        for (std::size_t k = 0; k < kReportRecalls.size(); ++k) {
            const auto& p = rows.back().precision[k];
            at_recall[std::to_string(static_cast<int>(std::lround(kReportRecalls[k] * 100)))] =
                p ? json(*p) : json(nullptr);
        }
        methods.push_back({{"name", method.name},
                           {"source", name_of(method.source)},
                           {"samples", merged.size()},
                           {"class_counts", curve.class_counts},
                           {"class_weights", curve.class_weights},
                           {"curve_points", curve.points.size()},
                           {"precision_at_recall", at_recall}});
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!errors[i].empty()) result.failures.push_back({ids[i], errors[i]});
        else ++result.processed;
    }

    write_table_csv(config.output_dir / "precision_at_recall.csv", rows);
    const std::string table = format_table(rows);
    {
        std::ofstream txt(config.output_dir / "precision_at_recall.txt");
        txt << table;
    }
    std::cout << table;

    result.summary_path = config.output_dir / "eval_summary.json";
    write_json(result.summary_path,
               {{"command", "eval-pr"},
                {"balance", {config.balance.smooth, config.balance.nsnd, config.balance.nssb}},
                {"photos", ids.size()},
                {"methods", methods},
                {"failures", failures_json(result.failures)}});
    return result;
}

CommandResult cmd_report(const RunConfig& config) {
    prepare_output(config);
    if (!fs::is_directory(config.input_dir)) {
        throw IoError("input directory " + config.input_dir.string() + " not found");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.input_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 7 &&
            name.compare(name.size() - 7, 7, "_pr.csv") == 0) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no *_pr.csv files in " + config.input_dir.string());

    CommandResult result;
    std::vector<PrecisionAtRecallRow> rows;
    for (const auto& f : files) {
        const std::string name = f.filename().string();
        const std::string method = name.substr(0, name.size() - 7);
        try {
            rows.push_back(summarize(method, read_pr_csv(f)));
            ++result.processed;
        } catch (const std::exception& e) {
            result.failures.push_back({method, e.what()});
        }
    }
    result.summary_path = config.output_dir / "report.csv";
    write_table_csv(result.summary_path, rows);
    const std::string table = format_table(rows);
    {
        std::ofstream txt(config.output_dir / "report.txt");
        txt << table;
    }
    std::cout << table;
    return result;
}

}  // namespace shadelab::cli
