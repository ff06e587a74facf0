#include <shadelab/annotation_json.hpp>

#include <shadelab/error.hpp>
#include <shadelab/image_io.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace shadelab {

using nlohmann::json;

namespace {

NormPoint point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw IoError("expected an [x, y] point");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_to(NormPoint p) { return json::array({p.x, p.y}); }

Judgment judgment_from(const std::string& s) {
    if (s == "P1") return Judgment::Point1Darker;
    if (s == "P2") return Judgment::Point2Darker;
    if (s == "E") return Judgment::Equal;
    throw IoError("unknown vote '" + s + "'");
}

}  // namespace

AnnotationSet parse_annotations(const std::string& json_text) {
    AnnotationSet set;
    try {
        const json doc = json::parse(json_text);
        set.photo_id = doc.at("photo_id").get<std::string>();
        set.width = doc.at("width").get<int>();
        set.height = doc.at("height").get<int>();
        if (set.width <= 0 || set.height <= 0) throw IoError("photo dimensions must be positive");

        for (const auto& r : doc.value("regions", json::array())) {
            ConstantShadingRegion region;
            for (const auto& v : r.at("vertices")) region.vertices.push_back(point_from(v));
            set.regions.push_back(std::move(region));
        }
        for (const auto& c : doc.value("comparisons", json::array())) {
            PointComparison cmp;
            cmp.point1 = point_from(c.at("p1"));
            cmp.point2 = point_from(c.at("p2"));
            for (const auto& v : c.at("votes")) cmp.votes.push_back(judgment_from(v.get<std::string>()));
            set.comparisons.push_back(std::move(cmp));
        }
        for (const auto& s : doc.value("shadow_points", json::array())) {
            set.shadow_points.push_back({point_from(s.at("pos")), s.at("validated").get<bool>()});
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("annotation JSON: ") + e.what());
    }

    for (const auto& r : set.regions) validate(r);
    for (const auto& c : set.comparisons) validate(c);
    for (const auto& s : set.shadow_points) {
        if (!(s.position.x >= 0.0 && s.position.x <= 1.0 && s.position.y >= 0.0 &&
              s.position.y <= 1.0)) {
            throw InvalidArgument("shadow point outside [0,1]^2");
        }
    }
    return set;
}

std::string serialize_annotations(const AnnotationSet& set) {
    json doc;
    doc["photo_id"] = set.photo_id;
    doc["width"] = set.width;
    doc["height"] = set.height;
    doc["regions"] = json::array();
    for (const auto& r : set.regions) {
        json verts = json::array();
        for (const auto& v : r.vertices) verts.push_back(point_to(v));
        doc["regions"].push_back({{"vertices", verts}});
    }
    doc["comparisons"] = json::array();
    for (const auto& c : set.comparisons) {
        json votes = json::array();
        for (auto v : c.votes) votes.push_back(to_string(v));
        doc["comparisons"].push_back(
            {{"p1", point_to(c.point1)}, {"p2", point_to(c.point2)}, {"votes", votes}});
    }
    doc["shadow_points"] = json::array();
    for (const auto& s : set.shadow_points) {
        doc["shadow_points"].push_back({{"pos", point_to(s.position)}, {"validated", s.validated}});
    }
    return doc.dump(2);
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_annotations(ss.str());
}

void save_annotations(const std::filesystem::path& path, const AnnotationSet& set) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << serialize_annotations(set) << '\n';
}

void write_label_png(const std::filesystem::path& path, const ShadingLabelMap& labels) {
    RawImage raw{labels.width(), labels.height(), 1, 8, {}};
    raw.samples.reserve(labels.size());
    for (auto c : labels.labels()) raw.samples.push_back(static_cast<std::uint16_t>(c));
    write_png_raw(path, raw);
}

ShadingLabelMap read_label_png(const std::filesystem::path& path) {
    const RawImage raw = read_png_raw(path);
    if (raw.channels != 1) throw IoError(path.string() + ": label map must be single-channel");
    std::vector<ShadingClass> labels(raw.samples.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (raw.samples[i] > 3) throw IoError(path.string() + ": invalid label code");
        labels[i] = static_cast<ShadingClass>(raw.samples[i]);
    }
    return ShadingLabelMap(raw.width, raw.height, std::move(labels));
}

}  // namespace shadelab
