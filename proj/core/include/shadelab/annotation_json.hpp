/**
 * @file annotation_json.hpp
 * @brief Per-photo annotation JSON and coded label-map PNG files.
 *
 * Annotation schema:
 *   { "photo_id": str, "width": int, "height": int,
 *     "regions":       [ {"vertices": [[x, y], ...]} ],
 *     "comparisons":   [ {"p1": [x, y], "p2": [x, y], "votes": ["P1"|"P2"|"E", ...]} ],
 *     "shadow_points": [ {"pos": [x, y], "validated": bool} ] }
 * Missing arrays are read as empty.
 */
#pragma once

#include <shadelab/annotations.hpp>

#include <filesystem>
#include <string>

namespace shadelab {

/// Parses and validates an annotation document. Throws IoError on malformed
/// JSON or schema violations, InvalidArgument on invalid geometry.
AnnotationSet parse_annotations(const std::string& json_text);
std::string serialize_annotations(const AnnotationSet& set);

AnnotationSet load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path, const AnnotationSet& set);

/// Single-channel 8-bit PNG: 0 = Unlabeled, 1 = Smooth, 2 = NsNd, 3 = NsSb.
void write_label_png(const std::filesystem::path& path, const ShadingLabelMap& labels);
ShadingLabelMap read_label_png(const std::filesystem::path& path);

}  // namespace shadelab
