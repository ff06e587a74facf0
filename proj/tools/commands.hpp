/**
 * @file commands.hpp
 * @brief Batch commands behind the `shadelab` executable.
 *
 * Each command processes a list of photos with a bounded worker pool,
 * isolates per-photo failures, and writes a JSON summary next to its
 * outputs. Results are merged in photo-list order.
 */
#pragma once

#include <shadelab/annotations.hpp>
#include <shadelab/eval.hpp>
#include <shadelab/retinex.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace shadelab::cli {

namespace fs = std::filesystem;

/// Where an evaluated method's per-photo score source lives.
enum class ScoreSource { Scores, Shading, Heatmap, ConstantReflectance };

struct MethodSpec {
    std::string name;
    ScoreSource source = ScoreSource::Scores;
    fs::path dir;
};

/// Parses "name:kind:dir" where kind is scores | shading | heatmap | constant-r.
MethodSpec parse_method_spec(const std::string& text);

struct RunConfig {
    fs::path input_dir;
    fs::path output_dir;
    std::optional<fs::path> photo_list;
    int jobs = 0;  ///< 0 means hardware concurrency
    std::uint64_t seed = 0;
    int max_dim = 512;

    // labelgen
    NsNdParams nsnd;
    int smooth_erosion = 3;
    bool train = false;
    bool emit_candidates = false;

    // decompose
    RetinexParams retinex;
    fs::path heatmap_dir;

    // classify
    ScoreSource classify_source = ScoreSource::ConstantReflectance;

    // eval-pr
    fs::path labels_dir;
    BalanceSpec balance;
    std::vector<MethodSpec> methods;
};

struct PhotoFailure {
    std::string photo_id;
    std::string error;
};

struct CommandResult {
    std::size_t processed = 0;
    std::vector<PhotoFailure> failures;
    fs::path summary_path;

    int exit_code() const noexcept { return failures.empty() ? 0 : 1; }
};

/// Photo ids from the list file (one per line, '#' comments allowed) or,
/// without one, the sorted stems of `input_dir` files ending in `suffix`.
std::vector<std::string> resolve_photo_ids(const RunConfig& config, const std::string& suffix);

/// Runs fn(index) for every index in [0, count) on at most `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

CommandResult cmd_labelgen(const RunConfig& config);
CommandResult cmd_decompose(const RunConfig& config);
CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);

}  // namespace shadelab::cli
