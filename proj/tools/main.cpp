// shadelab: batch label generation, Retinex decomposition, smooth-shading
// scoring and precision/recall evaluation.

#include "commands.hpp"

#include <shadelab/error.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using shadelab::cli::RunConfig;
namespace fs = std::filesystem;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& list) {
    cmd->add_option("-i,--input-dir", cfg.input_dir, "Input directory (default: $SAW_DATA_DIR)");
    cmd->add_option("-o,--output-dir", cfg.output_dir, "Output directory")->required();
    cmd->add_option("--photo-list", list, "File with one photo id per line");
    cmd->add_option("-j,--jobs", cfg.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", cfg.seed, "Seed recorded for reproducibility");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shading annotation processing, Retinex decomposition and PR evaluation"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string photo_list;
    std::string balance = "2:1:1";
    std::string source = "constant-r";
    std::vector<std::string> methods;

    auto* labelgen = app.add_subcommand("labelgen", "Generate per-pixel shading label maps");
    add_common(labelgen, cfg, photo_list);
    labelgen->add_option("--tau-depth", cfg.nsnd.tau_depth, "Depth gradient threshold")->capture_default_str();
    labelgen->add_option("--tau-normal", cfg.nsnd.tau_normal, "Normal gradient threshold")->capture_default_str();
    labelgen->add_option("--mask-erosion", cfg.nsnd.mask_erosion_iters, "Erosion iterations on depth masks")
        ->capture_default_str();
    labelgen->add_option("--border-margin", cfg.nsnd.border_margin_frac, "Ignored border, fraction of width")
        ->capture_default_str();
    labelgen->add_option("--smooth-erosion", cfg.smooth_erosion, "Erosion iterations on smooth regions")
        ->capture_default_str();
    labelgen->add_option("--max-dim", cfg.max_dim, "Maximum output dimension")->capture_default_str();
    labelgen->add_flag("--train", cfg.train, "Dilate non-smooth labels 5x5 (training labels)");
    labelgen->add_flag("--emit-candidates", cfg.emit_candidates,
                       "Write shadow-boundary candidates per photo (needs <id>.png)");

    auto* decompose = app.add_subcommand("decompose", "Retinex reflectance/shading decomposition");
    add_common(decompose, cfg, photo_list);
    decompose->add_option("--retinex-t", cfg.retinex.t, "Chromaticity threshold")->capture_default_str();
    decompose->add_option("--w-reflectance", cfg.retinex.w_reflectance, "Reflectance-constancy weight")
        ->capture_default_str();
    decompose->add_flag("--use-prior", cfg.retinex.use_prior, "Modulate weights by smooth-shading heatmaps");
    decompose->add_option("--heatmap-dir", cfg.heatmap_dir, "Directory of <id>_heat.pfm|png");
    decompose->add_option("--cg-tolerance", cfg.retinex.cg_tolerance, "Relative residual tolerance")
        ->capture_default_str();
    decompose->add_option("--max-dim", cfg.max_dim, "Resize so max dimension <= this (0 = keep)")
        ->capture_default_str();

    auto* classify = app.add_subcommand("classify", "Write smooth-shading score maps");
    add_common(classify, cfg, photo_list);
    classify->add_option("--source", source, "constant-r | shading | heatmap")
        ->check(CLI::IsMember({"constant-r", "shading", "heatmap"}))
        ->capture_default_str();
    classify->add_option("--max-dim", cfg.max_dim, "Resize input photos (constant-r)")->capture_default_str();

    auto* eval = app.add_subcommand("eval-pr", "Class-balanced precision/recall evaluation");
    add_common(eval, cfg, photo_list);
    eval->add_option("--labels-dir", cfg.labels_dir, "Directory of <id>_labels.png (default: input dir)");
    eval->add_option("--method", methods, "name:kind:dir, kind = scores|shading|heatmap|constant-r")
        ->required();
    eval->add_option("--balance", balance, "S:NS-ND:NS-SB class balance")->capture_default_str();
    eval->add_option("--max-dim", cfg.max_dim, "Resize input photos (constant-r)")->capture_default_str();

    auto* report = app.add_subcommand("report", "Tabulate precision at 30/50/70% recall from *_pr.csv");
    add_common(report, cfg, photo_list);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!photo_list.empty()) cfg.photo_list = fs::path(photo_list);
        if (cfg.input_dir.empty()) {
            if (const char* env = std::getenv("SAW_DATA_DIR")) cfg.input_dir = env;
        }
        if (cfg.input_dir.empty() && !(eval->parsed() && !cfg.labels_dir.empty())) {
            throw shadelab::InvalidArgument("no --input-dir given and SAW_DATA_DIR is unset");
        }

        shadelab::cli::CommandResult result;
        if (labelgen->parsed()) {
            result = shadelab::cli::cmd_labelgen(cfg);
        } else if (decompose->parsed()) {
            result = shadelab::cli::cmd_decompose(cfg);
        } else if (classify->parsed()) {
            cfg.classify_source = shadelab::cli::parse_method_spec("x:" + source + ":.").source;
            result = shadelab::cli::cmd_classify(cfg);
        } else if (eval->parsed()) {
            cfg.balance = shadelab::BalanceSpec::parse(balance);
            for (const auto& m : methods) cfg.methods.push_back(shadelab::cli::parse_method_spec(m));
            result = shadelab::cli::cmd_eval(cfg);
        } else {
            result = shadelab::cli::cmd_report(cfg);
        }

        std::cerr << result.processed << " processed, " << result.failures.size() << " failed";
        if (!result.summary_path.empty()) std::cerr << " (summary: " << result.summary_path.string() << ")";
        std::cerr << '\n';
        for (const auto& f : result.failures) std::cerr << "  " << f.photo_id << ": " << f.error << '\n';
        return result.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
