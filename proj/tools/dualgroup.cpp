// Command-line front end: dataset validation, synthetic scene generation,
// pseudo-label generation, evaluation, and PLY export.
//
// Exit codes: 0 success, 2 input/parse error, 3 invariant violation,
// 4 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualgroup/config.hpp"
#include "dualgroup/error.hpp"
#include "dualgroup/manifest.hpp"
#include "dualgroup/metrics.hpp"
#include "dualgroup/pipeline.hpp"
#include "dualgroup/ply.hpp"
#include "dualgroup/synth.hpp"
#include "dualgroup/tensor.hpp"

namespace fs = std::filesystem;
using namespace dualgroup;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInternal = 4;

PipelineConfig load_config(const std::string& config_path,
                           const std::vector<std::string>& overrides) {
    PipelineConfig config;
    if (!config_path.empty()) config = read_config(config_path);
    for (const std::string& kv : overrides) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParseError("--set", -1, "expected key=value, got '" + kv + "'");
        apply_config_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (const auto violations = validate(config); !violations.empty())
        throw ValidationError(violations);
    return config;
}

int run_validate(const std::string& manifest_path) {
    const SceneBundle bundle = load_scene(manifest_path);
    std::cout << "manifest ok\n";
    std::cout << "scene_id = " << bundle.cloud.scene_id << "\n";
    std::cout << "points = " << bundle.cloud.size() << "\n";
    std::cout << "frames = " << bundle.frames.size() << "\n";
    std::cout << "classes = " << bundle.labels.class_count() << "\n";
    std::cout << "superpoints = "
              << (bundle.superpoints ? std::to_string(bundle.superpoints->count) : "(compute)")
              << "\n";
    std::cout << "prompt_masks = " << (bundle.prompt_masks.empty() ? "no" : "yes") << "\n";
    std::cout << "ground_truth = " << (bundle.ground_truth ? "yes" : "no") << "\n";
    return kExitOk;
}

int run_pseudolabel(const std::string& manifest_path, const std::string& config_path,
                    const std::vector<std::string>& overrides, const std::string& out_dir,
                    const std::string& prompts_path, const std::string& ensemble_path) {
    const PipelineConfig config = load_config(config_path, overrides);
    const SceneBundle bundle = load_scene(manifest_path);

    if (bundle.prompt_masks.empty() && !bundle.frames.empty() && !prompts_path.empty()) {
        // No rasters yet: emit the prompt pixels for the external mask
        // generator and stop, so the caller can produce the rasters.
        const auto sp = bundle.superpoints
                            ? *bundle.superpoints
                            : oversegment(bundle.cloud, config.bfs_radius,
                                          config.superpoint_angle_deg,
                                          config.superpoint_knn_normals)
                                  .partition;
        const auto centroids = superpoint_centroids(bundle.cloud, sp);
        const PromptSet prompts =
            project_prompts(bundle.cloud, centroids, bundle.frames, config.depth_tolerance);
        write_prompts(prompts, prompts_path);
        std::cout << "no prompt-mask rasters in manifest; wrote " << prompts.entries.size()
                  << " prompts to " << prompts_path << " and stopped\n";
        return kExitOk;
    }

    if (bundle.prompt_masks.empty() && !bundle.frames.empty())
        throw ValidationError(
            "scene provides no prompt-mask rasters; run with --export-prompts to emit "
            "prompt pixels for the external mask generator first");

    const PipelineResult result = run_pipeline(bundle, config);
    write_labels(result, out_dir);
    if (!prompts_path.empty()) write_prompts(result.prompts, prompts_path);
    if (!ensemble_path.empty()) write_ensemble(result.ensemble, ensemble_path);
    std::cout << format_diagnostics(result.diagnostics);
    std::cout << "wrote " << (fs::path(out_dir) / "instance_labels.dbgt").string() << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "semantic_labels.dbgt").string() << "\n";
    return kExitOk;
}

std::vector<std::int32_t> read_label_file(const fs::path& path, size_t expected) {
    const Tensor t = read_tensor(path);
    if (t.dtype != Dtype::i32 || t.dims.size() != 1)
        throw ParseError(path.string(), -1, "expected a rank-1 i32 tensor");
    const auto values = t.as<std::int32_t>();
    if (values.size() != expected)
        throw ValidationError("label file " + path.string() + " has " +
                              std::to_string(values.size()) + " entries, scene has " +
                              std::to_string(expected) + " points");
    return {values.begin(), values.end()};
}

int run_eval(const std::string& manifest_path, const std::string& labels_dir,
             const std::string& csv_path) {
    const SceneBundle bundle = load_scene(manifest_path);
    if (!bundle.ground_truth)
        throw ValidationError("eval: manifest provides no ground truth files");
    const auto n = static_cast<size_t>(bundle.cloud.size());

    InstanceLabeling instances;
    instances.ids = read_label_file(fs::path(labels_dir) / "instance_labels.dbgt", n);
    SemanticLabeling semantics;
    semantics.classes = read_label_file(fs::path(labels_dir) / "semantic_labels.dbgt", n);

    const GroundTruth& gt = *bundle.ground_truth;
    const MiouReport miou_report =
        miou(semantics, gt.classes, bundle.labels.class_count());
    const auto predictions = predictions_from_labeling(instances, semantics);
    const ApReport ap = instance_ap(predictions, gt);
    const PrecisionRecall pr = mprec_mrec(predictions, gt);

    char buf[64];
    auto print = [&](const char* key, double value) {
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        std::cout << key << " = " << buf << "\n";
    };
    print("miou", miou_report.mean);
    print("ap", ap.ap);
    print("ap50", ap.ap50);
    print("ap25", ap.ap25);
    print("mprec", pr.precision);
    print("mrec", pr.recall);
    for (int k = 0; k < bundle.labels.class_count(); ++k) {
        if (!miou_report.present[static_cast<size_t>(k)]) continue;
        std::snprintf(buf, sizeof(buf), "%.6f",
                      miou_report.per_class_iou[static_cast<size_t>(k)]);
        std::cout << "iou." << bundle.labels.classes[static_cast<size_t>(k)] << " = " << buf
                  << "\n";
    }
    for (size_t i = 0; i < ap.class_ids.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", ap.per_class_ap[i]);
        std::cout << "ap." << bundle.labels.classes[static_cast<size_t>(ap.class_ids[i])]
                  << " = " << buf << "\n";
    }

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv) throw ParseError(csv_path, -1, "cannot open file for writing");
        csv << "metric,class,value\n";
        auto row = [&](const std::string& metric, const std::string& cls, double value) {
            std::snprintf(buf, sizeof(buf), "%.6f", value);
            csv << metric << "," << cls << "," << buf << "\n";
        };
        row("miou", "", miou_report.mean);
        row("ap", "", ap.ap);
        row("ap50", "", ap.ap50);
        row("ap25", "", ap.ap25);
        row("mprec", "", pr.precision);
        row("mrec", "", pr.recall);
        for (int k = 0; k < bundle.labels.class_count(); ++k)
            if (miou_report.present[static_cast<size_t>(k)])
                row("iou", bundle.labels.classes[static_cast<size_t>(k)],
                    miou_report.per_class_iou[static_cast<size_t>(k)]);
        for (size_t i = 0; i < ap.class_ids.size(); ++i)
            row("ap", bundle.labels.classes[static_cast<size_t>(ap.class_ids[i])],
                ap.per_class_ap[i]);
    }
    return kExitOk;
}

int run_synth(const SynthSpec& spec, const std::string& out_dir) {
    const SynthScene scene = generate_synthetic(spec);
    write_synth_dataset(scene, out_dir);
    std::cout << "points = " << scene.bundle.cloud.size() << "\n";
    std::cout << "instances = " << spec.instance_count << "\n";
    std::cout << "frames = " << spec.frame_count << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "manifest.txt").string() << "\n";
    return kExitOk;
}

int run_export_ply(const std::string& manifest_path, const std::string& labels_path,
                   const std::string& out_path) {
    const SceneBundle bundle = load_scene(manifest_path);
    const auto labels =
        read_label_file(labels_path, static_cast<size_t>(bundle.cloud.size()));
    export_ply(bundle.cloud, labels, out_path);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-label generation and evaluation for 3D point-cloud scenes"};
    app.require_subcommand(1);

    // pseudolabel
    auto* pseudo = app.add_subcommand(
        "pseudolabel", "Generate instance and semantic pseudo labels from a manifest");
    std::string manifest_path, config_path, out_dir = "labels", prompts_path, ensemble_path;
    std::vector<std::string> overrides;
    pseudo->add_option("--manifest", manifest_path, "Scene manifest file")->required();
    pseudo->add_option("--config", config_path, "Pipeline config file (key = value)");
    pseudo->add_option("--set", overrides, "Override a config key, e.g. --set knn_k=2");
    pseudo->add_option("--out", out_dir, "Output directory for label tensors");
    pseudo->add_option("--export-prompts", prompts_path,
                       "Write prompt pixels (frame_id prompt_id h w per line)");
    pseudo->add_option("--export-ensemble", ensemble_path,
                       "Write ensemble masks as index-set text");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate labels against ground truth");
    std::string eval_manifest, eval_labels, csv_path;
    eval->add_option("--manifest", eval_manifest, "Manifest with gt_instances/gt_classes")
        ->required();
    eval->add_option("--labels", eval_labels, "Directory holding label tensors")->required();
    eval->add_option("--csv", csv_path, "Also write the report as CSV");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    SynthSpec spec;
    std::string synth_out;
    synth->add_option("--out", synth_out, "Output dataset directory")->required();
    synth->add_option("--seed", spec.seed, "Random seed");
    synth->add_option("--instances", spec.instance_count, "Number of box instances");
    synth->add_option("--classes", spec.class_count, "Number of classes");
    synth->add_option("--frames", spec.frame_count, "Number of camera frames");
    synth->add_option("--points-min", spec.points_min, "Min points per instance");
    synth->add_option("--points-max", spec.points_max, "Max points per instance");
    synth->add_option("--room", spec.room_extent, "Room extent in meters");
    synth->add_option("--image-height", spec.image_height, "Raster height");
    synth->add_option("--image-width", spec.image_width, "Raster width");
    synth->add_option("--feature-flip-rate", spec.feature_flip_rate,
                      "Probability of a wrong-class feature pixel");
    synth->add_option("--mask-dilation", spec.mask_dilation_px,
                      "Dilate prompt masks by this many pixels");
    synth->add_option("--depth-noise", spec.depth_noise_sigma,
                      "Gaussian depth noise sigma in meters");

    // export-ply
    auto* ply = app.add_subcommand("export-ply", "Write a label-colored ASCII PLY");
    std::string ply_manifest, ply_labels, ply_out;
    ply->add_option("--manifest", ply_manifest, "Scene manifest file")->required();
    ply->add_option("--labels", ply_labels, "Label tensor (rank-1 i32)")->required();
    ply->add_option("--out", ply_out, "Output PLY path")->required();

    // validate
    auto* val = app.add_subcommand("validate", "Load a manifest and check every invariant");
    std::string val_manifest;
    val->add_option("--manifest", val_manifest, "Scene manifest file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (pseudo->parsed())
            return run_pseudolabel(manifest_path, config_path, overrides, out_dir,
                                   prompts_path, ensemble_path);
        if (eval->parsed()) return run_eval(eval_manifest, eval_labels, csv_path);
        if (synth->parsed()) return run_synth(spec, synth_out);
        if (ply->parsed()) return run_export_ply(ply_manifest, ply_labels, ply_out);
        if (val->parsed()) return run_validate(val_manifest);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << "invariant violations:\n";
        for (const std::string& v : e.violations()) std::cerr << "  - " << v << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
