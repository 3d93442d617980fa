#include "dualgroup/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dualgroup/error.hpp"
#include "dualgroup/refine.hpp"
#include "dualgroup/sgb.hpp"
#include "dualgroup/tensor.hpp"

namespace dualgroup {

namespace {

class StageClock {
public:
    explicit StageClock(PipelineDiagnostics& diag) : diag_(diag) {}

    template <typename F>
    auto run(const std::string& stage, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                finish(stage, start);
            } else {
                auto result = body();
                finish(stage, start);
                return result;
            }
        } catch (const ParseError&) {
            throw;
        } catch (const PipelineError&) {
            throw;
        } catch (const std::exception& e) {
            throw PipelineError(stage, e.what());
        }
    }

private:
    void finish(const std::string& stage,
                std::chrono::steady_clock::time_point start) {
        const auto end = std::chrono::steady_clock::now();
        diag_.timings.push_back(
            {stage, std::chrono::duration<double, std::milli>(end - start).count()});
    }

    PipelineDiagnostics& diag_;
};

}  // namespace

PipelineResult run_pipeline(const SceneBundle& bundle, const PipelineConfig& config) {
    if (const auto violations = validate(config); !violations.empty())
        throw ValidationError(violations);

    PipelineResult result;
    PipelineDiagnostics& diag = result.diagnostics;
    diag.point_count = bundle.cloud.size();
    diag.frame_count = static_cast<int>(bundle.frames.size());
    diag.class_count = bundle.labels.class_count();
    StageClock clock(diag);

    if (bundle.frames.empty())
        diag.warnings.push_back("scene has zero frames: every point is featureless");

    // ---- superpoints (shared by the mask branch and label propagation) ----
    result.superpoints = clock.run("superpoints", [&] {
        if (bundle.superpoints) return *bundle.superpoints;
        const OversegmentResult seg =
            oversegment(bundle.cloud, config.bfs_radius, config.superpoint_angle_deg,
                        config.superpoint_knn_normals);
        diag.degenerate_normals = seg.degenerate_normals;
        if (seg.degenerate_normals > 0)
            diag.warnings.push_back(std::to_string(seg.degenerate_normals) +
                                    " degenerate normal neighborhoods (assigned (0,0,1))");
        return seg.partition;
    });
    diag.superpoint_count = result.superpoints.count;

    // ---- semantic guidance branch ------------------------------------------
    const PointFeatures features = clock.run("accumulate_features", [&] {
        if (bundle.frames.empty()) {
            // no views at all: every point is featureless by definition
            PointFeatures empty;
            empty.count = bundle.cloud.size();
            empty.channels = bundle.labels.channels;
            empty.data.assign(
                static_cast<size_t>(empty.count) * std::max(empty.channels, 0), 0.f);
            empty.featureless.assign(static_cast<size_t>(empty.count), 1);
            return empty;
        }
        return accumulate_features(bundle.cloud, bundle.frames, bundle.features,
                                   config.depth_tolerance);
    });
    for (const std::uint8_t f : features.featureless) diag.featureless_points += f;

    const ScoreMatrix scores = clock.run("compute_scores", [&] {
        return compute_scores(features, bundle.labels, config.normalize_embeddings);
    });
    const SemanticLabeling classified =
        clock.run("classify_points", [&] { return classify_points(scores); });

    std::vector<std::int32_t> background_ids;
    for (const std::string& name : config.background_classes) {
        bool found = false;
        for (size_t k = 0; k < bundle.labels.classes.size(); ++k) {
            if (bundle.labels.classes[k] == name) {
                background_ids.push_back(static_cast<std::int32_t>(k));
                found = true;
                break;
            }
        }
        if (!found)
            diag.warnings.push_back("background class '" + name +
                                    "' is not in the scene label set");
    }

    const std::vector<PointMask> coarse = clock.run("bfs_group", [&] {
        return bfs_group(bundle.cloud, classified, config.bfs_radius,
                         config.min_cluster_size, background_ids);
    });
    diag.coarse_mask_count = static_cast<std::int32_t>(coarse.size());

    // ---- mask guidance branch ----------------------------------------------
    const std::vector<PromptCentroid> centroids = clock.run("superpoint_centroids", [&] {
        return superpoint_centroids(bundle.cloud, result.superpoints);
    });
    result.prompts = clock.run("project_prompts", [&] {
        return project_prompts(bundle.cloud, centroids, bundle.frames,
                               config.depth_tolerance);
    });

    std::vector<PointMask> fine;
    if (!bundle.frames.empty()) {
        if (bundle.prompt_masks.empty())
            throw PipelineError("vote_fine_masks",
                                "scene provides no prompt-mask rasters; export prompts and "
                                "run the external mask generator first");
        fine = clock.run("vote_fine_masks", [&] {
            return vote_fine_masks(bundle.cloud, bundle.frames, bundle.prompt_masks,
                                   config.depth_tolerance)
                .masks;
        });
    }
    diag.fine_mask_count = static_cast<std::int32_t>(fine.size());

    // ---- instance refinement ----------------------------------------------
    result.ensemble = clock.run("granularity_aware_assign", [&] {
        return granularity_aware_assign(coarse, fine, config.overlap_threshold);
    });
    diag.ensemble_mask_count = static_cast<std::int32_t>(result.ensemble.size());

    result.instances = clock.run("merge_small_instances", [&] {
        return merge_small_instances(bundle.cloud, result.ensemble,
                                     config.small_instance_threshold, config.knn_k);
    });

    // ---- semantic refinement ------------------------------------------------
    const SemanticLabeling selected = clock.run("semantic_select", [&] {
        return semantic_select(scores, classified, config.select_top_alpha);
    });
    result.semantics = clock.run("superpoint_propagate", [&] {
        return superpoint_propagate(selected, result.superpoints);
    });

    std::int32_t instance_labeled = 0, semantic_labeled = 0, max_id = -1;
    for (const std::int32_t id : result.instances.ids) {
        if (id >= 0) ++instance_labeled;
        max_id = std::max(max_id, id);
    }
    for (const std::int32_t cls : result.semantics.classes)
        if (cls >= 0) ++semantic_labeled;
    diag.instance_count = max_id + 1;
    if (diag.point_count > 0) {
        diag.instance_labeled_fraction =
            static_cast<double>(instance_labeled) / diag.point_count;
        diag.semantic_labeled_fraction =
            static_cast<double>(semantic_labeled) / diag.point_count;
    }
    return result;
}

void write_labels(const PipelineResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_tensor(out_dir / "instance_labels.dbgt",
                 make_i32(result.instances.ids, {result.instances.ids.size()}));
    write_tensor(out_dir / "semantic_labels.dbgt",
                 make_i32(result.semantics.classes, {result.semantics.classes.size()}));
}

void write_prompts(const PromptSet& prompts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError(path.string(), -1, "cannot open file for writing");
    for (const PromptSet::Entry& e : prompts.entries)
        out << e.frame_id << " " << e.prompt_id << " " << e.pixel.row << " " << e.pixel.col
            << "\n";
}

void write_ensemble(std::span<const PointMask> masks, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError(path.string(), -1, "cannot open file for writing");
    for (size_t i = 0; i < masks.size(); ++i) {
        out << i << ":";
        for (const std::int32_t p : masks[i].indices) out << " " << p;
        out << "\n";
    }
}

std::string format_diagnostics(const PipelineDiagnostics& diag) {
    std::ostringstream out;
    out << "points = " << diag.point_count << "\n";
    out << "frames = " << diag.frame_count << "\n";
    out << "classes = " << diag.class_count << "\n";
    out << "superpoints = " << diag.superpoint_count << "\n";
    out << "featureless_points = " << diag.featureless_points << "\n";
    out << "coarse_masks = " << diag.coarse_mask_count << "\n";
    out << "fine_masks = " << diag.fine_mask_count << "\n";
    out << "ensemble_masks = " << diag.ensemble_mask_count << "\n";
    out << "instances = " << diag.instance_count << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", diag.instance_labeled_fraction);
    out << "instance_labeled_fraction = " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", diag.semantic_labeled_fraction);
    out << "semantic_labeled_fraction = " << buf << "\n";
    for (const StageTiming& t : diag.timings) {
        std::snprintf(buf, sizeof(buf), "%.2f", t.milliseconds);
        out << "time_ms." << t.stage << " = " << buf << "\n";
    }
    for (const std::string& w : diag.warnings) out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace dualgroup
