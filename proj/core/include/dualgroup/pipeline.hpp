#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dualgroup/manifest.hpp"
#include "dualgroup/mgb.hpp"
#include "dualgroup/types.hpp"

namespace dualgroup {

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

struct PipelineDiagnostics {
    std::int32_t point_count = 0;
    int frame_count = 0;
    int class_count = 0;
    std::int32_t superpoint_count = 0;
    std::int32_t featureless_points = 0;
    std::int32_t coarse_mask_count = 0;       // Q
    std::int32_t fine_mask_count = 0;         // W
    std::int32_t ensemble_mask_count = 0;     // |Gamma|
    std::int32_t instance_count = 0;          // after small-instance merging
    double instance_labeled_fraction = 0.0;
    double semantic_labeled_fraction = 0.0;
    int degenerate_normals = 0;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;
};

struct PipelineResult {
    InstanceLabeling instances;   // Y_I
    SemanticLabeling semantics;   // Y_S
    std::vector<PointMask> ensemble;
    SuperpointPartition superpoints;
    PromptSet prompts;
    PipelineDiagnostics diagnostics;
};

// Runs the two grouping branches and both refinement passes in order:
// features -> scores -> classify -> radius BFS (coarse masks);
// superpoints -> centroids -> prompt-mask voting (fine masks);
// keep-or-split -> small-instance merging (instance labels);
// per-class selection -> superpoint propagation (semantic labels).
// Deterministic for identical inputs and config. Stage failures are
// rethrown as PipelineError naming the stage.
PipelineResult run_pipeline(const SceneBundle& bundle, const PipelineConfig& config);

// Output writers shared by the CLI and tests; file bytes depend only on the
// labeling content.
void write_labels(const PipelineResult& result, const std::filesystem::path& out_dir);
void write_prompts(const PromptSet& prompts, const std::filesystem::path& path);
void write_ensemble(std::span<const PointMask> masks, const std::filesystem::path& path);

std::string format_diagnostics(const PipelineDiagnostics& diag);

}  // namespace dualgroup
