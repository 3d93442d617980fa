#pragma once

#include <span>
#include <vector>

#include "dualgroup/projection.hpp"
#include "dualgroup/types.hpp"

namespace dualgroup {

// One prompt pixel per (frame, superpoint centroid) pair, sorted by
// (frame_id, prompt_id). Pixels are at RGB resolution.
struct PromptSet {
    struct Entry {
        int frame_id = 0;
        std::int32_t prompt_id = 0;
        Pixel pixel;
    };
    std::vector<Entry> entries;
};

// Externally produced per-frame id raster at RGB resolution; -1 = background.
struct PromptMaskRaster {
    int frame_id = 0;
    int height = 0, width = 0;
    std::vector<std::int32_t> ids;

    std::int32_t at(int row, int col) const {
        return ids[static_cast<size_t>(row) * width + col];
    }
};

struct OversegmentResult {
    SuperpointPartition partition;
    int degenerate_normals = 0;  // neighborhoods of rank < 2, assigned (0,0,1)
};

// Normal-based region growing: per-point normals from a PCA over the
// knn_normals nearest neighbors, then BFS over `radius` neighborhoods joining
// points whose (unoriented) normals differ by at most angle_threshold_deg.
// Every point is assigned; superpoints are ordered by smallest member index.
OversegmentResult oversegment(const SceneCloud& cloud, double radius,
                              double angle_threshold_deg, int knn_normals);

struct PromptCentroid {
    std::int32_t prompt_id = 0;   // superpoint id
    std::int32_t point_index = 0; // member closest to the member mean
};

// For each superpoint, the member point minimizing distance to the member
// mean; ties break toward the lower point index.
std::vector<PromptCentroid> superpoint_centroids(const SceneCloud& cloud,
                                                 const SuperpointPartition& sp);

// Projects every centroid into every frame, keeping the visible ones.
PromptSet project_prompts(const SceneCloud& cloud, std::span<const PromptCentroid> centroids,
                          std::span<const CameraFrame> frames, double depth_tol);

struct VoteResult {
    std::vector<PointMask> masks;  // one per distinct winning id, id ascending
    InstanceLabeling labels;       // per-point winning prompt id, -1 = no votes
};

// Per-point majority vote over the raster prompt ids seen at the point's
// visible pixels; -1 raster cells contribute no vote, ties break toward the
// lower id. Throws ValidationError when rasters do not match frames.
VoteResult vote_fine_masks(const SceneCloud& cloud, std::span<const CameraFrame> frames,
                           std::span<const PromptMaskRaster> rasters, double depth_tol);

}  // namespace dualgroup
