#pragma once

#include <span>
#include <vector>

#include "dualgroup/projection.hpp"
#include "dualgroup/types.hpp"

namespace dualgroup {

// Per-point feature vectors aggregated from multi-view feature maps. A point
// visible in zero frames is flagged featureless and its row is undefined.
struct PointFeatures {
    std::int32_t count = 0;
    int channels = 0;
    std::vector<float> data;  // N x C row-major
    std::vector<std::uint8_t> featureless;

    const float* row(std::int32_t n) const {
        return data.data() + static_cast<size_t>(n) * channels;
    }
};

// Gathers, for every point, the feature vector at its visible pixel in each
// frame (pixel rescaled to feature-map resolution) and stores the mean.
// Frames are accumulated in ascending frame_id so results are reproducible
// bit for bit. Throws ValidationError when feature channel counts disagree
// or the map list does not match the frame list.
PointFeatures accumulate_features(const SceneCloud& cloud,
                                  std::span<const CameraFrame> frames,
                                  std::span<const FeatureMap> maps, double depth_tol);

// S = F3d_hat * F1d_hat^T with optional row-wise L2 normalization of both
// factors (cosine similarity). Zero-norm feature rows become featureless.
ScoreMatrix compute_scores(const PointFeatures& features, const LabelEmbeddings& labels,
                           bool normalize);

// Row-wise argmax of the score matrix; ties break toward the lowest class
// index, featureless rows map to SemanticLabeling::kIgnore.
SemanticLabeling classify_points(const ScoreMatrix& scores);

// Radius-BFS clustering of foreground points: two points connect iff they are
// within `radius` of each other and share the same class. Clusters smaller
// than min_cluster_size are dropped. Output masks are disjoint, internally
// sorted, and ordered by their smallest member index.
std::vector<PointMask> bfs_group(const SceneCloud& cloud, const SemanticLabeling& semantics,
                                 double radius, int min_cluster_size,
                                 std::span<const std::int32_t> background_class_ids);

}  // namespace dualgroup
