#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dualgroup/geometry.hpp"

namespace dualgroup {

// A point's index in the scene cloud is its identity: every mask and label
// below refers to points by index.
struct ScenePoint {
    float x = 0.f, y = 0.f, z = 0.f;
    std::uint8_t r = 0, g = 0, b = 0;
};

struct SceneCloud {
    std::vector<ScenePoint> points;
    std::string scene_id;

    std::int32_t size() const { return static_cast<std::int32_t>(points.size()); }
    Vec3 position(std::int32_t n) const {
        const ScenePoint& p = points[static_cast<size_t>(n)];
        return {p.x, p.y, p.z};
    }
};

// 16-bit depth raster, millimeters, 0 = invalid.
struct DepthRaster {
    int height = 0, width = 0;
    std::vector<std::uint16_t> millimeters;

    std::uint16_t at(int row, int col) const {
        return millimeters[static_cast<size_t>(row) * width + col];
    }
};

struct CameraFrame {
    int frame_id = 0;
    Mat3 intrinsic;        // pixels, upper-triangular, applies at RGB resolution
    Mat4 extrinsic;        // world -> camera
    DepthRaster depth;
    int rgb_height = 0, rgb_width = 0;
};

// Per-frame dense feature map, row-major (h, w, c).
struct FeatureMap {
    int frame_id = 0;
    int height = 0, width = 0, channels = 0;
    std::vector<float> data;

    const float* at(int row, int col) const {
        return data.data() + (static_cast<size_t>(row) * width + col) * channels;
    }
};

// One embedding row per scene-level class name.
struct LabelEmbeddings {
    std::vector<std::string> classes;
    int channels = 0;
    std::vector<float> data;  // K x C row-major

    int class_count() const { return static_cast<int>(classes.size()); }
    const float* row(int k) const { return data.data() + static_cast<size_t>(k) * channels; }
};

// N x K point-vs-class similarity scores. Rows flagged featureless are
// undefined and must be ignored by all consumers.
struct ScoreMatrix {
    std::int32_t rows = 0;
    int cols = 0;
    std::vector<float> data;
    std::vector<std::uint8_t> featureless;

    float at(std::int32_t n, int k) const {
        return data[static_cast<size_t>(n) * cols + k];
    }
};

// Sorted, strictly increasing, non-empty set of point indices.
struct PointMask {
    std::vector<std::int32_t> indices;

    std::int32_t size() const { return static_cast<std::int32_t>(indices.size()); }
};

struct InstanceLabeling {
    static constexpr std::int32_t kUnassigned = -1;
    std::vector<std::int32_t> ids;
};

struct SemanticLabeling {
    static constexpr std::int32_t kIgnore = -1;
    std::vector<std::int32_t> classes;
};

// Superpoint partition: every point carries an id in [0, M).
struct SuperpointPartition {
    std::vector<std::int32_t> sp_ids;
    std::int32_t count = 0;
};

struct PipelineConfig {
    double bfs_radius = 0.04;            // meters
    double overlap_threshold = 0.4;      // mask-split ratio in [0, 1]
    int small_instance_threshold = 200;  // points
    double select_top_alpha = 30.0;      // percent in (0, 100]
    double depth_tolerance = 0.05;       // meters
    int min_cluster_size = 50;           // points
    int knn_k = 1;                       // neighbor links per point
    std::vector<std::string> background_classes;
    bool normalize_embeddings = true;
    int self_train_iterations = 3;       // placeholder, not consumed here
    double superpoint_angle_deg = 30.0;  // oversegmentation normal threshold
    int superpoint_knn_normals = 16;     // neighborhood size for normals
};

// Validation helpers return one message per violated invariant; empty means
// the object is well formed. Loaders aggregate these into a ValidationError.
std::vector<std::string> validate(const SceneCloud& cloud);
std::vector<std::string> validate(const CameraFrame& frame);
std::vector<std::string> validate(const LabelEmbeddings& labels);
std::vector<std::string> validate(const PipelineConfig& config);
std::vector<std::string> validate(const SuperpointPartition& sp, std::int32_t n_points);

}  // namespace dualgroup
