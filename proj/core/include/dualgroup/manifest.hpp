#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dualgroup/metrics.hpp"
#include "dualgroup/mgb.hpp"
#include "dualgroup/types.hpp"

namespace dualgroup {

// Parsed manifest: file references only, paths resolved against the manifest
// directory. The first line pins the schema: "dualgroup-manifest v1".
struct SceneManifest {
    std::string scene_id;
    std::filesystem::path points;            // DBGT f32 [N,6] (x y z r g b)
    std::filesystem::path classes;           // text, one class name per line
    std::filesystem::path label_embeddings;  // DBGT f32 [K,C]
    int rgb_height = 0, rgb_width = 0;
    std::optional<std::filesystem::path> superpoints;   // DBGT i32 [N]
    std::optional<std::filesystem::path> gt_instances;  // DBGT i32 [N]
    std::optional<std::filesystem::path> gt_classes;    // DBGT i32 [N]

    struct FrameFiles {
        int frame_id = 0;
        std::filesystem::path intrinsic;  // text, 9 floats row-major
        std::filesystem::path extrinsic;  // text, 16 floats row-major
        std::filesystem::path depth;      // DBGT u16 [Hd,Wd]
        std::filesystem::path features;   // DBGT f32 [H',W',C]
        std::optional<std::filesystem::path> prompt_masks;  // DBGT i32 [H,W]
    };
    std::vector<FrameFiles> frames;
};

SceneManifest parse_manifest(const std::filesystem::path& path);

// Everything a pipeline run needs, in memory. Frames are sorted by frame_id;
// features (and prompt masks, when present) are aligned with them.
struct SceneBundle {
    SceneCloud cloud;
    std::vector<CameraFrame> frames;
    std::vector<FeatureMap> features;
    std::vector<PromptMaskRaster> prompt_masks;  // empty when not provided
    LabelEmbeddings labels;
    std::optional<SuperpointPartition> superpoints;
    std::optional<GroundTruth> ground_truth;
};

// Loads and validates every file the manifest references. All invariant
// violations are collected into a single ValidationError; unreadable or
// malformed files raise ParseError.
SceneBundle load_scene(const SceneManifest& manifest);
SceneBundle load_scene(const std::filesystem::path& manifest_path);

Mat3 read_intrinsic(const std::filesystem::path& path);
Mat4 read_extrinsic(const std::filesystem::path& path);
std::vector<std::string> read_class_names(const std::filesystem::path& path);

}  // namespace dualgroup
