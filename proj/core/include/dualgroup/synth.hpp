#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dualgroup/manifest.hpp"

namespace dualgroup {

// Recipe for a reproducible synthetic scene: axis-aligned boxes sampled on
// their surfaces, cameras on a ring looking inward, and per-frame rasters
// (depth, prompt ids, one-hot class features) rendered from the true
// geometry. All randomness flows from `seed`.
struct SynthSpec {
    std::uint64_t seed = 1;
    int instance_count = 6;
    int points_min = 600;   // per-instance target range
    int points_max = 1400;
    int class_count = 3;
    double room_extent = 8.0;  // meters, square floor
    int frame_count = 6;
    int image_height = 480;
    int image_width = 640;
    double feature_flip_rate = 0.0;  // chance a feature pixel gets a wrong class
    int mask_dilation_px = 0;        // grow prompt silhouettes into background
    double depth_noise_sigma = 0.0;  // meters, gaussian, before quantization
};

std::vector<std::string> validate(const SynthSpec& spec);

struct SynthScene {
    SynthSpec spec;
    SceneBundle bundle;  // ground truth included
};

// Throws ValidationError when the spec is invalid or the boxes cannot be
// placed inside the room with the required clearance.
SynthScene generate_synthetic(const SynthSpec& spec);

// Writes the scene as a loadable dataset: manifest, tensors, camera text
// files, class names, ground truth, and a default config. Byte-identical for
// identical scenes.
void write_synth_dataset(const SynthScene& scene, const std::filesystem::path& dir);

}  // namespace dualgroup
