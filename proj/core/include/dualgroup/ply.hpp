#pragma once

#include <filesystem>
#include <span>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Writes an ASCII PLY of the cloud colored by per-point label id. Ids map to
// a stable hash-based palette; negative ids (unassigned/ignore) render gray
// (128, 128, 128).
void export_ply(const SceneCloud& cloud, std::span<const std::int32_t> labels,
                const std::filesystem::path& path);

// Color for a label id, stable across runs and processes.
std::array<std::uint8_t, 3> label_color(std::int32_t id);

}  // namespace dualgroup
