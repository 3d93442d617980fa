#include "dualgroup/ply.hpp"

#include <cstdio>
#include <fstream>

#include "dualgroup/error.hpp"

namespace dualgroup {

std::array<std::uint8_t, 3> label_color(std::int32_t id) {
    if (id < 0) return {128, 128, 128};
    // splitmix-style scramble keeps nearby ids far apart in color space
    std::uint64_t h = static_cast<std::uint64_t>(id) + 0x9E3779B97F4A7C15ull;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
    h ^= h >> 31;
    // keep channels away from full black so labels stay visible
    return {static_cast<std::uint8_t>(64 + (h & 0xBF)),
            static_cast<std::uint8_t>(64 + ((h >> 8) & 0xBF)),
            static_cast<std::uint8_t>(64 + ((h >> 16) & 0xBF))};
}

void export_ply(const SceneCloud& cloud, std::span<const std::int32_t> labels,
                const std::filesystem::path& path) {
    if (labels.size() != cloud.points.size())
        throw ValidationError("export_ply: labeling length does not match the cloud");

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ParseError(path.string(), -1, "cannot open file for writing");

    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << cloud.points.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";

    char line[128];
    for (size_t n = 0; n < cloud.points.size(); ++n) {
        const ScenePoint& p = cloud.points[n];
        const auto [r, g, b] = label_color(labels[n]);
        // %.9g round-trips float exactly
        std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %d %d %d\n", p.x, p.y, p.z, r, g, b);
        out << line;
    }
    if (!out) throw ParseError(path.string(), -1, "write failed");
}

}  // namespace dualgroup
