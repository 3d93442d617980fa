#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Uniform hash grid over a point set. Radius queries are exact (candidates are
// filtered by true distance); k-NN queries expand cell shells outward until
// the k-th best distance provably cannot improve. Neighbor ordering is
// deterministic: ties in distance resolve toward the lower point index.
class UniformGrid {
public:
    UniformGrid(const std::vector<ScenePoint>& points, double cell_size);

    // All indices j != exclude with |p_j - query| <= radius (pass exclude = -1
    // to keep everything). Output order is deterministic but not sorted.
    void query_radius(const Vec3& query, double radius, std::int32_t exclude,
                      std::vector<std::int32_t>& out) const;

    // The k nearest accepted neighbors of `query`, ordered by
    // (squared distance, index). `exclude` is always skipped.
    template <typename Pred>
    void query_knn(const Vec3& query, int k, std::int32_t exclude, Pred&& accept,
                   std::vector<std::int32_t>& out) const;

    const Vec3& position(std::int32_t idx) const { return positions_[static_cast<size_t>(idx)]; }

private:
    struct Cell {
        std::int64_t x, y, z;
        bool operator==(const Cell&) const = default;
    };
    struct CellHash {
        size_t operator()(const Cell& c) const {
            std::uint64_t h = static_cast<std::uint64_t>(c.x) * 0x9E3779B97F4A7C15ull;
            h ^= static_cast<std::uint64_t>(c.y) * 0xC2B2AE3D27D4EB4Full;
            h ^= static_cast<std::uint64_t>(c.z) * 0x165667B19E3779F9ull;
            h ^= h >> 29;
            return static_cast<size_t>(h);
        }
    };

    Cell cell_of(const Vec3& p) const;
    const std::vector<std::int32_t>* bucket(const Cell& c) const;

    double cell_size_;
    std::vector<Vec3> positions_;
    std::unordered_map<Cell, std::vector<std::int32_t>, CellHash> buckets_;
    Cell min_cell_{0, 0, 0}, max_cell_{0, 0, 0};
};

template <typename Pred>
void UniformGrid::query_knn(const Vec3& query, int k, std::int32_t exclude, Pred&& accept,
                            std::vector<std::int32_t>& out) const {
    out.clear();
    if (k <= 0 || positions_.empty()) return;

    using Entry = std::pair<double, std::int32_t>;  // (squared distance, index)
    std::vector<Entry> heap;                        // max-heap on (d2, index)
    heap.reserve(static_cast<size_t>(k) + 1);

    auto scan_bucket = [&](std::int64_t cx, std::int64_t cy, std::int64_t cz) {
        const std::vector<std::int32_t>* b = bucket({cx, cy, cz});
        if (!b) return;
        for (const std::int32_t j : *b) {
            if (j == exclude || !accept(j)) continue;
            const Entry cand{squared_distance(query, positions_[static_cast<size_t>(j)]), j};
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
    };

    const Cell c0 = cell_of(query);
    // Rings beyond this cover no occupied cell in any direction.
    const std::int64_t max_ring =
        std::max({std::max(c0.x - min_cell_.x, max_cell_.x - c0.x),
                  std::max(c0.y - min_cell_.y, max_cell_.y - c0.y),
                  std::max(c0.z - min_cell_.z, max_cell_.z - c0.z), std::int64_t{0}});

    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        if (ring == 0) {
            scan_bucket(c0.x, c0.y, c0.z);
        } else {
            // The six faces of the cube shell at Chebyshev distance `ring`.
            for (std::int64_t dy = -ring; dy <= ring; ++dy)
                for (std::int64_t dz = -ring; dz <= ring; ++dz) {
                    scan_bucket(c0.x - ring, c0.y + dy, c0.z + dz);
                    scan_bucket(c0.x + ring, c0.y + dy, c0.z + dz);
                }
            for (std::int64_t dx = -ring + 1; dx <= ring - 1; ++dx)
                for (std::int64_t dz = -ring; dz <= ring; ++dz) {
                    scan_bucket(c0.x + dx, c0.y - ring, c0.z + dz);
                    scan_bucket(c0.x + dx, c0.y + ring, c0.z + dz);
                }
            for (std::int64_t dx = -ring + 1; dx <= ring - 1; ++dx)
                for (std::int64_t dy = -ring + 1; dy <= ring - 1; ++dy) {
                    scan_bucket(c0.x + dx, c0.y + dy, c0.z - ring);
                    scan_bucket(c0.x + dx, c0.y + dy, c0.z + ring);
                }
        }
        if (static_cast<int>(heap.size()) == k) {
            // Points in ring r+1 are at least r * cell away; stop once that
            // bound exceeds the current k-th distance (ties must keep going
            // so a lower index can still win).
            const double bound = static_cast<double>(ring) * cell_size_;
            if (bound * bound > heap.front().first) break;
        }
    }

    std::sort(heap.begin(), heap.end());
    out.reserve(heap.size());
    for (const Entry& e : heap) out.push_back(e.second);
}

}  // namespace dualgroup
