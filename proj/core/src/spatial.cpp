#include "dualgroup/spatial.hpp"

#include <cmath>

namespace dualgroup {

UniformGrid::UniformGrid(const std::vector<ScenePoint>& points, double cell_size)
    : cell_size_(cell_size) {
    positions_.reserve(points.size());
    for (const ScenePoint& p : points) positions_.push_back({p.x, p.y, p.z});

    bool first = true;
    for (size_t n = 0; n < positions_.size(); ++n) {
        const Cell c = cell_of(positions_[n]);
        buckets_[c].push_back(static_cast<std::int32_t>(n));
        if (first) {
            min_cell_ = max_cell_ = c;
            first = false;
        } else {
            min_cell_ = {std::min(min_cell_.x, c.x), std::min(min_cell_.y, c.y),
                         std::min(min_cell_.z, c.z)};
            max_cell_ = {std::max(max_cell_.x, c.x), std::max(max_cell_.y, c.y),
                         std::max(max_cell_.z, c.z)};
        }
    }
}

UniformGrid::Cell UniformGrid::cell_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_size_)),
            static_cast<std::int64_t>(std::floor(p.z / cell_size_))};
}

const std::vector<std::int32_t>* UniformGrid::bucket(const Cell& c) const {
    if (c.x < min_cell_.x || c.x > max_cell_.x || c.y < min_cell_.y || c.y > max_cell_.y ||
        c.z < min_cell_.z || c.z > max_cell_.z)
        return nullptr;
    const auto it = buckets_.find(c);
    return it == buckets_.end() ? nullptr : &it->second;
}

void UniformGrid::query_radius(const Vec3& query, double radius, std::int32_t exclude,
                               std::vector<std::int32_t>& out) const {
    out.clear();
    if (positions_.empty() || radius < 0.0) return;

    const double r2 = radius * radius;
    const Cell lo = cell_of({query.x - radius, query.y - radius, query.z - radius});
    const Cell hi = cell_of({query.x + radius, query.y + radius, query.z + radius});
    for (std::int64_t cx = lo.x; cx <= hi.x; ++cx)
        for (std::int64_t cy = lo.y; cy <= hi.y; ++cy)
            for (std::int64_t cz = lo.z; cz <= hi.z; ++cz) {
                const std::vector<std::int32_t>* b = bucket({cx, cy, cz});
                if (!b) continue;
                for (const std::int32_t j : *b) {
                    if (j == exclude) continue;
                    if (squared_distance(query, positions_[static_cast<size_t>(j)]) <= r2)
                        out.push_back(j);
                }
            }
}

}  // namespace dualgroup
