#include "dualgroup/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dualgroup/error.hpp"
#include "dualgroup/spatial.hpp"

namespace dualgroup {

namespace {

std::int32_t max_point_index(std::span<const PointMask> masks) {
    std::int32_t max_idx = -1;
    for (const PointMask& m : masks)
        if (!m.indices.empty()) max_idx = std::max(max_idx, m.indices.back());
    return max_idx;
}

}  // namespace

OverlapMatrix overlap_matrix(std::span<const PointMask> coarse,
                             std::span<const PointMask> fine) {
    OverlapMatrix out;
    out.coarse_count = static_cast<std::int32_t>(coarse.size());
    out.fine_count = static_cast<std::int32_t>(fine.size());
    out.counts.assign(static_cast<size_t>(out.coarse_count) * out.fine_count, 0);
    if (coarse.empty() || fine.empty()) return out;

    // Fine masks may overlap in general, so each point keeps a list.
    const std::int32_t n = std::max(max_point_index(coarse), max_point_index(fine)) + 1;
    std::vector<std::vector<std::int32_t>> fine_at(static_cast<size_t>(n));
    for (std::int32_t w = 0; w < out.fine_count; ++w)
        for (const std::int32_t p : fine[static_cast<size_t>(w)].indices)
            fine_at[static_cast<size_t>(p)].push_back(w);

    for (std::int32_t q = 0; q < out.coarse_count; ++q) {
        std::int64_t* row = out.counts.data() + static_cast<size_t>(q) * out.fine_count;
        for (const std::int32_t p : coarse[static_cast<size_t>(q)].indices)
            for (const std::int32_t w : fine_at[static_cast<size_t>(p)]) ++row[w];
    }
    return out;
}

std::vector<PointMask> granularity_aware_assign(std::span<const PointMask> coarse,
                                                std::span<const PointMask> fine,
                                                double theta) {
    const OverlapMatrix overlaps = overlap_matrix(coarse, fine);

    std::vector<PointMask> ensemble;
    std::vector<std::int32_t> intersection;
    for (std::int32_t q = 0; q < overlaps.coarse_count; ++q) {
        std::int64_t total = 0, best = 0;
        for (std::int32_t w = 0; w < overlaps.fine_count; ++w) {
            const std::int64_t a = overlaps.at(q, w);
            total += a;
            best = std::max(best, a);
        }

        // No fine evidence: keep the coarse mask whole rather than divide by
        // zero. Equality with theta falls through to the split branch.
        if (total == 0 || static_cast<double>(best) / static_cast<double>(total) > theta) {
            ensemble.push_back(coarse[static_cast<size_t>(q)]);
            continue;
        }

        for (std::int32_t w = 0; w < overlaps.fine_count; ++w) {
            if (overlaps.at(q, w) == 0) continue;
            intersection.clear();
            std::set_intersection(coarse[static_cast<size_t>(q)].indices.begin(),
                                  coarse[static_cast<size_t>(q)].indices.end(),
                                  fine[static_cast<size_t>(w)].indices.begin(),
                                  fine[static_cast<size_t>(w)].indices.end(),
                                  std::back_inserter(intersection));
            ensemble.push_back(PointMask{intersection});
        }
    }
    return ensemble;
}

InstanceLabeling merge_small_instances(const SceneCloud& cloud,
                                       std::span<const PointMask> masks, int min_points,
                                       int knn_k) {
    const std::int32_t n_points = cloud.size();
    const std::int32_t n_masks = static_cast<std::int32_t>(masks.size());

    std::vector<std::int32_t> instance_of(static_cast<size_t>(n_points), -1);
    for (std::int32_t q = 0; q < n_masks; ++q) {
        for (const std::int32_t p : masks[static_cast<size_t>(q)].indices) {
            if (instance_of[static_cast<size_t>(p)] != -1)
                throw ValidationError("merge_small_instances: input masks are not disjoint");
            instance_of[static_cast<size_t>(p)] = q;
        }
    }

    // Sizes are frozen at entry; merge targets must already hold min_points,
    // so a target is never itself merged away and no chains can form.
    std::vector<std::int32_t> merged_into(static_cast<size_t>(n_masks));
    std::iota(merged_into.begin(), merged_into.end(), 0);

    bool any_small = false, any_large = false;
    for (std::int32_t q = 0; q < n_masks; ++q) {
        if (masks[static_cast<size_t>(q)].size() < min_points) any_small = true;
        else any_large = true;
    }

    if (any_small && any_large) {
        double min_x = 0, min_y = 0, min_z = 0, max_x = 0, max_y = 0, max_z = 0;
        for (std::int32_t p = 0; p < n_points; ++p) {
            const Vec3 v = cloud.position(p);
            if (p == 0) {
                min_x = max_x = v.x;
                min_y = max_y = v.y;
                min_z = max_z = v.z;
            } else {
                min_x = std::min(min_x, v.x); max_x = std::max(max_x, v.x);
                min_y = std::min(min_y, v.y); max_y = std::max(max_y, v.y);
                min_z = std::min(min_z, v.z); max_z = std::max(max_z, v.z);
            }
        }
        const double diag = std::sqrt((max_x - min_x) * (max_x - min_x) +
                                      (max_y - min_y) * (max_y - min_y) +
                                      (max_z - min_z) * (max_z - min_z));
        const UniformGrid grid(cloud.points, std::max(diag / 64.0, 1e-9));

        std::vector<std::int32_t> nbrs;
        std::vector<std::int64_t> link_count(static_cast<size_t>(n_masks));
        for (std::int32_t q = 0; q < n_masks; ++q) {
            if (masks[static_cast<size_t>(q)].size() >= min_points) continue;

            std::fill(link_count.begin(), link_count.end(), 0);
            for (const std::int32_t p : masks[static_cast<size_t>(q)].indices) {
                grid.query_knn(
                    cloud.position(p), knn_k, p,
                    [&](std::int32_t j) { return instance_of[static_cast<size_t>(j)] != q; },
                    nbrs);
                for (const std::int32_t j : nbrs) {
                    const std::int32_t owner = instance_of[static_cast<size_t>(j)];
                    if (owner >= 0) ++link_count[static_cast<size_t>(owner)];
                }
            }

            std::int32_t target = -1;
            std::int64_t target_links = 0;
            for (std::int32_t b = 0; b < n_masks; ++b) {
                if (b == q || masks[static_cast<size_t>(b)].size() < min_points) continue;
                if (link_count[static_cast<size_t>(b)] > target_links) {
                    target_links = link_count[static_cast<size_t>(b)];
                    target = b;
                }
            }
            if (target >= 0) merged_into[static_cast<size_t>(q)] = target;
        }
    }

    // Relabel: resulting instances ordered by their smallest member index.
    std::vector<std::int32_t> group_min(static_cast<size_t>(n_masks),
                                        std::numeric_limits<std::int32_t>::max());
    for (std::int32_t q = 0; q < n_masks; ++q) {
        const std::int32_t root = merged_into[static_cast<size_t>(q)];
        if (!masks[static_cast<size_t>(q)].indices.empty())
            group_min[static_cast<size_t>(root)] =
                std::min(group_min[static_cast<size_t>(root)],
                         masks[static_cast<size_t>(q)].indices.front());
    }
    std::vector<std::int32_t> roots;
    for (std::int32_t q = 0; q < n_masks; ++q)
        if (merged_into[static_cast<size_t>(q)] == q) roots.push_back(q);
    std::sort(roots.begin(), roots.end(), [&](std::int32_t a, std::int32_t b) {
        return group_min[static_cast<size_t>(a)] < group_min[static_cast<size_t>(b)];
    });
    std::vector<std::int32_t> new_id(static_cast<size_t>(n_masks), -1);
    for (size_t i = 0; i < roots.size(); ++i)
        new_id[static_cast<size_t>(roots[i])] = static_cast<std::int32_t>(i);

    InstanceLabeling out;
    out.ids.assign(static_cast<size_t>(n_points), InstanceLabeling::kUnassigned);
    for (std::int32_t q = 0; q < n_masks; ++q) {
        const std::int32_t id = new_id[static_cast<size_t>(merged_into[static_cast<size_t>(q)])];
        for (const std::int32_t p : masks[static_cast<size_t>(q)].indices)
            out.ids[static_cast<size_t>(p)] = id;
    }
    return out;
}

SemanticLabeling semantic_select(const ScoreMatrix& scores, const SemanticLabeling& semantics,
                                 double alpha_percent) {
    const std::int32_t n_points = static_cast<std::int32_t>(semantics.classes.size());

    std::map<std::int32_t, std::vector<std::int32_t>> by_class;
    for (std::int32_t n = 0; n < n_points; ++n) {
        const std::int32_t cls = semantics.classes[static_cast<size_t>(n)];
        if (cls >= 0) by_class[cls].push_back(n);
    }

    SemanticLabeling out;
    out.classes.assign(static_cast<size_t>(n_points), SemanticLabeling::kIgnore);

    for (auto& [cls, members] : by_class) {
        const auto quota = static_cast<size_t>(
            std::ceil(alpha_percent * static_cast<double>(members.size()) / 100.0));
        // Highest own-class score first; index ascending on equal scores.
        std::sort(members.begin(), members.end(), [&](std::int32_t a, std::int32_t b) {
            const float sa = scores.at(a, cls), sb = scores.at(b, cls);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        const size_t keep = std::min(quota, members.size());
        for (size_t i = 0; i < keep; ++i)
            out.classes[static_cast<size_t>(members[i])] = cls;
    }
    return out;
}

SemanticLabeling superpoint_propagate(const SemanticLabeling& selected,
                                      const SuperpointPartition& sp) {
    const std::int32_t n_points = static_cast<std::int32_t>(selected.classes.size());

    // class histogram per superpoint; std::map iteration gives the lowest
    // class id first, which settles modal ties.
    std::vector<std::map<std::int32_t, std::int64_t>> hist(static_cast<size_t>(sp.count));
    for (std::int32_t n = 0; n < n_points; ++n) {
        const std::int32_t cls = selected.classes[static_cast<size_t>(n)];
        if (cls >= 0) ++hist[static_cast<size_t>(sp.sp_ids[static_cast<size_t>(n)])][cls];
    }

    std::vector<std::int32_t> modal(static_cast<size_t>(sp.count), SemanticLabeling::kIgnore);
    for (std::int32_t m = 0; m < sp.count; ++m) {
        std::int64_t best = 0;
        for (const auto& [cls, count] : hist[static_cast<size_t>(m)]) {
            if (count > best) {
                best = count;
                modal[static_cast<size_t>(m)] = cls;
            }
        }
    }

    SemanticLabeling out;
    out.classes.resize(static_cast<size_t>(n_points));
    for (std::int32_t n = 0; n < n_points; ++n)
        out.classes[static_cast<size_t>(n)] =
            modal[static_cast<size_t>(sp.sp_ids[static_cast<size_t>(n)])];
    return out;
}

std::vector<InstanceClass> assign_instance_classes(const InstanceLabeling& instances,
                                                   const SemanticLabeling& semantics) {
    std::map<std::int32_t, std::map<std::int32_t, std::int64_t>> hist;
    for (size_t n = 0; n < instances.ids.size(); ++n) {
        const std::int32_t id = instances.ids[n];
        if (id < 0) continue;
        auto& h = hist[id];  // instances whose points are all ignore still appear
        const std::int32_t cls = semantics.classes[n];
        if (cls >= 0) ++h[cls];
    }

    std::vector<InstanceClass> out;
    for (const auto& [id, h] : hist) {
        InstanceClass ic;
        ic.instance_id = id;
        std::int64_t best = 0;
        for (const auto& [cls, count] : h) {
            if (count > best) {
                best = count;
                ic.class_id = cls;
            }
        }
        out.push_back(ic);
    }
    return out;
}

}  // namespace dualgroup
