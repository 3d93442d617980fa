#include "dualgroup/mgb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dualgroup/error.hpp"
#include "dualgroup/spatial.hpp"

namespace dualgroup {

namespace {

// Unit normal of the PCA plane through the neighborhood, sign-canonicalized
// so results do not depend on eigen solver internals.
Vec3 canonical_normal(const Vec3& v) {
    Vec3 n = v;
    if (n.z < 0.0 || (n.z == 0.0 && (n.y < 0.0 || (n.y == 0.0 && n.x < 0.0)))) {
        n = n * -1.0;
    }
    return n;
}

}  // namespace

OversegmentResult oversegment(const SceneCloud& cloud, double radius,
                              double angle_threshold_deg, int knn_normals) {
    const std::int32_t n_points = cloud.size();
    if (n_points < knn_normals)
        throw ValidationError("oversegment: cloud has fewer points than knn_normals");

    const UniformGrid grid(cloud.points, radius);

    OversegmentResult result;
    std::vector<Vec3> normals(static_cast<size_t>(n_points));
    std::vector<std::int32_t> nbrs;

    for (std::int32_t n = 0; n < n_points; ++n) {
        // Neighborhood = the point itself plus its (k - 1) nearest others.
        grid.query_knn(cloud.position(n), knn_normals - 1, n,
                       [](std::int32_t) { return true; }, nbrs);

        Vec3 mean = cloud.position(n);
        for (const std::int32_t j : nbrs) mean = mean + cloud.position(j);
        mean = mean / (1.0 + static_cast<double>(nbrs.size()));

        Mat3 cov;
        auto add_point = [&](const Vec3& p) {
            const Vec3 d = p - mean;
            cov(0, 0) += d.x * d.x;
            cov(0, 1) += d.x * d.y;
            cov(0, 2) += d.x * d.z;
            cov(1, 1) += d.y * d.y;
            cov(1, 2) += d.y * d.z;
            cov(2, 2) += d.z * d.z;
        };
        add_point(cloud.position(n));
        for (const std::int32_t j : nbrs) add_point(cloud.position(j));
        cov(1, 0) = cov(0, 1);
        cov(2, 0) = cov(0, 2);
        cov(2, 1) = cov(1, 2);

        const SymmetricEigen3 eig = symmetric_eigen3(cov);
        const bool degenerate =
            !(eig.values[0] > 0.0) || eig.values[1] < 1e-9 * eig.values[0];
        if (degenerate) {
            normals[static_cast<size_t>(n)] = {0.0, 0.0, 1.0};
            ++result.degenerate_normals;
        } else {
            normals[static_cast<size_t>(n)] = canonical_normal(normalized(eig.vectors[2]));
        }
    }

    const double cos_threshold = std::cos(angle_threshold_deg * M_PI / 180.0);

    SuperpointPartition& sp = result.partition;
    sp.sp_ids.assign(static_cast<size_t>(n_points), -1);
    std::vector<std::int32_t> queue;

    for (std::int32_t seed = 0; seed < n_points; ++seed) {
        if (sp.sp_ids[static_cast<size_t>(seed)] >= 0) continue;
        const std::int32_t id = sp.count++;
        sp.sp_ids[static_cast<size_t>(seed)] = id;
        queue.clear();
        queue.push_back(seed);

        for (size_t head = 0; head < queue.size(); ++head) {
            const std::int32_t cur = queue[head];
            grid.query_radius(cloud.position(cur), radius, cur, nbrs);
            for (const std::int32_t nb : nbrs) {
                if (sp.sp_ids[static_cast<size_t>(nb)] >= 0) continue;
                // Unoriented angle between the two point normals.
                const double c = std::abs(dot(normals[static_cast<size_t>(cur)],
                                              normals[static_cast<size_t>(nb)]));
                if (c < cos_threshold) continue;
                sp.sp_ids[static_cast<size_t>(nb)] = id;
                queue.push_back(nb);
            }
        }
    }
    return result;
}

std::vector<PromptCentroid> superpoint_centroids(const SceneCloud& cloud,
                                                 const SuperpointPartition& sp) {
    std::vector<Vec3> sums(static_cast<size_t>(sp.count));
    std::vector<std::int64_t> counts(static_cast<size_t>(sp.count), 0);
    for (std::int32_t n = 0; n < cloud.size(); ++n) {
        const std::int32_t id = sp.sp_ids[static_cast<size_t>(n)];
        sums[static_cast<size_t>(id)] = sums[static_cast<size_t>(id)] + cloud.position(n);
        ++counts[static_cast<size_t>(id)];
    }

    std::vector<PromptCentroid> out(static_cast<size_t>(sp.count));
    std::vector<double> best(static_cast<size_t>(sp.count),
                             std::numeric_limits<double>::infinity());
    for (std::int32_t m = 0; m < sp.count; ++m) out[static_cast<size_t>(m)].prompt_id = m;

    for (std::int32_t n = 0; n < cloud.size(); ++n) {
        const std::int32_t id = sp.sp_ids[static_cast<size_t>(n)];
        const Vec3 mean = sums[static_cast<size_t>(id)] / counts[static_cast<size_t>(id)];
        const double d2 = squared_distance(cloud.position(n), mean);
        if (d2 < best[static_cast<size_t>(id)]) {  // strict: ties keep the lower index
            best[static_cast<size_t>(id)] = d2;
            out[static_cast<size_t>(id)].point_index = n;
        }
    }
    return out;
}

PromptSet project_prompts(const SceneCloud& cloud, std::span<const PromptCentroid> centroids,
                          std::span<const CameraFrame> frames, double depth_tol) {
    std::vector<size_t> order(frames.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return frames[a].frame_id < frames[b].frame_id;
    });

    PromptSet out;
    for (const size_t fi : order) {
        const CameraFrame& frame = frames[fi];
        for (const PromptCentroid& c : centroids) {
            if (const auto px = visible_in_frame(cloud.position(c.point_index), frame, depth_tol))
                out.entries.push_back({frame.frame_id, c.prompt_id, *px});
        }
    }
    return out;
}

VoteResult vote_fine_masks(const SceneCloud& cloud, std::span<const CameraFrame> frames,
                           std::span<const PromptMaskRaster> rasters, double depth_tol) {
    if (frames.size() != rasters.size())
        throw ValidationError("vote_fine_masks: raster/frame count mismatch (" +
                              std::to_string(frames.size()) + " frames, " +
                              std::to_string(rasters.size()) + " rasters)");

    // Pair rasters with frames by frame_id.
    std::map<int, const PromptMaskRaster*> by_id;
    for (const PromptMaskRaster& r : rasters) by_id[r.frame_id] = &r;

    const std::int32_t n_points = cloud.size();
    std::vector<std::vector<std::int32_t>> votes(static_cast<size_t>(n_points));

    std::vector<size_t> order(frames.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return frames[a].frame_id < frames[b].frame_id;
    });

    for (const size_t fi : order) {
        const CameraFrame& frame = frames[fi];
        const auto it = by_id.find(frame.frame_id);
        if (it == by_id.end())
            throw ValidationError("vote_fine_masks: no prompt raster for frame " +
                                  std::to_string(frame.frame_id));
        const PromptMaskRaster& raster = *it->second;
        if (raster.height != frame.rgb_height || raster.width != frame.rgb_width)
            throw ValidationError("vote_fine_masks: raster size mismatch in frame " +
                                  std::to_string(frame.frame_id));

        for (const VisiblePoint& vp : project_cloud(cloud, frame, depth_tol)) {
            const std::int32_t id = raster.at(vp.pixel.row, vp.pixel.col);
            if (id >= 0) votes[static_cast<size_t>(vp.index)].push_back(id);
        }
    }

    VoteResult result;
    result.labels.ids.assign(static_cast<size_t>(n_points), InstanceLabeling::kUnassigned);

    std::map<std::int32_t, std::vector<std::int32_t>> members_by_id;
    for (std::int32_t n = 0; n < n_points; ++n) {
        std::vector<std::int32_t>& v = votes[static_cast<size_t>(n)];
        if (v.empty()) continue;
        // Majority id; sorting first means the earliest max-count run is the
        // lowest id, which is the documented tie rule.
        std::sort(v.begin(), v.end());
        std::int32_t best_id = v.front();
        size_t best_count = 0, run = 0;
        for (size_t i = 0; i < v.size(); ++i) {
            run = (i > 0 && v[i] == v[i - 1]) ? run + 1 : 1;
            if (run > best_count) {
                best_count = run;
                best_id = v[i];
            }
        }
        result.labels.ids[static_cast<size_t>(n)] = best_id;
        members_by_id[best_id].push_back(n);
    }

    for (auto& [id, members] : members_by_id)
        result.masks.push_back(PointMask{std::move(members)});
    return result;
}

}  // namespace dualgroup
