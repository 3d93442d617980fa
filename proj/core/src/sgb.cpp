#include "dualgroup/sgb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dualgroup/error.hpp"
#include "dualgroup/spatial.hpp"

namespace dualgroup {

namespace {

int scale_coordinate(int value, int from_extent, int to_extent) {
    if (from_extent == to_extent) return value;
    const double scaled =
        static_cast<double>(value) * (static_cast<double>(to_extent) / from_extent);
    const long rounded = std::lround(scaled);
    return static_cast<int>(std::clamp<long>(rounded, 0, to_extent - 1));
}

}  // namespace

PointFeatures accumulate_features(const SceneCloud& cloud,
                                  std::span<const CameraFrame> frames,
                                  std::span<const FeatureMap> maps, double depth_tol) {
    if (frames.size() != maps.size())
        throw ValidationError("accumulate_features: one feature map per frame required (" +
                              std::to_string(frames.size()) + " frames, " +
                              std::to_string(maps.size()) + " maps)");
    const int channels = maps.empty() ? 0 : maps.front().channels;
    for (const FeatureMap& m : maps)
        if (m.channels != channels)
            throw ValidationError("accumulate_features: feature channel mismatch in frame " +
                                  std::to_string(m.frame_id));

    const std::int32_t n_points = cloud.size();
    PointFeatures out;
    out.count = n_points;
    out.channels = channels;
    out.data.assign(static_cast<size_t>(n_points) * channels, 0.f);
    out.featureless.assign(static_cast<size_t>(n_points), 1);

    std::vector<double> sums(static_cast<size_t>(n_points) * channels, 0.0);
    std::vector<std::int32_t> hits(static_cast<size_t>(n_points), 0);

    // Ascending frame_id keeps the floating-point accumulation order fixed.
    std::vector<size_t> order(frames.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return frames[a].frame_id < frames[b].frame_id;
    });

    for (const size_t fi : order) {
        const CameraFrame& frame = frames[fi];
        const FeatureMap& map = maps[fi];
        for (const VisiblePoint& vp : project_cloud(cloud, frame, depth_tol)) {
            const int fr = scale_coordinate(vp.pixel.row, frame.rgb_height, map.height);
            const int fc = scale_coordinate(vp.pixel.col, frame.rgb_width, map.width);
            const float* feat = map.at(fr, fc);
            double* acc = sums.data() + static_cast<size_t>(vp.index) * channels;
            for (int c = 0; c < channels; ++c) acc[c] += feat[c];
            ++hits[static_cast<size_t>(vp.index)];
        }
    }

    for (std::int32_t n = 0; n < n_points; ++n) {
        if (hits[static_cast<size_t>(n)] == 0) continue;
        out.featureless[static_cast<size_t>(n)] = 0;
        const double count = hits[static_cast<size_t>(n)];
        const double* acc = sums.data() + static_cast<size_t>(n) * channels;
        float* dst = out.data.data() + static_cast<size_t>(n) * channels;
        for (int c = 0; c < channels; ++c) dst[c] = static_cast<float>(acc[c] / count);
    }
    return out;
}

ScoreMatrix compute_scores(const PointFeatures& features, const LabelEmbeddings& labels,
                           bool normalize) {
    if (features.channels != labels.channels)
        throw ValidationError("compute_scores: feature dimension " +
                              std::to_string(features.channels) + " != label dimension " +
                              std::to_string(labels.channels));

    const std::int32_t n_points = features.count;
    const int k_classes = labels.class_count();
    const int channels = features.channels;

    ScoreMatrix scores;
    scores.rows = n_points;
    scores.cols = k_classes;
    scores.data.assign(static_cast<size_t>(n_points) * k_classes, 0.f);
    scores.featureless = features.featureless;

    // Normalized label rows are shared across all points. A zero-norm label
    // row stays as-is and scores 0 against everything.
    std::vector<double> label_rows(static_cast<size_t>(k_classes) * channels);
    for (int k = 0; k < k_classes; ++k) {
        const float* src = labels.row(k);
        double* dst = label_rows.data() + static_cast<size_t>(k) * channels;
        double sq = 0.0;
        for (int c = 0; c < channels; ++c) sq += static_cast<double>(src[c]) * src[c];
        const double inv = (normalize && sq > 0.0) ? 1.0 / std::sqrt(sq) : 1.0;
        for (int c = 0; c < channels; ++c) dst[c] = src[c] * inv;
    }

    std::vector<double> feat(static_cast<size_t>(channels));
    for (std::int32_t n = 0; n < n_points; ++n) {
        if (scores.featureless[static_cast<size_t>(n)]) continue;
        const float* src = features.row(n);
        double sq = 0.0;
        for (int c = 0; c < channels; ++c) sq += static_cast<double>(src[c]) * src[c];
        if (normalize && sq <= 0.0) {
            scores.featureless[static_cast<size_t>(n)] = 1;
            continue;
        }
        const double inv = (normalize && sq > 0.0) ? 1.0 / std::sqrt(sq) : 1.0;
        for (int c = 0; c < channels; ++c) feat[static_cast<size_t>(c)] = src[c] * inv;

        float* dst = scores.data.data() + static_cast<size_t>(n) * k_classes;
        for (int k = 0; k < k_classes; ++k) {
            const double* lab = label_rows.data() + static_cast<size_t>(k) * channels;
            double s = 0.0;
            for (int c = 0; c < channels; ++c) s += feat[static_cast<size_t>(c)] * lab[c];
            dst[k] = static_cast<float>(s);
        }
    }
    return scores;
}

SemanticLabeling classify_points(const ScoreMatrix& scores) {
    SemanticLabeling out;
    out.classes.assign(static_cast<size_t>(scores.rows), SemanticLabeling::kIgnore);
    if (scores.cols == 0) return out;
    for (std::int32_t n = 0; n < scores.rows; ++n) {
        if (scores.featureless[static_cast<size_t>(n)]) continue;
        int best = 0;
        float best_score = scores.at(n, 0);
        for (int k = 1; k < scores.cols; ++k) {
            const float s = scores.at(n, k);
            if (s > best_score) {
                best = k;
                best_score = s;
            }
        }
        out.classes[static_cast<size_t>(n)] = best;
    }
    return out;
}

std::vector<PointMask> bfs_group(const SceneCloud& cloud, const SemanticLabeling& semantics,
                                 double radius, int min_cluster_size,
                                 std::span<const std::int32_t> background_class_ids) {
    const std::int32_t n_points = cloud.size();
    const std::unordered_set<std::int32_t> background(background_class_ids.begin(),
                                                      background_class_ids.end());

    auto foreground = [&](std::int32_t n) {
        const std::int32_t cls = semantics.classes[static_cast<size_t>(n)];
        return cls != SemanticLabeling::kIgnore && !background.count(cls);
    };

    const UniformGrid grid(cloud.points, radius);

    std::vector<std::uint8_t> visited(static_cast<size_t>(n_points), 0);
    std::vector<std::int32_t> queue, neighbors;
    std::vector<PointMask> masks;

    for (std::int32_t seed = 0; seed < n_points; ++seed) {
        if (visited[static_cast<size_t>(seed)] || !foreground(seed)) continue;

        const std::int32_t cls = semantics.classes[static_cast<size_t>(seed)];
        queue.clear();
        queue.push_back(seed);
        visited[static_cast<size_t>(seed)] = 1;
        std::vector<std::int32_t> members;

        for (size_t head = 0; head < queue.size(); ++head) {
            const std::int32_t cur = queue[head];
            members.push_back(cur);
            grid.query_radius(cloud.position(cur), radius, cur, neighbors);
            for (const std::int32_t nb : neighbors) {
                if (visited[static_cast<size_t>(nb)]) continue;
                if (semantics.classes[static_cast<size_t>(nb)] != cls) continue;
                visited[static_cast<size_t>(nb)] = 1;
                queue.push_back(nb);
            }
        }

        if (static_cast<int>(members.size()) < min_cluster_size) continue;
        std::sort(members.begin(), members.end());
        masks.push_back(PointMask{std::move(members)});
    }

    // Seeds run in ascending index order, so each mask's smallest member is
    // its seed and masks are already canonically ordered.
    return masks;
}

}  // namespace dualgroup
