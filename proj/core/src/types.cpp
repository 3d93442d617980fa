#include "dualgroup/types.hpp"

#include <cmath>
#include <set>

namespace dualgroup {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::vector<std::string> validate(const SceneCloud& cloud) {
    std::vector<std::string> out;
    if (cloud.points.empty()) out.push_back("scene cloud: must contain at least one point");
    for (size_t n = 0; n < cloud.points.size(); ++n) {
        const ScenePoint& p = cloud.points[n];
        if (!finite(p.x) || !finite(p.y) || !finite(p.z)) {
            out.push_back("scene cloud: non-finite coordinates at point " + std::to_string(n));
            break;  // one report is enough, clouds are large
        }
    }
    return out;
}

std::vector<std::string> validate(const CameraFrame& frame) {
    std::vector<std::string> out;
    const std::string tag = "frame " + std::to_string(frame.frame_id) + ": ";

    const Mat3& in = frame.intrinsic;
    if (!(in(0, 0) > 0.0) || !(in(1, 1) > 0.0))
        out.push_back(tag + "intrinsic focal entries must be positive");
    if (in(1, 0) != 0.0 || in(2, 0) != 0.0 || in(2, 1) != 0.0)
        out.push_back(tag + "intrinsic must be upper-triangular");

    const Mat3 r = frame.extrinsic.rotation();
    const Mat3 rrt_expected = Mat3::identity();
    double max_dev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += r(i, k) * r(j, k);
            max_dev = std::max(max_dev, std::abs(s - rrt_expected(i, j)));
        }
    const double det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
                       r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
                       r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
    if (max_dev > 1e-6 || std::abs(det - 1.0) > 1e-6)
        out.push_back(tag + "extrinsic rotation block is not orthonormal with det +1");

    if (frame.depth.height <= 0 || frame.depth.width <= 0)
        out.push_back(tag + "depth raster dimensions must be positive");
    else if (frame.depth.millimeters.size() !=
             static_cast<size_t>(frame.depth.height) * frame.depth.width)
        out.push_back(tag + "depth raster payload does not match its dimensions");

    if (frame.rgb_height <= 0 || frame.rgb_width <= 0)
        out.push_back(tag + "rgb size must be positive");
    return out;
}

std::vector<std::string> validate(const LabelEmbeddings& labels) {
    std::vector<std::string> out;
    if (labels.classes.empty()) out.push_back("label embeddings: need at least one class");
    std::set<std::string> seen(labels.classes.begin(), labels.classes.end());
    if (seen.size() != labels.classes.size())
        out.push_back("label embeddings: class names must be unique");
    if (labels.channels <= 0)
        out.push_back("label embeddings: channel count must be positive");
    else if (labels.data.size() != labels.classes.size() * static_cast<size_t>(labels.channels))
        out.push_back("label embeddings: data size does not match K x C");
    for (float v : labels.data)
        if (!std::isfinite(v)) {
            out.push_back("label embeddings: non-finite value");
            break;
        }
    return out;
}

std::vector<std::string> validate(const PipelineConfig& config) {
    std::vector<std::string> out;
    if (!(config.bfs_radius > 0.0)) out.push_back("config: bfs_radius must be > 0");
    if (config.overlap_threshold < 0.0 || config.overlap_threshold > 1.0)
        out.push_back("config: overlap_threshold must lie in [0, 1]");
    if (config.small_instance_threshold < 0)
        out.push_back("config: small_instance_threshold must be >= 0");
    if (!(config.select_top_alpha > 0.0) || config.select_top_alpha > 100.0)
        out.push_back("config: select_top_alpha must lie in (0, 100]");
    if (!(config.depth_tolerance > 0.0)) out.push_back("config: depth_tolerance must be > 0");
    if (config.min_cluster_size < 0) out.push_back("config: min_cluster_size must be >= 0");
    if (config.knn_k < 1) out.push_back("config: knn_k must be >= 1");
    if (!(config.superpoint_angle_deg > 0.0))
        out.push_back("config: superpoint_angle_deg must be > 0");
    if (config.superpoint_knn_normals < 3)
        out.push_back("config: superpoint_knn_normals must be >= 3");
    return out;
}

std::vector<std::string> validate(const SuperpointPartition& sp, std::int32_t n_points) {
    std::vector<std::string> out;
    if (sp.sp_ids.size() != static_cast<size_t>(n_points)) {
        out.push_back("superpoints: id array length does not match point count");
        return out;
    }
    std::vector<std::uint8_t> occupied(static_cast<size_t>(std::max(sp.count, 0)), 0);
    for (size_t n = 0; n < sp.sp_ids.size(); ++n) {
        const std::int32_t id = sp.sp_ids[n];
        if (id < 0 || id >= sp.count) {
            out.push_back("superpoints: id out of range at point " + std::to_string(n));
            return out;
        }
        occupied[static_cast<size_t>(id)] = 1;
    }
    for (std::int32_t m = 0; m < sp.count; ++m)
        if (!occupied[static_cast<size_t>(m)]) {
            out.push_back("superpoints: id " + std::to_string(m) + " is unused");
            break;
        }
    return out;
}

}  // namespace dualgroup
