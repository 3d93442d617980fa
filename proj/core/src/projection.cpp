#include "dualgroup/projection.hpp"

#include <cmath>

namespace dualgroup {

std::optional<PixelProjection> project_point(const Vec3& p, const CameraFrame& frame) {
    const Vec3 cam = frame.extrinsic.transform_point(p);
    const double depth = cam.z;
    if (depth <= 0.0) return std::nullopt;

    const Vec3 q = frame.intrinsic * cam;
    // The intrinsic's last row is (0, 0, 1), so q.z == depth. The x axis of
    // the intrinsic maps to image columns, the y axis to rows; the returned
    // pair is ordered row-first.
    return PixelProjection{q.y / depth, q.x / depth, depth};
}

std::optional<Pixel> visible_in_frame(const Vec3& p, const CameraFrame& frame,
                                      double depth_tol) {
    const auto proj = project_point(p, frame);
    if (!proj) return std::nullopt;

    const long row = std::lround(proj->row);
    const long col = std::lround(proj->col);
    if (row < 0 || row >= frame.rgb_height || col < 0 || col >= frame.rgb_width)
        return std::nullopt;

    // Nearest-neighbor lookup in the depth raster after uniform axis scaling
    // of the continuous coordinates.
    const DepthRaster& d = frame.depth;
    const long drow = std::lround(proj->row * (static_cast<double>(d.height) / frame.rgb_height));
    const long dcol = std::lround(proj->col * (static_cast<double>(d.width) / frame.rgb_width));
    if (drow < 0 || drow >= d.height || dcol < 0 || dcol >= d.width) return std::nullopt;

    const std::uint16_t sensed_mm = d.at(static_cast<int>(drow), static_cast<int>(dcol));
    if (sensed_mm == 0) return std::nullopt;

    const double sensed = sensed_mm / 1000.0;
    if (std::abs(proj->depth - sensed) > depth_tol) return std::nullopt;

    return Pixel{static_cast<int>(row), static_cast<int>(col)};
}

std::vector<VisiblePoint> project_cloud(const SceneCloud& cloud, const CameraFrame& frame,
                                        double depth_tol) {
    std::vector<VisiblePoint> out;
    const std::int32_t n_points = cloud.size();
    for (std::int32_t n = 0; n < n_points; ++n) {
        if (const auto px = visible_in_frame(cloud.position(n), frame, depth_tol))
            out.push_back({n, *px});
    }
    return out;
}

}  // namespace dualgroup
