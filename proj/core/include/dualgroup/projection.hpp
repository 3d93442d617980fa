#pragma once

#include <optional>
#include <vector>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Continuous projection of a world point into a frame. Pixel coordinates are
// (row, col): the first coordinate runs down the image.
struct PixelProjection {
    double row = 0.0;
    double col = 0.0;
    double depth = 0.0;  // camera-space depth, meters
};

struct Pixel {
    int row = 0;
    int col = 0;
};

// Projects p through extrinsic then intrinsic. Returns nullopt when the
// camera-space depth is <= 0 (point behind the camera).
std::optional<PixelProjection> project_point(const Vec3& p, const CameraFrame& frame);

// Projection plus the occlusion test against the frame's depth raster.
// Returns the nearest integer pixel at RGB resolution iff:
//   - project_point succeeds,
//   - the rounded pixel is inside the RGB raster and, after uniform scaling
//     of the continuous coordinates, inside the depth raster,
//   - the depth raster value is valid (> 0),
//   - |projected depth - sensed depth| <= depth_tol.
std::optional<Pixel> visible_in_frame(const Vec3& p, const CameraFrame& frame,
                                      double depth_tol);

struct VisiblePoint {
    std::int32_t index = 0;
    Pixel pixel;
};

// Batched visible_in_frame over a whole cloud; output sorted by point index.
std::vector<VisiblePoint> project_cloud(const SceneCloud& cloud, const CameraFrame& frame,
                                        double depth_tol);

}  // namespace dualgroup
