#include "dualgroup/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "dualgroup/config.hpp"
#include "dualgroup/error.hpp"
#include "dualgroup/ply.hpp"
#include "dualgroup/tensor.hpp"

namespace dualgroup {

namespace {

// splitmix64: tiny, seed-stable across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int a, int b) {  // inclusive
        return a + static_cast<int>(next() % static_cast<std::uint64_t>(b - a + 1));
    }

    double normal(double sigma) {
        // Box-Muller; one value per call keeps the stream stateless.
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

struct Box {
    Vec3 lo, hi;
    int class_id = 0;
};

// Clearance kept between any two boxes (and used to bound their extents).
constexpr double kBoxMargin = 0.25;

// Parametric ray/box intersection (slab method). Returns the entry t or a
// negative value when there is no hit in front of the origin.
double ray_box(const Vec3& origin, const Vec3& dir, const Box& box) {
    double t_near = -1e300, t_far = 1e300;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
    const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
    for (int a = 0; a < 3; ++a) {
        if (d[a] == 0.0) {
            if (o[a] < lo[a] || o[a] > hi[a]) return -1.0;
            continue;
        }
        double t0 = (lo[a] - o[a]) / d[a];
        double t1 = (hi[a] - o[a]) / d[a];
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
    }
    if (t_near > t_far || t_far < 0.0) return -1.0;
    return t_near > 1e-9 ? t_near : -1.0;
}

struct FloatTripleHash {
    size_t operator()(const std::array<std::uint32_t, 3>& v) const {
        std::uint64_t h = v[0];
        h = h * 0x9E3779B97F4A7C15ull + v[1];
        h = h * 0x9E3779B97F4A7C15ull + v[2];
        return static_cast<size_t>(h ^ (h >> 32));
    }
};

std::array<std::uint32_t, 3> float_key(float x, float y, float z) {
    std::array<std::uint32_t, 3> k;
    std::memcpy(&k[0], &x, 4);
    std::memcpy(&k[1], &y, 4);
    std::memcpy(&k[2], &z, 4);
    return k;
}

void format_matrix(std::string& out, const double* values, int count) {
    char buf[64];
    for (int i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out += buf;
        out += (i + 1) % 4 == 0 || i + 1 == count ? '\n' : ' ';
    }
}

}  // namespace

std::vector<std::string> validate(const SynthSpec& spec) {
    std::vector<std::string> out;
    if (spec.instance_count < 1) out.push_back("synth: instance_count must be >= 1");
    if (spec.points_min < 1 || spec.points_max < spec.points_min)
        out.push_back("synth: points range must satisfy 1 <= min <= max");
    if (spec.class_count < 1) out.push_back("synth: class_count must be >= 1");
    if (!(spec.room_extent > 0.0)) out.push_back("synth: room_extent must be > 0");
    if (spec.frame_count < 1) out.push_back("synth: frame_count must be >= 1");
    if (spec.image_height < 16 || spec.image_width < 16)
        out.push_back("synth: image size must be at least 16 x 16");
    if (spec.feature_flip_rate < 0.0 || spec.feature_flip_rate > 1.0)
        out.push_back("synth: feature_flip_rate must lie in [0, 1]");
    if (spec.mask_dilation_px < 0) out.push_back("synth: mask_dilation_px must be >= 0");
    if (spec.depth_noise_sigma < 0.0) out.push_back("synth: depth_noise_sigma must be >= 0");
    return out;
}

SynthScene generate_synthetic(const SynthSpec& spec) {
    if (const auto violations = validate(spec); !violations.empty())
        throw ValidationError(violations);

    Rng rng(spec.seed);
    SynthScene scene;
    scene.spec = spec;
    SceneBundle& bundle = scene.bundle;

    // ---- box layout: one box per grid cell, margin on every side ----------
    const int cells = static_cast<int>(std::ceil(std::sqrt(spec.instance_count)));
    const double cell = spec.room_extent / cells;
    const double max_half = cell / 2.0 - kBoxMargin;
    if (max_half < 0.12)
        throw ValidationError("synth: instances do not fit the room extent with clearance (" +
                              std::to_string(spec.instance_count) + " boxes in " +
                              std::to_string(spec.room_extent) + " m)");

    std::vector<Box> boxes;
    for (int i = 0; i < spec.instance_count; ++i) {
        const int cx = i % cells, cy = i / cells;
        const double hx = rng.uniform(0.12, std::min(0.30, max_half));
        const double hy = rng.uniform(0.12, std::min(0.30, max_half));
        const double hz = rng.uniform(0.18, 0.30);
        const double x0 = cx * cell + kBoxMargin + hx;
        const double x1 = (cx + 1) * cell - kBoxMargin - hx;
        const double y0 = cy * cell + kBoxMargin + hy;
        const double y1 = (cy + 1) * cell - kBoxMargin - hy;
        const Vec3 center{rng.uniform(x0, std::max(x0, x1)),
                          rng.uniform(y0, std::max(y0, y1)), hz};
        Box box;
        box.lo = {center.x - hx, center.y - hy, 0.0};
        box.hi = {center.x + hx, center.y + hy, 2.0 * hz};
        box.class_id = i % spec.class_count;  // every class gets an instance
        boxes.push_back(box);
    }

    // ---- surface sampling (5 faces, the bottom sits on the floor) ---------
    GroundTruth gt;
    std::unordered_set<std::array<std::uint32_t, 3>, FloatTripleHash> seen;
    for (int i = 0; i < spec.instance_count; ++i) {
        const Box& box = boxes[static_cast<size_t>(i)];
        const double ex = box.hi.x - box.lo.x;
        const double ey = box.hi.y - box.lo.y;
        const double ez = box.hi.z - box.lo.z;
        const double area = ex * ey + 2.0 * ez * (ex + ey);
        const int target = rng.uniform_int(spec.points_min, spec.points_max);
        const double spacing = std::clamp(std::sqrt(area / target), 0.010, 0.030);

        const auto color = label_color(box.class_id);
        auto emit_grid = [&](int axis, double w, double u0, double u1, double v0, double v1) {
            const int nu = std::max(2, static_cast<int>(std::floor((u1 - u0) / spacing)) + 1);
            const int nv = std::max(2, static_cast<int>(std::floor((v1 - v0) / spacing)) + 1);
            for (int a = 0; a < nu; ++a)
                for (int b = 0; b < nv; ++b) {
                    const double u = u0 + (u1 - u0) * a / (nu - 1);
                    const double v = v0 + (v1 - v0) * b / (nv - 1);
                    ScenePoint p;
                    if (axis == 0) { p.x = static_cast<float>(w); p.y = static_cast<float>(u); p.z = static_cast<float>(v); }
                    else if (axis == 1) { p.x = static_cast<float>(u); p.y = static_cast<float>(w); p.z = static_cast<float>(v); }
                    else { p.x = static_cast<float>(u); p.y = static_cast<float>(v); p.z = static_cast<float>(w); }
                    if (!seen.insert(float_key(p.x, p.y, p.z)).second) continue;
                    p.r = color[0];
                    p.g = color[1];
                    p.b = color[2];
                    bundle.cloud.points.push_back(p);
                    gt.instance_ids.push_back(i);
                    gt.classes.push_back(box.class_id);
                }
        };
        emit_grid(2, box.hi.z, box.lo.x, box.hi.x, box.lo.y, box.hi.y);  // top
        emit_grid(0, box.lo.x, box.lo.y, box.hi.y, 0.0, box.hi.z);
        emit_grid(0, box.hi.x, box.lo.y, box.hi.y, 0.0, box.hi.z);
        emit_grid(1, box.lo.y, box.lo.x, box.hi.x, 0.0, box.hi.z);
        emit_grid(1, box.hi.y, box.lo.x, box.hi.x, 0.0, box.hi.z);
    }
    bundle.cloud.scene_id = "synth_" + std::to_string(spec.seed);
    bundle.ground_truth = std::move(gt);

    // ---- class names and identity label embeddings ------------------------
    for (int k = 0; k < spec.class_count; ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "class_%02d", k);
        bundle.labels.classes.push_back(name);
    }
    bundle.labels.channels = spec.class_count;
    bundle.labels.data.assign(static_cast<size_t>(spec.class_count) * spec.class_count, 0.f);
    for (int k = 0; k < spec.class_count; ++k)
        bundle.labels.data[static_cast<size_t>(k) * spec.class_count + k] = 1.f;

    // ---- cameras on a ring, looking down at the room center ---------------
    const int h_img = spec.image_height, w_img = spec.image_width;
    const double fx = 0.55 * w_img, fy = 0.55 * w_img;
    const double cx_px = 0.5 * (w_img - 1), cy_px = 0.5 * (h_img - 1);
    const Vec3 room_center{spec.room_extent / 2.0, spec.room_extent / 2.0, 0.3};

    for (int f = 0; f < spec.frame_count; ++f) {
        const double angle = 2.0 * M_PI * f / spec.frame_count;
        const double ring = 0.62 * spec.room_extent;
        const Vec3 eye{room_center.x + ring * std::cos(angle),
                       room_center.y + ring * std::sin(angle), 0.55 * spec.room_extent};
        const Vec3 forward = normalized(room_center - eye);
        const Vec3 right = normalized(cross(forward, Vec3{0.0, 0.0, 1.0}));
        const Vec3 down = cross(forward, right);

        CameraFrame frame;
        frame.frame_id = f;
        frame.rgb_height = h_img;
        frame.rgb_width = w_img;
        frame.intrinsic = Mat3::identity();
        frame.intrinsic(0, 0) = fx;
        frame.intrinsic(1, 1) = fy;
        frame.intrinsic(0, 2) = cx_px;
        frame.intrinsic(1, 2) = cy_px;

        frame.extrinsic = Mat4::identity();
        const Vec3 axes[3] = {right, down, forward};
        for (int r = 0; r < 3; ++r) {
            frame.extrinsic(r, 0) = axes[r].x;
            frame.extrinsic(r, 1) = axes[r].y;
            frame.extrinsic(r, 2) = axes[r].z;
        }
        frame.extrinsic(0, 3) = -dot(axes[0], eye);
        frame.extrinsic(1, 3) = -dot(axes[1], eye);
        frame.extrinsic(2, 3) = -dot(axes[2], eye);

        const Mat3 rot_t = frame.extrinsic.rotation().transposed();

        // render depth + instance id per pixel from the true boxes
        frame.depth.height = h_img;
        frame.depth.width = w_img;
        frame.depth.millimeters.assign(static_cast<size_t>(h_img) * w_img, 0);

        PromptMaskRaster raster;
        raster.frame_id = f;
        raster.height = h_img;
        raster.width = w_img;
        raster.ids.assign(static_cast<size_t>(h_img) * w_img, -1);

        FeatureMap map;
        map.frame_id = f;
        map.height = h_img;
        map.width = w_img;
        map.channels = spec.class_count;
        map.data.assign(static_cast<size_t>(h_img) * w_img * spec.class_count, 0.f);

        for (int row = 0; row < h_img; ++row) {
            for (int col = 0; col < w_img; ++col) {
                // camera ray with unit z, so the hit parameter is the depth
                const Vec3 dir_cam{(col - cx_px) / fx, (row - cy_px) / fy, 1.0};
                const Vec3 dir_world = rot_t * dir_cam;

                double best_t = 1e300;
                int hit = -1;
                for (size_t b = 0; b < boxes.size(); ++b) {
                    const double t = ray_box(eye, dir_world, boxes[b]);
                    if (t > 0.0 && t < best_t) {
                        best_t = t;
                        hit = static_cast<int>(b);
                    }
                }
                if (hit < 0) continue;

                const size_t px = static_cast<size_t>(row) * w_img + col;
                double depth = best_t;
                if (spec.depth_noise_sigma > 0.0) depth += rng.normal(spec.depth_noise_sigma);
                const long mm = std::lround(depth * 1000.0);
                frame.depth.millimeters[px] =
                    static_cast<std::uint16_t>(std::clamp(mm, 1l, 65535l));
                raster.ids[px] = hit;

                int cls = boxes[static_cast<size_t>(hit)].class_id;
                if (spec.feature_flip_rate > 0.0 && spec.class_count > 1 &&
                    rng.uniform() < spec.feature_flip_rate) {
                    const int other = rng.uniform_int(0, spec.class_count - 2);
                    cls = other >= cls ? other + 1 : other;
                }
                map.data[px * spec.class_count + cls] = 1.f;
            }
        }

        // dilate prompt silhouettes into background pixels; contested pixels
        // take the lowest neighboring id
        for (int pass = 0; pass < spec.mask_dilation_px; ++pass) {
            std::vector<std::int32_t> next = raster.ids;
            for (int row = 0; row < h_img; ++row)
                for (int col = 0; col < w_img; ++col) {
                    const size_t px = static_cast<size_t>(row) * w_img + col;
                    if (raster.ids[px] >= 0) continue;
                    std::int32_t best = -1;
                    for (int dr = -1; dr <= 1; ++dr)
                        for (int dc = -1; dc <= 1; ++dc) {
                            const int rr = row + dr, cc = col + dc;
                            if (rr < 0 || rr >= h_img || cc < 0 || cc >= w_img) continue;
                            const std::int32_t v =
                                raster.ids[static_cast<size_t>(rr) * w_img + cc];
                            if (v >= 0 && (best < 0 || v < best)) best = v;
                        }
                    if (best >= 0) next[px] = best;
                }
            raster.ids = std::move(next);
        }

        bundle.frames.push_back(std::move(frame));
        bundle.features.push_back(std::move(map));
        bundle.prompt_masks.push_back(std::move(raster));
    }

    return scene;
}

void write_synth_dataset(const SynthScene& scene, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const SceneBundle& bundle = scene.bundle;
    fs::create_directories(dir / "frames");

    // points [N,6]
    {
        std::vector<float> values;
        values.reserve(bundle.cloud.points.size() * 6);
        for (const ScenePoint& p : bundle.cloud.points) {
            values.push_back(p.x);
            values.push_back(p.y);
            values.push_back(p.z);
            values.push_back(static_cast<float>(p.r));
            values.push_back(static_cast<float>(p.g));
            values.push_back(static_cast<float>(p.b));
        }
        write_tensor(dir / "points.dbgt",
                     make_f32(values, {bundle.cloud.points.size(), 6}));
    }

    {
        std::ofstream out(dir / "classes.txt", std::ios::trunc);
        for (const std::string& name : bundle.labels.classes) out << name << "\n";
    }

    write_tensor(dir / "label_embeddings.dbgt",
                 make_f32(bundle.labels.data,
                          {bundle.labels.classes.size(),
                           static_cast<std::uint64_t>(bundle.labels.channels)}));

    if (bundle.ground_truth) {
        write_tensor(dir / "gt_instances.dbgt",
                     make_i32(bundle.ground_truth->instance_ids,
                              {bundle.ground_truth->instance_ids.size()}));
        write_tensor(dir / "gt_classes.dbgt",
                     make_i32(bundle.ground_truth->classes,
                              {bundle.ground_truth->classes.size()}));
    }

    for (size_t f = 0; f < bundle.frames.size(); ++f) {
        const CameraFrame& frame = bundle.frames[f];
        const std::string id = std::to_string(frame.frame_id);

        std::string text;
        format_matrix(text, frame.intrinsic.m.data(), 9);
        std::ofstream(dir / "frames" / ("intrinsic_" + id + ".txt"), std::ios::trunc) << text;
        text.clear();
        format_matrix(text, frame.extrinsic.m.data(), 16);
        std::ofstream(dir / "frames" / ("extrinsic_" + id + ".txt"), std::ios::trunc) << text;

        write_tensor(dir / "frames" / ("depth_" + id + ".dbgt"),
                     make_u16(frame.depth.millimeters,
                              {static_cast<std::uint64_t>(frame.depth.height),
                               static_cast<std::uint64_t>(frame.depth.width)}));
        const FeatureMap& map = bundle.features[f];
        write_tensor(dir / "frames" / ("features_" + id + ".dbgt"),
                     make_f32(map.data, {static_cast<std::uint64_t>(map.height),
                                         static_cast<std::uint64_t>(map.width),
                                         static_cast<std::uint64_t>(map.channels)}));
        const PromptMaskRaster& raster = bundle.prompt_masks[f];
        write_tensor(dir / "frames" / ("prompt_masks_" + id + ".dbgt"),
                     make_i32(raster.ids, {static_cast<std::uint64_t>(raster.height),
                                           static_cast<std::uint64_t>(raster.width)}));
    }

    {
        std::ofstream out(dir / "manifest.txt", std::ios::trunc);
        out << "dualgroup-manifest v1\n";
        out << "scene_id = " << bundle.cloud.scene_id << "\n";
        out << "points = points.dbgt\n";
        out << "classes = classes.txt\n";
        out << "label_embeddings = label_embeddings.dbgt\n";
        out << "rgb_size = " << scene.spec.image_height << " " << scene.spec.image_width
            << "\n";
        if (bundle.ground_truth) {
            out << "gt_instances = gt_instances.dbgt\n";
            out << "gt_classes = gt_classes.dbgt\n";
        }
        for (const CameraFrame& frame : bundle.frames) {
            const std::string id = std::to_string(frame.frame_id);
            out << "\nframe " << id << "\n";
            out << "intrinsic = frames/intrinsic_" << id << ".txt\n";
            out << "extrinsic = frames/extrinsic_" << id << ".txt\n";
            out << "depth = frames/depth_" << id << ".dbgt\n";
            out << "features = frames/features_" << id << ".dbgt\n";
            out << "prompt_masks = frames/prompt_masks_" << id << ".dbgt\n";
        }
    }

    write_config(dir / "config.cfg", PipelineConfig{});
}

}  // namespace dualgroup
