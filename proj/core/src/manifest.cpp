#include "dualgroup/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dualgroup/error.hpp"
#include "dualgroup/tensor.hpp"

namespace dualgroup {

namespace {

constexpr const char* kHeader = "dualgroup-manifest v1";

std::string trim(const std::string& s) {
    const size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> read_floats(const std::filesystem::path& path, size_t expected) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), -1, "cannot open file");
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw ParseError(path.string(), -1, "non-numeric content");
    if (values.size() != expected)
        throw ParseError(path.string(), -1,
                         "expected " + std::to_string(expected) + " values, found " +
                             std::to_string(values.size()));
    return values;
}

Tensor read_typed(const std::filesystem::path& path, Dtype dtype, size_t rank) {
    Tensor t = read_tensor(path);
    if (t.dtype != dtype)
        throw ParseError(path.string(), -1, "unexpected dtype");
    if (t.dims.size() != rank)
        throw ParseError(path.string(), -1,
                         "expected rank " + std::to_string(rank) + ", found " +
                             std::to_string(t.dims.size()));
    return t;
}

}  // namespace

Mat3 read_intrinsic(const std::filesystem::path& path) {
    const std::vector<double> v = read_floats(path, 9);
    Mat3 m;
    std::copy(v.begin(), v.end(), m.m.begin());
    return m;
}

Mat4 read_extrinsic(const std::filesystem::path& path) {
    const std::vector<double> v = read_floats(path, 16);
    Mat4 m;
    std::copy(v.begin(), v.end(), m.m.begin());
    return m;
}

std::vector<std::string> read_class_names(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), -1, "cannot open file");
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) names.push_back(line);
    }
    return names;
}

SceneManifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), -1, "cannot open manifest");
    const std::filesystem::path dir = path.parent_path();

    SceneManifest manifest;
    std::string line;
    long long line_no = 0;
    bool header_seen = false;
    SceneManifest::FrameFiles* frame = nullptr;

    auto resolve = [&](const std::string& rel) { return dir / rel; };

    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != kHeader)
                throw ParseError(path.string(), line_no,
                                 std::string("expected header '") + kHeader + "'");
            header_seen = true;
            continue;
        }

        if (line.rfind("frame", 0) == 0 && line.find('=') == std::string::npos) {
            std::istringstream ss(line);
            std::string word;
            int id = 0;
            ss >> word >> id;
            if (ss.fail())
                throw ParseError(path.string(), line_no, "expected 'frame <id>'");
            manifest.frames.push_back({});
            frame = &manifest.frames.back();
            frame->frame_id = id;
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string(), line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (frame) {
            if (key == "intrinsic") frame->intrinsic = resolve(value);
            else if (key == "extrinsic") frame->extrinsic = resolve(value);
            else if (key == "depth") frame->depth = resolve(value);
            else if (key == "features") frame->features = resolve(value);
            else if (key == "prompt_masks") frame->prompt_masks = resolve(value);
            else
                throw ParseError(path.string(), line_no, "unknown frame key '" + key + "'");
            continue;
        }

        if (key == "scene_id") manifest.scene_id = value;
        else if (key == "points") manifest.points = resolve(value);
        else if (key == "classes") manifest.classes = resolve(value);
        else if (key == "label_embeddings") manifest.label_embeddings = resolve(value);
        else if (key == "rgb_size") {
            std::istringstream ss(value);
            ss >> manifest.rgb_height >> manifest.rgb_width;
            if (ss.fail())
                throw ParseError(path.string(), line_no, "rgb_size expects '<H> <W>'");
        } else if (key == "superpoints") manifest.superpoints = resolve(value);
        else if (key == "gt_instances") manifest.gt_instances = resolve(value);
        else if (key == "gt_classes") manifest.gt_classes = resolve(value);
        else
            throw ParseError(path.string(), line_no, "unknown key '" + key + "'");
    }

    if (!header_seen) throw ParseError(path.string(), -1, "empty manifest");
    if (manifest.points.empty())
        throw ParseError(path.string(), -1, "manifest is missing 'points'");
    if (manifest.classes.empty())
        throw ParseError(path.string(), -1, "manifest is missing 'classes'");
    if (manifest.label_embeddings.empty())
        throw ParseError(path.string(), -1, "manifest is missing 'label_embeddings'");
    return manifest;
}

SceneBundle load_scene(const SceneManifest& manifest) {
    SceneBundle bundle;
    std::vector<std::string> violations;

    // points: f32 [N, 6]
    {
        const Tensor t = read_typed(manifest.points, Dtype::f32, 2);
        if (t.dims[1] != 6)
            throw ParseError(manifest.points.string(), -1, "points tensor must be [N,6]");
        const auto values = t.as<float>();
        const auto n = static_cast<size_t>(t.dims[0]);
        bundle.cloud.points.resize(n);
        bundle.cloud.scene_id = manifest.scene_id;
        for (size_t i = 0; i < n; ++i) {
            ScenePoint& p = bundle.cloud.points[i];
            p.x = values[i * 6 + 0];
            p.y = values[i * 6 + 1];
            p.z = values[i * 6 + 2];
            auto channel = [&](size_t c) {
                const float v = std::clamp(values[i * 6 + c], 0.f, 255.f);
                return static_cast<std::uint8_t>(std::lround(v));
            };
            p.r = channel(3);
            p.g = channel(4);
            p.b = channel(5);
        }
    }

    bundle.labels.classes = read_class_names(manifest.classes);
    {
        const Tensor t = read_typed(manifest.label_embeddings, Dtype::f32, 2);
        bundle.labels.channels = static_cast<int>(t.dims[1]);
        const auto values = t.as<float>();
        bundle.labels.data.assign(values.begin(), values.end());
        if (t.dims[0] != bundle.labels.classes.size())
            violations.push_back("label embeddings row count " + std::to_string(t.dims[0]) +
                                 " != class name count " +
                                 std::to_string(bundle.labels.classes.size()));
    }

    std::set<int> frame_ids;
    for (const SceneManifest::FrameFiles& ff : manifest.frames) {
        if (!frame_ids.insert(ff.frame_id).second)
            violations.push_back("duplicate frame id " + std::to_string(ff.frame_id));
        if (ff.intrinsic.empty() || ff.extrinsic.empty() || ff.depth.empty() ||
            ff.features.empty()) {
            violations.push_back("frame " + std::to_string(ff.frame_id) +
                                 ": missing intrinsic/extrinsic/depth/features entry");
            continue;
        }

        CameraFrame frame;
        frame.frame_id = ff.frame_id;
        frame.intrinsic = read_intrinsic(ff.intrinsic);
        frame.extrinsic = read_extrinsic(ff.extrinsic);
        frame.rgb_height = manifest.rgb_height;
        frame.rgb_width = manifest.rgb_width;
        {
            const Tensor t = read_typed(ff.depth, Dtype::u16, 2);
            frame.depth.height = static_cast<int>(t.dims[0]);
            frame.depth.width = static_cast<int>(t.dims[1]);
            const auto values = t.as<std::uint16_t>();
            frame.depth.millimeters.assign(values.begin(), values.end());
        }

        FeatureMap map;
        map.frame_id = ff.frame_id;
        {
            const Tensor t = read_typed(ff.features, Dtype::f32, 3);
            map.height = static_cast<int>(t.dims[0]);
            map.width = static_cast<int>(t.dims[1]);
            map.channels = static_cast<int>(t.dims[2]);
            const auto values = t.as<float>();
            map.data.assign(values.begin(), values.end());
        }

        if (ff.prompt_masks) {
            PromptMaskRaster raster;
            raster.frame_id = ff.frame_id;
            const Tensor t = read_typed(*ff.prompt_masks, Dtype::i32, 2);
            raster.height = static_cast<int>(t.dims[0]);
            raster.width = static_cast<int>(t.dims[1]);
            const auto values = t.as<std::int32_t>();
            raster.ids.assign(values.begin(), values.end());
            if (raster.height != frame.rgb_height || raster.width != frame.rgb_width)
                violations.push_back("frame " + std::to_string(ff.frame_id) +
                                     ": prompt mask raster size differs from rgb_size");
            bundle.prompt_masks.push_back(std::move(raster));
        }

        bundle.frames.push_back(std::move(frame));
        bundle.features.push_back(std::move(map));
    }

    if (!bundle.prompt_masks.empty() && bundle.prompt_masks.size() != bundle.frames.size())
        violations.push_back("prompt masks provided for only some frames (" +
                             std::to_string(bundle.prompt_masks.size()) + " of " +
                             std::to_string(bundle.frames.size()) + ")");

    // keep the three per-frame vectors aligned, sorted by frame id
    {
        std::vector<size_t> order(bundle.frames.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return bundle.frames[a].frame_id < bundle.frames[b].frame_id;
        });
        auto permute = [&](auto& vec) {
            auto copy = vec;
            for (size_t i = 0; i < order.size() && i < copy.size(); ++i)
                vec[i] = std::move(copy[order[i]]);
        };
        permute(bundle.frames);
        permute(bundle.features);
        if (bundle.prompt_masks.size() == bundle.frames.size()) permute(bundle.prompt_masks);
    }

    if (manifest.superpoints) {
        const Tensor t = read_typed(*manifest.superpoints, Dtype::i32, 1);
        SuperpointPartition sp;
        const auto values = t.as<std::int32_t>();
        sp.sp_ids.assign(values.begin(), values.end());
        sp.count = sp.sp_ids.empty()
                       ? 0
                       : *std::max_element(sp.sp_ids.begin(), sp.sp_ids.end()) + 1;
        bundle.superpoints = std::move(sp);
    }

    if (manifest.gt_instances || manifest.gt_classes) {
        if (!manifest.gt_instances || !manifest.gt_classes) {
            violations.push_back("ground truth requires both gt_instances and gt_classes");
        } else {
            GroundTruth gt;
            const Tensor ti = read_typed(*manifest.gt_instances, Dtype::i32, 1);
            const Tensor tc = read_typed(*manifest.gt_classes, Dtype::i32, 1);
            const auto vi = ti.as<std::int32_t>();
            const auto vc = tc.as<std::int32_t>();
            gt.instance_ids.assign(vi.begin(), vi.end());
            gt.classes.assign(vc.begin(), vc.end());
            bundle.ground_truth = std::move(gt);
        }
    }

    // invariant sweep over everything loaded
    auto append = [&](std::vector<std::string> more) {
        violations.insert(violations.end(), more.begin(), more.end());
    };
    append(validate(bundle.cloud));
    append(validate(bundle.labels));
    for (const CameraFrame& f : bundle.frames) append(validate(f));
    for (const FeatureMap& m : bundle.features) {
        if (m.channels != bundle.labels.channels)
            violations.push_back("frame " + std::to_string(m.frame_id) +
                                 ": feature channels " + std::to_string(m.channels) +
                                 " != label embedding channels " +
                                 std::to_string(bundle.labels.channels));
        if (m.data.size() !=
            static_cast<size_t>(m.height) * m.width * static_cast<size_t>(m.channels))
            violations.push_back("frame " + std::to_string(m.frame_id) +
                                 ": feature payload does not match its dimensions");
    }
    if (bundle.superpoints)
        append(validate(*bundle.superpoints, bundle.cloud.size()));
    if (bundle.ground_truth) append(validate(*bundle.ground_truth, bundle.cloud.size()));

    if (!violations.empty()) throw ValidationError(violations);
    return bundle;
}

SceneBundle load_scene(const std::filesystem::path& manifest_path) {
    return load_scene(parse_manifest(manifest_path));
}

}  // namespace dualgroup
