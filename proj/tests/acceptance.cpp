// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line. The first argument must be the path to the CLI binary
// (used by the determinism and runtime checks).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dualgroup/metrics.hpp"
#include "dualgroup/pipeline.hpp"
#include "dualgroup/projection.hpp"
#include "dualgroup/refine.hpp"
#include "dualgroup/sgb.hpp"
#include "dualgroup/synth.hpp"
#include "dualgroup/tensor.hpp"
#include "dualgroup/trainref.hpp"
#include "oracles.hpp"

using namespace dualgroup;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dualgroup_accept_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// ---- criterion 1: BFS grouping against the union-find oracle ---------------

void check_bfs_grouping() {
    const auto start = std::chrono::steady_clock::now();
    int mismatches = 0;
    for (int scene = 0; scene < 200; ++scene) {
        oracles::Rng rng(1000 + static_cast<std::uint64_t>(scene));
        const int n = rng.uniform_int(100, 2000);
        const int k = rng.uniform_int(1, 5);
        const SceneCloud cloud = oracles::random_cloud(rng, n, 1.2);
        SemanticLabeling sem;
        for (int i = 0; i < n; ++i) sem.classes.push_back(rng.uniform_int(-1, k - 1));
        const double radius = rng.uniform(0.03, 0.12);
        const int min_size = rng.uniform_int(1, 5);
        std::vector<std::int32_t> background;
        std::set<std::int32_t> background_set;
        if (k > 1 && scene % 3 == 0) {
            background.push_back(k - 1);
            background_set.insert(k - 1);
        }

        const auto masks = bfs_group(cloud, sem, radius, min_size, background);
        std::set<std::vector<std::int32_t>> got;
        for (const PointMask& m : masks) got.insert(m.indices);
        const auto expected =
            oracles::same_class_components(cloud, sem, radius, min_size, background_set);
        if (got != expected) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "200 scenes, %.2f s", elapsed);
    report("bfs-grouping-oracle", mismatches == 0 && elapsed < 10.0, detail);
}

// ---- criterion 2: keep-or-split against the transcription oracle -----------

void check_gaim() {
    int mismatches = 0;

    auto run_case = [&](const std::vector<std::set<std::int32_t>>& coarse_sets,
                        const std::vector<std::set<std::int32_t>>& fine_sets, double theta) {
        std::vector<PointMask> coarse, fine;
        for (const auto& s : coarse_sets) coarse.push_back(PointMask{{s.begin(), s.end()}});
        for (const auto& s : fine_sets) fine.push_back(PointMask{{s.begin(), s.end()}});
        const auto got_masks = granularity_aware_assign(coarse, fine, theta);
        std::vector<std::set<std::int32_t>> got;
        for (const PointMask& m : got_masks) got.emplace_back(m.indices.begin(), m.indices.end());
        if (got != oracles::keep_or_split(coarse_sets, fine_sets, theta)) ++mismatches;
    };

    for (int trial = 0; trial < 200; ++trial) {
        oracles::Rng rng(5000 + static_cast<std::uint64_t>(trial));
        const int n = rng.uniform_int(20, 300);
        std::vector<std::set<std::int32_t>> coarse(static_cast<size_t>(rng.uniform_int(1, 8)));
        std::vector<std::set<std::int32_t>> fine(static_cast<size_t>(rng.uniform_int(0, 8)));
        for (auto& s : coarse) {
            const int size = rng.uniform_int(1, n);
            for (int i = 0; i < size; ++i) s.insert(rng.uniform_int(0, n - 1));
        }
        for (auto& s : fine) {
            const int size = rng.uniform_int(1, n);
            for (int i = 0; i < size; ++i) s.insert(rng.uniform_int(0, n - 1));
        }
        run_case(coarse, fine, rng.uniform(0.0, 1.0));
    }

    // boundary: rho == theta must split (strict keep rule)...
    run_case({{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, 0.5);
    run_case({{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, 0.25);
    // ... and zero total overlap keeps the mask whole
    run_case({{0, 1, 2}}, {{7, 8}}, 0.4);
    run_case({{0, 1, 2}}, {}, 0.9);

    {
        // direct boundary sanity on top of oracle equality
        const std::vector<PointMask> coarse = {PointMask{{0, 1, 2, 3}}};
        const std::vector<PointMask> fine = {PointMask{{0, 1}}, PointMask{{2, 3}}};
        if (granularity_aware_assign(coarse, fine, 0.5).size() != 2) ++mismatches;
        const std::vector<PointMask> none = {PointMask{{9, 10}}};
        const auto kept = granularity_aware_assign(coarse, none, 0.4);
        if (kept.size() != 1 || kept[0].indices != coarse[0].indices) ++mismatches;
    }

    report("gaim-oracle", mismatches == 0, "200 random + boundary cases");
}

// ---- criterion 3: small-instance merging against the O(N^2) oracle ---------

void check_merge_small() {
    int mismatches = 0;
    for (int trial = 0; trial < 30; ++trial) {
        oracles::Rng rng(9000 + static_cast<std::uint64_t>(trial));
        const int clusters = rng.uniform_int(2, 8);
        SceneCloud cloud;
        for (int c = 0; c < clusters; ++c) {
            const double cx = rng.uniform(0.0, 3.0), cy = rng.uniform(0.0, 3.0),
                         cz = rng.uniform(0.0, 1.0);
            const int count = rng.uniform_int(10, 125);
            for (int i = 0; i < count && cloud.size() < 1000; ++i)
                cloud.points.push_back(
                    {static_cast<float>(cx + rng.uniform(-0.2, 0.2)),
                     static_cast<float>(cy + rng.uniform(-0.2, 0.2)),
                     static_cast<float>(cz + rng.uniform(-0.2, 0.2))});
        }
        std::vector<PointMask> masks;
        std::int32_t next = 0;
        while (next < cloud.size()) {
            const std::int32_t size =
                std::min<std::int32_t>(rng.uniform_int(4, 260), cloud.size() - next);
            PointMask m;
            for (std::int32_t i = 0; i < size; ++i) m.indices.push_back(next + i);
            masks.push_back(std::move(m));
            next += size;
        }
        if (rng.uniform() < 0.4 && masks.size() > 1) masks.pop_back();  // unassigned tail

        const int n = cloud.size();
        for (const int gamma : {0, 200, n + 1}) {
            const InstanceLabeling got = merge_small_instances(cloud, masks, gamma, 1);
            const InstanceLabeling expected =
                oracles::merge_small_naive(cloud, masks, gamma, 1);
            if (got.ids != expected.ids) ++mismatches;
        }
    }
    report("small-instance-merge-oracle", mismatches == 0,
           "30 scenes x gamma in {0, 200, N+1}");
}

// ---- criterion 4: per-class selection counts and propagation ---------------

void check_ssp() {
    int bad = 0;
    for (int trial = 0; trial < 40; ++trial) {
        oracles::Rng rng(13000 + static_cast<std::uint64_t>(trial));
        const int n = rng.uniform_int(50, 1500), k = rng.uniform_int(1, 6);
        ScoreMatrix scores;
        scores.rows = n;
        scores.cols = k;
        scores.featureless.assign(static_cast<size_t>(n), 0);
        scores.data.resize(static_cast<size_t>(n) * k);
        for (auto& v : scores.data) v = static_cast<float>(rng.uniform(0.0, 1.0));
        SemanticLabeling sem;
        for (int i = 0; i < n; ++i) sem.classes.push_back(rng.uniform_int(-1, k - 1));

        for (const double alpha : {10.0, 30.0, 100.0}) {
            const SemanticLabeling selected = semantic_select(scores, sem, alpha);
            // per-class kept count must be ceil(alpha% * n_k) exactly
            for (int cls = 0; cls < k; ++cls) {
                std::int64_t n_k = 0, kept = 0;
                for (int i = 0; i < n; ++i) {
                    if (sem.classes[static_cast<size_t>(i)] == cls) ++n_k;
                    if (selected.classes[static_cast<size_t>(i)] == cls) ++kept;
                }
                if (n_k == 0) {
                    if (kept != 0) ++bad;
                    continue;
                }
                const auto quota = static_cast<std::int64_t>(
                    std::ceil(alpha * static_cast<double>(n_k) / 100.0));
                if (kept != quota) ++bad;
            }
        }

        // propagation output is constant within every superpoint
        SuperpointPartition sp;
        sp.count = rng.uniform_int(1, 20);
        for (int i = 0; i < n; ++i) sp.sp_ids.push_back(rng.uniform_int(0, sp.count - 1));
        for (std::int32_t m = 0; m < sp.count; ++m)
            if (std::find(sp.sp_ids.begin(), sp.sp_ids.end(), m) == sp.sp_ids.end())
                sp.sp_ids[static_cast<size_t>(m % n)] = m;

        const SemanticLabeling selected = semantic_select(scores, sem, 30.0);
        const SemanticLabeling propagated = superpoint_propagate(selected, sp);
        std::vector<std::set<std::int32_t>> values(static_cast<size_t>(sp.count));
        for (int i = 0; i < n; ++i)
            values[static_cast<size_t>(sp.sp_ids[static_cast<size_t>(i)])].insert(
                propagated.classes[static_cast<size_t>(i)]);
        for (const auto& v : values)
            if (v.size() > 1) ++bad;
    }
    report("ssp-counts", bad == 0, "alpha in {10, 30, 100}, 40 trials");
}

// ---- criterion 5: end-to-end synthetic recovery ------------------------------

void check_end_to_end() {
    bool ok = true;
    std::string detail;
    for (const std::uint64_t seed : {11ull, 29ull, 57ull}) {
        const SynthSpec spec{.seed = seed, .instance_count = 6, .class_count = 3,
                             .frame_count = 6};
        const SynthScene scene = generate_synthetic(spec);

        PipelineConfig config;
        config.select_top_alpha = 100.0;  // uniform zero-noise confidences

        const auto start = std::chrono::steady_clock::now();
        const PipelineResult result = run_pipeline(scene.bundle, config);
        const double elapsed = seconds_since(start);

        const GroundTruth& gt = *scene.bundle.ground_truth;
        const MiouReport m = miou(result.semantics, gt.classes, spec.class_count);
        const auto preds = predictions_from_labeling(result.instances, result.semantics);
        const ApReport ap = instance_ap(preds, gt);

        if (!(m.mean == 1.0 && ap.ap == 1.0 && ap.ap50 == 1.0 && ap.ap25 == 1.0 &&
              elapsed < 5.0)) {
            ok = false;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "seed %llu: miou=%.6f ap=%.6f in %.2f s",
                          static_cast<unsigned long long>(seed), m.mean, ap.ap, elapsed);
            detail = buf;
            break;
        }
    }
    report("end-to-end-synthetic-recovery", ok,
           ok ? "3 seeds, AP = mIoU = 1.0 exactly" : detail);
}

// ---- criterion 6: metric fixtures and random-scene brute force ---------------

void check_metric_fixtures() {
    bool ok = true;

    {  // perfect predictions
        GroundTruth gt;
        gt.instance_ids = {0, 0, 1, 1};
        gt.classes = {0, 0, 1, 1};
        const std::vector<InstancePrediction> preds = {
            {PointMask{{0, 1}}, 0, 1.f}, {PointMask{{2, 3}}, 1, 1.f}};
        const ApReport ap = instance_ap(preds, gt);
        ok = ok && ap.ap == 1.0 && ap.ap50 == 1.0 && ap.ap25 == 1.0;
        ok = ok && instance_ap({}, gt).ap == 0.0;
    }
    {  // hand-computed 3-prediction envelope: AP50 = 5/6
        GroundTruth gt;
        gt.instance_ids.assign(20, -1);
        gt.classes.assign(20, 0);
        for (int i = 0; i < 10; ++i) gt.instance_ids[static_cast<size_t>(i)] = 0;
        for (int i = 10; i < 20; ++i) gt.instance_ids[static_cast<size_t>(i)] = 1;
        std::vector<InstancePrediction> preds;
        PointMask g1, g1_half, g2;
        for (std::int32_t i = 0; i < 10; ++i) g1.indices.push_back(i);
        for (std::int32_t i = 0; i < 5; ++i) g1_half.indices.push_back(i);
        for (std::int32_t i = 10; i < 20; ++i) g2.indices.push_back(i);
        preds.push_back({g1, 0, 0.9f});
        preds.push_back({g1_half, 0, 0.8f});
        preds.push_back({g2, 0, 0.7f});
        ok = ok && std::abs(average_precision_at(preds, gt, 0.5) - 5.0 / 6.0) < 1e-9;
    }
    {  // hand-counted confusion: both IoUs exactly 1/2
        SemanticLabeling sem;
        sem.classes = {0, 0, 1, 1, 1, 1};
        const std::vector<std::int32_t> gt = {0, 0, 0, 0, 1, 1};
        const MiouReport r = miou(sem, gt, 2);
        ok = ok && std::abs(r.per_class_iou[0] - 0.5) < 1e-9 &&
             std::abs(r.per_class_iou[1] - 0.5) < 1e-9;
    }

    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        oracles::Rng rng(21000 + static_cast<std::uint64_t>(trial));
        const int n = rng.uniform_int(8, 60), k = rng.uniform_int(1, 3);
        GroundTruth gt;
        std::vector<std::int32_t> inst_class;
        const int instances = rng.uniform_int(1, 5);
        for (int i = 0; i < instances; ++i) inst_class.push_back(rng.uniform_int(0, k - 1));
        for (int p = 0; p < n; ++p) {
            const int id = rng.uniform_int(-1, instances - 1);
            gt.instance_ids.push_back(id);
            gt.classes.push_back(id >= 0 ? inst_class[static_cast<size_t>(id)]
                                         : rng.uniform_int(-1, k - 1));
        }
        std::vector<InstancePrediction> preds;
        const int pred_count = rng.uniform_int(0, 7);
        for (int i = 0; i < pred_count; ++i) {
            std::set<std::int32_t> s;
            const int size = rng.uniform_int(1, std::max(1, n / 2));
            for (int j = 0; j < size; ++j) s.insert(rng.uniform_int(0, n - 1));
            preds.push_back({PointMask{{s.begin(), s.end()}},
                             rng.uniform_int(0, k - 1),
                             static_cast<float>(rng.uniform(0.01, 1.0))});
        }

        for (const double t : {0.25, 0.5, 0.75}) {
            if (std::abs(average_precision_at(preds, gt, t) -
                         oracles::instance_ap_naive(preds, gt, t)) > 1e-12)
                ++mismatches;
        }
        const PrecisionRecall pr = mprec_mrec(preds, gt);
        const auto [ep, er] = oracles::mprec_mrec_naive(preds, gt, 0.5);
        if (std::abs(pr.precision - ep) > 1e-12 || std::abs(pr.recall - er) > 1e-12)
            ++mismatches;

        SemanticLabeling sem;
        std::vector<std::int32_t> sem_gt;
        for (int i = 0; i < n; ++i) {
            sem.classes.push_back(rng.uniform_int(-1, k - 1));
            sem_gt.push_back(rng.uniform_int(-1, k - 1));
        }
        if (std::abs(miou(sem, sem_gt, k).mean - oracles::miou_naive(sem, sem_gt, k)) > 1e-12)
            ++mismatches;
    }

    report("metric-fixtures", ok && mismatches == 0,
           "hand fixtures to 1e-9, 100 random scenes vs brute force");
}

// ---- criterion 7: closed forms in the training reference ---------------------

void check_trainref_closed_forms() {
    bool ok = true;

    for (const int k : {2, 4, 7}) {
        SemanticLabeling labels;
        std::vector<double> probs;
        for (int i = 0; i < 5; ++i) {
            labels.classes.push_back(i % k);
            for (int c = 0; c < k; ++c) probs.push_back(1.0 / static_cast<double>(k));
        }
        const double expected = std::log(static_cast<double>(k));
        if (std::abs(loss_sem(probs, k, labels).value - expected) > 1e-9) ok = false;
    }

    ok = ok && score_target(0.25) == 0.0 && score_target(0.75) == 1.0 &&
         score_target(0.5) == 0.5 && score_target(0.2) == 0.0 && score_target(0.8) == 1.0;

    {
        oracles::Rng rng(31000);
        const SceneCloud cloud = oracles::random_cloud(rng, 500, 3.0);
        InstanceLabeling inst;
        for (int i = 0; i < 500; ++i) inst.ids.push_back(rng.uniform_int(-1, 6));
        const OffsetField off = offset_targets(cloud, inst);
        for (std::int32_t id = 0; id <= 6; ++id) {
            double sum[3] = {0, 0, 0};
            std::int64_t count = 0;
            for (size_t i = 0; i < off.data.size(); ++i) {
                if (inst.ids[i] != id) continue;
                for (int c = 0; c < 3; ++c) sum[c] += off.data[i][c];
                ++count;
            }
            if (count == 0) continue;
            for (int c = 0; c < 3; ++c)
                if (std::abs(sum[c] / static_cast<double>(count)) > 1e-6) ok = false;
        }
    }

    report("trainref-closed-forms", ok,
           "ln K to 1e-9, ramp breakpoints exact, centroid identity to 1e-6");
}

// ---- criterion 8: projection consistency --------------------------------------

void check_projection() {
    bool ok = true;

    // rigid-motion invariance within 1e-5 px
    oracles::Rng rng(41000);
    for (int trial = 0; trial < 50 && ok; ++trial) {
        CameraFrame frame;
        frame.intrinsic = Mat3::identity();
        frame.intrinsic(0, 0) = rng.uniform(50.0, 400.0);
        frame.intrinsic(1, 1) = rng.uniform(50.0, 400.0);
        frame.intrinsic(0, 2) = rng.uniform(100.0, 300.0);
        frame.intrinsic(1, 2) = rng.uniform(100.0, 300.0);
        frame.extrinsic = Mat4::identity();
        frame.extrinsic(2, 3) = rng.uniform(2.0, 6.0);
        frame.rgb_height = 480;
        frame.rgb_width = 640;
        frame.depth.height = 480;
        frame.depth.width = 640;

        const double angle = rng.uniform(-1.5, 1.5);
        const double c = std::cos(angle), s = std::sin(angle);
        Mat4 motion = Mat4::identity();
        motion(0, 0) = c; motion(0, 2) = s;
        motion(2, 0) = -s; motion(2, 2) = c;
        motion(0, 3) = rng.uniform(-1.0, 1.0);
        motion(1, 3) = rng.uniform(-1.0, 1.0);
        motion(2, 3) = rng.uniform(-0.5, 0.5);

        CameraFrame moved = frame;
        moved.extrinsic = frame.extrinsic * motion.rigid_inverse();

        for (int i = 0; i < 40; ++i) {
            const Vec3 p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(-0.5, 0.5)};
            const auto a = project_point(p, frame);
            const auto b = project_point(motion.transform_point(p), moved);
            if (a.has_value() != b.has_value()) { ok = false; break; }
            if (a && (std::abs(a->row - b->row) > 1e-5 || std::abs(a->col - b->col) > 1e-5)) {
                ok = false;
                break;
            }
        }
    }

    // project_cloud equals the scalar loop exactly on 100 scene/frame pairs
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        oracles::Rng rng(42000 + static_cast<std::uint64_t>(trial));
        const SceneCloud cloud = oracles::random_cloud(rng, rng.uniform_int(50, 500), 4.0);
        CameraFrame frame;
        frame.intrinsic = Mat3::identity();
        frame.intrinsic(0, 0) = rng.uniform(10.0, 60.0);
        frame.intrinsic(1, 1) = rng.uniform(10.0, 60.0);
        frame.intrinsic(0, 2) = rng.uniform(10.0, 50.0);
        frame.intrinsic(1, 2) = rng.uniform(10.0, 50.0);
        frame.extrinsic = Mat4::identity();
        frame.extrinsic(0, 3) = rng.uniform(-2.0, 0.0);
        frame.extrinsic(2, 3) = rng.uniform(0.0, 3.0);
        frame.rgb_height = 64;
        frame.rgb_width = 64;
        frame.depth.height = 64;
        frame.depth.width = 64;
        frame.depth.millimeters.resize(64 * 64);
        for (auto& mm : frame.depth.millimeters)
            mm = static_cast<std::uint16_t>(rng.uniform_int(0, 8000));

        const auto batched = project_cloud(cloud, frame, 0.05);
        std::vector<VisiblePoint> scalar;
        for (std::int32_t i = 0; i < cloud.size(); ++i)
            if (const auto px = visible_in_frame(cloud.position(i), frame, 0.05))
                scalar.push_back({i, *px});
        if (batched.size() != scalar.size()) {
            ++mismatches;
            continue;
        }
        for (size_t i = 0; i < scalar.size(); ++i)
            if (batched[i].index != scalar[i].index ||
                batched[i].pixel.row != scalar[i].pixel.row ||
                batched[i].pixel.col != scalar[i].pixel.col)
                ++mismatches;
    }

    report("projection-consistency", ok && mismatches == 0,
           "rigid invariance to 1e-5 px, 100 scalar-oracle scenes");
}

// ---- criteria 9 and 10: CLI determinism and the runtime budget ---------------

int run_cli(const std::string& command) {
    const int status = std::system(command.c_str());
    return status;
}

void check_determinism(const std::string& cli) {
    const fs::path dir = fresh_dir("determinism");
    const SynthSpec spec{.seed = 77, .instance_count = 5, .class_count = 3,
                         .frame_count = 5, .image_height = 240, .image_width = 320};
    write_synth_dataset(generate_synthetic(spec), dir / "data");

    const std::string base = "\"" + cli + "\" pseudolabel --manifest \"" +
                             (dir / "data" / "manifest.txt").string() +
                             "\" --set select_top_alpha=100 --out \"";
    const int rc1 = run_cli(base + (dir / "out1").string() + "\" > /dev/null");
    const int rc2 = run_cli(base + (dir / "out2").string() + "\" > /dev/null");

    bool ok = rc1 == 0 && rc2 == 0;
    ok = ok && read_bytes(dir / "out1" / "instance_labels.dbgt") ==
                   read_bytes(dir / "out2" / "instance_labels.dbgt");
    ok = ok && read_bytes(dir / "out1" / "semantic_labels.dbgt") ==
                   read_bytes(dir / "out2" / "semantic_labels.dbgt");
    ok = ok && !read_bytes(dir / "out1" / "instance_labels.dbgt").empty();
    report("pseudolabel-determinism", ok, "two CLI runs, bit-identical outputs");
}

void check_performance(const std::string& cli) {
    const fs::path dir = fresh_dir("perf");
    SynthSpec spec;
    spec.seed = 123;
    spec.instance_count = 50;
    spec.points_min = 2000;
    spec.points_max = 2400;
    spec.class_count = 5;
    spec.room_extent = 10.0;
    spec.frame_count = 50;
    spec.image_height = 240;
    spec.image_width = 320;
    const SynthScene scene = generate_synthetic(spec);
    write_synth_dataset(scene, dir / "data");

    const std::int32_t n = scene.bundle.cloud.size();

    const std::string command = "\"" + cli + "\" pseudolabel --manifest \"" +
                                (dir / "data" / "manifest.txt").string() + "\" --out \"" +
                                (dir / "out").string() + "\" > /dev/null";
    const auto start = std::chrono::steady_clock::now();
    const int rc = run_cli(command);
    const double elapsed = seconds_since(start);

    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d points, 50 frames, %.2f s", n, elapsed);
    report("performance-budget", rc == 0 && n >= 100000 && elapsed < 10.0, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];

    check_bfs_grouping();
    check_gaim();
    check_merge_small();
    check_ssp();
    check_end_to_end();
    check_metric_fixtures();
    check_trainref_closed_forms();
    check_projection();
    check_determinism(cli);
    check_performance(cli);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << (10 - failures) << "/10)\n";
    return failures == 0 ? 0 : 1;
}
