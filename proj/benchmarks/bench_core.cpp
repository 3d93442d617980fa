#include <benchmark/benchmark.h>

#include "dualgroup/pipeline.hpp"
#include "dualgroup/projection.hpp"
#include "dualgroup/refine.hpp"
#include "dualgroup/sgb.hpp"
#include "dualgroup/synth.hpp"

using namespace dualgroup;

namespace {

const SynthScene& scene_100k() {
    static const SynthScene scene = generate_synthetic({.seed = 123,
                                                        .instance_count = 50,
                                                        .points_min = 2000,
                                                        .points_max = 2400,
                                                        .class_count = 5,
                                                        .room_extent = 10.0,
                                                        .frame_count = 50,
                                                        .image_height = 240,
                                                        .image_width = 320});
    return scene;
}

const SynthScene& scene_small() {
    static const SynthScene scene = generate_synthetic({.seed = 7,
                                                        .instance_count = 8,
                                                        .class_count = 4,
                                                        .frame_count = 8,
                                                        .image_height = 240,
                                                        .image_width = 320});
    return scene;
}

}  // namespace

static void BM_ProjectCloud(benchmark::State& state) {
    const SceneBundle& b = scene_100k().bundle;
    for (auto _ : state)
        benchmark::DoNotOptimize(project_cloud(b.cloud, b.frames.front(), 0.05));
    state.SetItemsProcessed(state.iterations() * b.cloud.size());
}
BENCHMARK(BM_ProjectCloud)->Unit(benchmark::kMillisecond);

static void BM_AccumulateFeatures(benchmark::State& state) {
    const SceneBundle& b = scene_small().bundle;
    for (auto _ : state)
        benchmark::DoNotOptimize(accumulate_features(b.cloud, b.frames, b.features, 0.05));
}
BENCHMARK(BM_AccumulateFeatures)->Unit(benchmark::kMillisecond);

static void BM_BfsGroup(benchmark::State& state) {
    const SceneBundle& b = scene_100k().bundle;
    const PointFeatures feats = accumulate_features(b.cloud, b.frames, b.features, 0.05);
    const ScoreMatrix scores = compute_scores(feats, b.labels, true);
    const SemanticLabeling sem = classify_points(scores);
    for (auto _ : state)
        benchmark::DoNotOptimize(bfs_group(b.cloud, sem, 0.04, 50, {}));
    state.SetItemsProcessed(state.iterations() * b.cloud.size());
}
BENCHMARK(BM_BfsGroup)->Unit(benchmark::kMillisecond);

static void BM_Oversegment(benchmark::State& state) {
    const SceneBundle& b = scene_small().bundle;
    for (auto _ : state)
        benchmark::DoNotOptimize(oversegment(b.cloud, 0.04, 30.0, 16));
    state.SetItemsProcessed(state.iterations() * b.cloud.size());
}
BENCHMARK(BM_Oversegment)->Unit(benchmark::kMillisecond);

static void BM_VoteFineMasks(benchmark::State& state) {
    const SceneBundle& b = scene_100k().bundle;
    for (auto _ : state)
        benchmark::DoNotOptimize(vote_fine_masks(b.cloud, b.frames, b.prompt_masks, 0.05));
}
BENCHMARK(BM_VoteFineMasks)->Unit(benchmark::kMillisecond);

static void BM_FullPipeline100k(benchmark::State& state) {
    const SceneBundle& b = scene_100k().bundle;
    PipelineConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(b, config));
    state.SetItemsProcessed(state.iterations() * b.cloud.size());
}
BENCHMARK(BM_FullPipeline100k)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
