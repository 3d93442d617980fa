#include <doctest.h>

#include <algorithm>

#include "dualgroup/metrics.hpp"
#include "oracles.hpp"

using namespace dualgroup;

namespace {

InstancePrediction pred(std::vector<std::int32_t> mask, std::int32_t cls, float conf) {
    return {PointMask{std::move(mask)}, cls, conf};
}

std::vector<std::int32_t> range_vec(std::int32_t lo, std::int32_t hi) {
    std::vector<std::int32_t> out;
    for (std::int32_t i = lo; i < hi; ++i) out.push_back(i);
    return out;
}

// random labeled scene: n points, up to `instances` gt instances over k classes
GroundTruth random_gt(oracles::Rng& rng, int n, int instances, int k) {
    GroundTruth gt;
    std::vector<std::int32_t> inst_class;
    for (int i = 0; i < instances; ++i) inst_class.push_back(rng.uniform_int(0, k - 1));
    for (int p = 0; p < n; ++p) {
        const int id = rng.uniform_int(-1, instances - 1);
        gt.instance_ids.push_back(id);
        gt.classes.push_back(id >= 0 ? inst_class[static_cast<size_t>(id)]
                                     : rng.uniform_int(-1, k - 1));
    }
    return gt;
}

std::vector<InstancePrediction> random_preds(oracles::Rng& rng, int n, int count, int k) {
    std::vector<InstancePrediction> out;
    for (int i = 0; i < count; ++i) {
        std::set<std::int32_t> s;
        const int size = rng.uniform_int(1, n / 2);
        for (int j = 0; j < size; ++j) s.insert(rng.uniform_int(0, n - 1));
        out.push_back(pred({s.begin(), s.end()}, rng.uniform_int(0, k - 1),
                           static_cast<float>(rng.uniform(0.01, 1.0))));
    }
    return out;
}

}  // namespace

TEST_CASE("miou: perfect and class-disjoint predictions") {
    SemanticLabeling sem;
    sem.classes = {0, 0, 1, 1};
    const std::vector<std::int32_t> gt = {0, 0, 1, 1};
    CHECK(miou(sem, gt, 2).mean == 1.0);

    SemanticLabeling wrong;
    wrong.classes = {1, 1, 0, 0};
    CHECK(miou(wrong, gt, 2).mean == 0.0);
}

TEST_CASE("miou: half of class 0 flipped to class 1, hand-counted confusion") {
    // gt: class 0 x4, class 1 x2; flip two of class 0 -> both IoUs are 1/2
    SemanticLabeling sem;
    sem.classes = {0, 0, 1, 1, 1, 1};
    const std::vector<std::int32_t> gt = {0, 0, 0, 0, 1, 1};
    const MiouReport r = miou(sem, gt, 2);
    CHECK(r.per_class_iou[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.per_class_iou[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.mean == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("miou: predicted ignore counts against the ground-truth class") {
    SemanticLabeling sem;
    sem.classes = {0, SemanticLabeling::kIgnore};
    const std::vector<std::int32_t> gt = {0, 0};
    const MiouReport r = miou(sem, gt, 1);
    CHECK(r.per_class_iou[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("miou: ignored ground truth is excluded, absent classes skip the mean") {
    SemanticLabeling sem;
    sem.classes = {0, 0, 2};
    const std::vector<std::int32_t> gt = {0, -1, 2};
    const MiouReport r = miou(sem, gt, 4);
    CHECK(r.present[0] == 1);
    CHECK(r.present[1] == 0);
    CHECK(r.present[3] == 0);
    CHECK(r.mean == 1.0);  // classes 0 and 2, both perfect (ignored gt excluded)
}

TEST_CASE("miou equals the naive confusion-matrix oracle on random labelings") {
    oracles::Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(5, 200), k = rng.uniform_int(1, 6);
        SemanticLabeling sem;
        std::vector<std::int32_t> gt;
        for (int i = 0; i < n; ++i) {
            sem.classes.push_back(rng.uniform_int(-1, k - 1));
            gt.push_back(rng.uniform_int(-1, k - 1));
        }
        const MiouReport r = miou(sem, gt, k);
        CHECK(r.mean == doctest::Approx(oracles::miou_naive(sem, gt, k)).epsilon(1e-12));
    }
}

TEST_CASE("instance_ap: exact predictions score 1.0 everywhere") {
    GroundTruth gt;
    gt.instance_ids = {0, 0, 0, 1, 1, 1, 2, 2};
    gt.classes = {0, 0, 0, 0, 0, 0, 1, 1};
    const std::vector<InstancePrediction> preds = {
        pred({0, 1, 2}, 0, 1.f), pred({3, 4, 5}, 0, 1.f), pred({6, 7}, 1, 1.f)};
    const ApReport r = instance_ap(preds, gt);
    CHECK(r.ap == 1.0);
    CHECK(r.ap50 == 1.0);
    CHECK(r.ap25 == 1.0);
}

TEST_CASE("instance_ap: no predictions against non-empty gt is 0") {
    GroundTruth gt;
    gt.instance_ids = {0, 0};
    gt.classes = {0, 0};
    const ApReport r = instance_ap({}, gt);
    CHECK(r.ap == 0.0);
    CHECK(r.ap50 == 0.0);
}

TEST_CASE("instance_ap: five-prediction hand fixture (precision envelope)") {
    // one class, two gt instances of 10 points each
    GroundTruth gt;
    gt.instance_ids.assign(20, -1);
    gt.classes.assign(20, 0);
    for (int i = 0; i < 10; ++i) gt.instance_ids[static_cast<size_t>(i)] = 0;
    for (int i = 10; i < 20; ++i) gt.instance_ids[static_cast<size_t>(i)] = 1;

    // conf .9 hits G1, conf .8 half-covers G1 (already matched -> FP),
    // conf .7 hits G2: PR = (.5,1), (.5,.5), (1,2/3); area = .5*1 + .5*(2/3)
    const std::vector<InstancePrediction> preds = {
        pred(range_vec(0, 10), 0, 0.9f),
        pred(range_vec(0, 5), 0, 0.8f),
        pred(range_vec(10, 20), 0, 0.7f),
    };
    const double ap50 = average_precision_at(preds, gt, 0.5);
    CHECK(ap50 == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("instance_ap: confidence ties order by mask size descending") {
    GroundTruth gt;
    gt.instance_ids.assign(20, -1);
    gt.classes.assign(20, 0);
    for (int i = 0; i < 10; ++i) gt.instance_ids[static_cast<size_t>(i)] = 0;
    for (int i = 10; i < 20; ++i) gt.instance_ids[static_cast<size_t>(i)] = 1;

    // same confidence: the full mask (size 10) must match first; the small
    // straddling mask then fails against G2 only
    const std::vector<InstancePrediction> preds = {
        pred({0, 1, 2, 3, 4, 10, 11, 12}, 0, 0.5f),  // IoU G1 = 5/13, G2 = 3/15
        pred(range_vec(0, 10), 0, 0.5f),
    };
    const double ap50 = average_precision_at(preds, gt, 0.5);
    CHECK(ap50 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("instance_ap: one-class five-prediction PR-AUC fixture") {
    // three gt instances of 10 points each
    GroundTruth gt;
    gt.instance_ids.assign(30, -1);
    gt.classes.assign(30, 0);
    for (int i = 0; i < 30; ++i) gt.instance_ids[static_cast<size_t>(i)] = i / 10;

    // flags in confidence order: TP FP TP TP FP ->
    // PR (1/3,1) (1/3,1/2) (2/3,2/3) (1,3/4) (1,3/5); envelope area = 5/6
    const std::vector<InstancePrediction> preds = {
        pred(range_vec(0, 10), 0, 0.9f),
        pred({0, 1, 2, 3, 4, 10, 11, 12, 13, 14}, 0, 0.8f),
        pred(range_vec(10, 20), 0, 0.7f),
        pred(range_vec(20, 25), 0, 0.6f),
        pred(range_vec(25, 30), 0, 0.5f),
    };
    CHECK(average_precision_at(preds, gt, 0.5) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("instance_ap matches the brute-force matcher on random scenes") {
    oracles::Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = rng.uniform_int(10, 80), k = rng.uniform_int(1, 3);
        const GroundTruth gt = random_gt(rng, n, rng.uniform_int(1, 5), k);
        const auto preds = random_preds(rng, n, rng.uniform_int(0, 8), k);
        for (const double t : {0.25, 0.5, 0.75}) {
            const double got = average_precision_at(preds, gt, t);
            const double expected = oracles::instance_ap_naive(preds, gt, t);
            CHECK(got == doctest::Approx(expected).epsilon(1e-12));
            CHECK(got >= 0.0);
            CHECK(got <= 1.0);
        }
    }
}

TEST_CASE("instance_ap is invariant to prediction order with distinct confidences") {
    oracles::Rng rng(31);
    const GroundTruth gt = random_gt(rng, 60, 4, 2);
    auto preds = random_preds(rng, 60, 6, 2);
    for (size_t i = 0; i < preds.size(); ++i)
        preds[i].confidence = 0.1f + 0.1f * static_cast<float>(i);  // distinct

    const ApReport before = instance_ap(preds, gt);
    std::reverse(preds.begin(), preds.end());
    const ApReport after = instance_ap(preds, gt);
    CHECK(before.ap == after.ap);
    CHECK(before.ap50 == after.ap50);
    CHECK(before.ap25 == after.ap25);
}

TEST_CASE("adding a correct unmatched prediction never decreases AP") {
    oracles::Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 60;
        GroundTruth gt = random_gt(rng, n, 4, 2);
        auto preds = random_preds(rng, n, 4, 2);

        // find an unmatched gt instance and add its exact mask
        const auto gts = ground_truth_instances(gt);
        if (gts.empty()) continue;
        const GtInstance& target = gts[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int>(gts.size()) - 1))];

        const double before = average_precision_at(preds, gt, 0.5);
        auto augmented = preds;
        augmented.push_back({target.mask, target.class_id, 1.0f});
        const double after = average_precision_at(augmented, gt, 0.5);
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("mprec_mrec: perfect predictions and spurious extras") {
    GroundTruth gt;
    gt.instance_ids = {0, 0, 0, 1, 1, 1};
    gt.classes = {0, 0, 0, 1, 1, 1};
    std::vector<InstancePrediction> preds = {pred({0, 1, 2}, 0, 1.f),
                                             pred({3, 4, 5}, 1, 1.f)};
    PrecisionRecall pr = mprec_mrec(preds, gt);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);

    // one spurious extra prediction per class
    preds.push_back(pred({0}, 0, 0.5f));
    preds.push_back(pred({3}, 1, 0.5f));
    pr = mprec_mrec(preds, gt);
    CHECK(pr.precision == 0.5);
    CHECK(pr.recall == 1.0);
}

TEST_CASE("mprec_mrec matches the brute-force matcher on random scenes") {
    oracles::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(10, 60), k = rng.uniform_int(1, 3);
        const GroundTruth gt = random_gt(rng, n, rng.uniform_int(1, 4), k);
        const auto preds = random_preds(rng, n, rng.uniform_int(0, 6), k);
        const PrecisionRecall got = mprec_mrec(preds, gt);
        const auto [ep, er] = oracles::mprec_mrec_naive(preds, gt, 0.5);
        CHECK(got.precision == doctest::Approx(ep).epsilon(1e-12));
        CHECK(got.recall == doctest::Approx(er).epsilon(1e-12));
    }
}

TEST_CASE("mask_iou on sorted index masks") {
    const PointMask a{{0, 1, 2, 3}};
    const PointMask b{{2, 3, 4, 5}};
    CHECK(mask_iou(a, b) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(mask_iou(a, a) == 1.0);
}

TEST_CASE("ground truth validation flags multi-class instances") {
    GroundTruth gt;
    gt.instance_ids = {0, 0};
    gt.classes = {1, 2};
    CHECK_FALSE(validate(gt, 2).empty());
    gt.classes = {1, 1};
    CHECK(validate(gt, 2).empty());
}

TEST_CASE("predictions_from_labeling wraps labels with confidence 1") {
    InstanceLabeling inst;
    inst.ids = {0, 0, 1, -1};
    SemanticLabeling sem;
    sem.classes = {2, 2, 3, 0};
    const auto preds = predictions_from_labeling(inst, sem);
    REQUIRE(preds.size() == 2);
    CHECK(preds[0].mask.indices == std::vector<std::int32_t>{0, 1});
    CHECK(preds[0].class_id == 2);
    CHECK(preds[0].confidence == 1.f);
    CHECK(preds[1].class_id == 3);
}
