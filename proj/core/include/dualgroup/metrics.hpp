#pragma once

#include <span>
#include <string>
#include <vector>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Per-point ground truth; -1 marks untracked instances / ignored classes.
struct GroundTruth {
    std::vector<std::int32_t> instance_ids;
    std::vector<std::int32_t> classes;
};

std::vector<std::string> validate(const GroundTruth& gt, std::int32_t n_points);

struct InstancePrediction {
    PointMask mask;
    std::int32_t class_id = 0;
    float confidence = 1.f;
};

struct GtInstance {
    std::int32_t instance_id = 0;
    std::int32_t class_id = 0;
    PointMask mask;
};

// Groups tracked points into per-instance masks; instances whose class is
// ignore are dropped. Sorted by instance id.
std::vector<GtInstance> ground_truth_instances(const GroundTruth& gt);

struct MiouReport {
    std::vector<double> per_class_iou;   // K entries; meaningful where present
    std::vector<std::uint8_t> present;   // class occurs in gt or prediction
    double mean = 0.0;
};

// IoU per class over points with non-ignore ground truth. A predicted ignore
// counts against its ground-truth class (a false negative); classes absent
// from both sides are excluded from the mean.
MiouReport miou(const SemanticLabeling& predicted, std::span<const std::int32_t> gt_classes,
                int class_count);

struct ApReport {
    double ap = 0.0;    // mean over IoU thresholds 0.50:0.05:0.95
    double ap50 = 0.0;
    double ap25 = 0.0;
    std::vector<std::int32_t> class_ids;   // classes present in gt
    std::vector<double> per_class_ap;      // aligned with class_ids, sweep mean
};

// Mean average precision over classes present in the ground truth, with
// greedy confidence-ordered matching and all-point (precision envelope)
// integration of each class's PR curve.
ApReport instance_ap(std::span<const InstancePrediction> predictions, const GroundTruth& gt);

// Mean AP at a single IoU threshold (same matching and integration rules).
double average_precision_at(std::span<const InstancePrediction> predictions,
                            const GroundTruth& gt, double iou_threshold);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

// Class-mean precision and recall with greedy matching at `iou_threshold`
// (0.5 by convention). A class present in gt but never predicted contributes
// zero precision.
PrecisionRecall mprec_mrec(std::span<const InstancePrediction> predictions,
                           const GroundTruth& gt, double iou_threshold = 0.5);

// IoU between two sorted index masks.
double mask_iou(const PointMask& a, const PointMask& b);

// Wraps pseudo labels as scored predictions (confidence 1.0) for evaluation.
std::vector<InstancePrediction> predictions_from_labeling(
    const InstanceLabeling& instances, const SemanticLabeling& semantics);

}  // namespace dualgroup
