#pragma once

#include <array>
#include <span>
#include <vector>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Per-point regression target: vector from the point to its instance center.
struct OffsetField {
    std::vector<std::array<float, 3>> data;
};

// Offsets for assigned points (instance centroid minus point position);
// unassigned points get the zero vector and are excluded by loss masks.
OffsetField offset_targets(const SceneCloud& cloud, const InstanceLabeling& instances);

// Scalar losses report how often numerical clamping fired alongside the value.
struct LossValue {
    double value = 0.0;
    int warnings = 0;
};

// Mean cross-entropy of predicted class probabilities (N x K, rows summing to
// one within 1e-5) against non-ignore labels. Zero probability at the target
// clamps to 1e-12 and counts a warning.
LossValue loss_sem(std::span<const double> probabilities, int class_count,
                   const SemanticLabeling& labels);

// Mean L1 distance between predicted and target offsets over masked points.
double loss_off(const OffsetField& predicted, const OffsetField& target,
                std::span<const std::uint8_t> mask);

// Negative mean cosine between row-normalized predicted and target offsets
// over masked points; zero-norm rows contribute 0 and count a warning.
LossValue loss_dir(const OffsetField& predicted, const OffsetField& target,
                   std::span<const std::uint8_t> mask);

// Soft proposal-quality target: 0 below iou_low, 1 above iou_high, linear
// ramp in between.
double score_target(double iou, double iou_low = 0.25, double iou_high = 0.75);

// Mean binary cross-entropy between predicted and target proposal scores.
LossValue loss_sc(std::span<const double> predicted, std::span<const double> target);

// Binary cross-entropy and Dice losses over a proposal's per-point mask
// probabilities against 0/1 targets (1e-6 Dice smoothing).
LossValue loss_bce(std::span<const double> probabilities, std::span<const std::uint8_t> target);
double loss_dice(std::span<const double> probabilities, std::span<const std::uint8_t> target);

struct MaskFilterResult {
    std::vector<std::uint8_t> keep;          // probability >= 0.5
    std::vector<std::int32_t> kept_indices;
};

// Binary thresholding of per-point proposal probabilities at 0.5 (boundary
// value kept).
MaskFilterResult instance_mask_filter(std::span<const double> probabilities);

}  // namespace dualgroup
