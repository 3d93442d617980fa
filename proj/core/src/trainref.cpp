#include "dualgroup/trainref.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dualgroup/error.hpp"

namespace dualgroup {

namespace {

constexpr double kProbFloor = 1e-12;

}  // namespace

OffsetField offset_targets(const SceneCloud& cloud, const InstanceLabeling& instances) {
    std::map<std::int32_t, Vec3> sums;
    std::map<std::int32_t, std::int64_t> counts;
    for (std::int32_t n = 0; n < cloud.size(); ++n) {
        const std::int32_t id = instances.ids[static_cast<size_t>(n)];
        if (id < 0) continue;
        sums[id] = sums[id] + cloud.position(n);
        ++counts[id];
    }

    OffsetField out;
    out.data.assign(instances.ids.size(), {0.f, 0.f, 0.f});
    for (std::int32_t n = 0; n < cloud.size(); ++n) {
        const std::int32_t id = instances.ids[static_cast<size_t>(n)];
        if (id < 0) continue;
        const Vec3 center = sums[id] / static_cast<double>(counts[id]);
        const Vec3 offset = center - cloud.position(n);
        out.data[static_cast<size_t>(n)] = {static_cast<float>(offset.x),
                                            static_cast<float>(offset.y),
                                            static_cast<float>(offset.z)};
    }
    return out;
}

LossValue loss_sem(std::span<const double> probabilities, int class_count,
                   const SemanticLabeling& labels) {
    const size_t n_points = labels.classes.size();
    if (probabilities.size() != n_points * static_cast<size_t>(class_count))
        throw ValidationError("loss_sem: probability matrix does not match N x K");

    for (size_t n = 0; n < n_points; ++n) {
        double row = 0.0;
        for (int k = 0; k < class_count; ++k)
            row += probabilities[n * static_cast<size_t>(class_count) + k];
        if (std::abs(row - 1.0) > 1e-5)
            throw ValidationError("loss_sem: probability row " + std::to_string(n) +
                                  " does not sum to 1");
    }

    LossValue out;
    double sum = 0.0;
    std::int64_t supervised = 0;
    for (size_t n = 0; n < n_points; ++n) {
        const std::int32_t target = labels.classes[n];
        if (target < 0) continue;
        double p = probabilities[n * static_cast<size_t>(class_count) + target];
        if (p < kProbFloor) {
            p = kProbFloor;
            ++out.warnings;
        }
        sum += -std::log(p);
        ++supervised;
    }
    out.value = supervised > 0 ? sum / static_cast<double>(supervised) : 0.0;
    return out;
}

double loss_off(const OffsetField& predicted, const OffsetField& target,
                std::span<const std::uint8_t> mask) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (size_t n = 0; n < mask.size(); ++n) {
        if (!mask[n]) continue;
        const auto& p = predicted.data[n];
        const auto& t = target.data[n];
        sum += std::abs(static_cast<double>(p[0]) - t[0]) +
               std::abs(static_cast<double>(p[1]) - t[1]) +
               std::abs(static_cast<double>(p[2]) - t[2]);
        ++count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

LossValue loss_dir(const OffsetField& predicted, const OffsetField& target,
                   std::span<const std::uint8_t> mask) {
    LossValue out;
    double sum = 0.0;
    std::int64_t count = 0;
    for (size_t n = 0; n < mask.size(); ++n) {
        if (!mask[n]) continue;
        ++count;
        const Vec3 p{predicted.data[n][0], predicted.data[n][1], predicted.data[n][2]};
        const Vec3 t{target.data[n][0], target.data[n][1], target.data[n][2]};
        const double np = norm(p), nt = norm(t);
        if (np == 0.0 || nt == 0.0) {
            ++out.warnings;  // contributes 0
            continue;
        }
        sum += dot(p, t) / (np * nt);
    }
    out.value = count > 0 ? -sum / static_cast<double>(count) : 0.0;
    return out;
}

double score_target(double iou, double iou_low, double iou_high) {
    if (iou < iou_low) return 0.0;
    if (iou > iou_high) return 1.0;
    return (iou - iou_low) / (iou_high - iou_low);
}

LossValue loss_sc(std::span<const double> predicted, std::span<const double> target) {
    if (predicted.size() != target.size())
        throw ValidationError("loss_sc: prediction/target size mismatch");
    LossValue out;
    if (predicted.empty()) return out;

    double sum = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        double p = predicted[i];
        if (p < kProbFloor || p > 1.0 - kProbFloor) {
            p = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
            ++out.warnings;
        }
        const double t = target[i];
        sum += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    out.value = sum / static_cast<double>(predicted.size());
    return out;
}

LossValue loss_bce(std::span<const double> probabilities, std::span<const std::uint8_t> target) {
    if (probabilities.size() != target.size())
        throw ValidationError("loss_bce: probability/target size mismatch");
    LossValue out;
    if (probabilities.empty()) return out;

    double sum = 0.0;
    for (size_t i = 0; i < probabilities.size(); ++i) {
        double p = probabilities[i];
        if (p < kProbFloor || p > 1.0 - kProbFloor) {
            p = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
            ++out.warnings;
        }
        sum += target[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    out.value = sum / static_cast<double>(probabilities.size());
    return out;
}

double loss_dice(std::span<const double> probabilities, std::span<const std::uint8_t> target) {
    if (probabilities.size() != target.size())
        throw ValidationError("loss_dice: probability/target size mismatch");
    constexpr double kSmooth = 1e-6;
    double inter = 0.0, pred_sum = 0.0, target_sum = 0.0;
    for (size_t i = 0; i < probabilities.size(); ++i) {
        inter += static_cast<double>(probabilities[i]) * target[i];
        pred_sum += probabilities[i];
        target_sum += target[i];
    }
    return 1.0 - (2.0 * inter + kSmooth) / (pred_sum + target_sum + kSmooth);
}

MaskFilterResult instance_mask_filter(std::span<const double> probabilities) {
    MaskFilterResult out;
    out.keep.resize(probabilities.size());
    for (size_t i = 0; i < probabilities.size(); ++i) {
        out.keep[i] = probabilities[i] >= 0.5 ? 1 : 0;
        if (out.keep[i]) out.kept_indices.push_back(static_cast<std::int32_t>(i));
    }
    return out;
}

}  // namespace dualgroup
