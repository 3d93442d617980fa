#include "dualgroup/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dualgroup/error.hpp"
#include "dualgroup/refine.hpp"

namespace dualgroup {

std::vector<std::string> validate(const GroundTruth& gt, std::int32_t n_points) {
    std::vector<std::string> out;
    if (gt.instance_ids.size() != static_cast<size_t>(n_points) ||
        gt.classes.size() != static_cast<size_t>(n_points)) {
        out.push_back("ground truth: array lengths do not match the point count");
        return out;
    }
    std::map<std::int32_t, std::int32_t> class_of;
    for (size_t n = 0; n < gt.instance_ids.size(); ++n) {
        const std::int32_t id = gt.instance_ids[n];
        if (id < 0) continue;
        const auto [it, inserted] = class_of.emplace(id, gt.classes[n]);
        if (!inserted && it->second != gt.classes[n]) {
            out.push_back("ground truth: instance " + std::to_string(id) +
                          " spans multiple classes");
            break;
        }
    }
    return out;
}

std::vector<GtInstance> ground_truth_instances(const GroundTruth& gt) {
    std::map<std::int32_t, GtInstance> by_id;
    for (size_t n = 0; n < gt.instance_ids.size(); ++n) {
        const std::int32_t id = gt.instance_ids[n];
        if (id < 0) continue;
        GtInstance& inst = by_id[id];
        inst.instance_id = id;
        inst.class_id = gt.classes[n];
        inst.mask.indices.push_back(static_cast<std::int32_t>(n));
    }
    std::vector<GtInstance> out;
    for (auto& [id, inst] : by_id)
        if (inst.class_id >= 0) out.push_back(std::move(inst));
    return out;
}

MiouReport miou(const SemanticLabeling& predicted, std::span<const std::int32_t> gt_classes,
                int class_count) {
    std::vector<std::int64_t> tp(static_cast<size_t>(class_count), 0);
    std::vector<std::int64_t> fp(static_cast<size_t>(class_count), 0);
    std::vector<std::int64_t> fn(static_cast<size_t>(class_count), 0);

    for (size_t n = 0; n < gt_classes.size(); ++n) {
        const std::int32_t truth = gt_classes[n];
        if (truth < 0) continue;  // ignored ground truth is excluded entirely
        const std::int32_t pred = predicted.classes[n];
        if (pred == truth) {
            ++tp[static_cast<size_t>(truth)];
        } else {
            ++fn[static_cast<size_t>(truth)];
            if (pred >= 0 && pred < class_count) ++fp[static_cast<size_t>(pred)];
        }
    }

    MiouReport report;
    report.per_class_iou.assign(static_cast<size_t>(class_count), 0.0);
    report.present.assign(static_cast<size_t>(class_count), 0);

    double sum = 0.0;
    int present_count = 0;
    for (int k = 0; k < class_count; ++k) {
        const std::int64_t denom = tp[static_cast<size_t>(k)] + fp[static_cast<size_t>(k)] +
                                   fn[static_cast<size_t>(k)];
        if (denom == 0) continue;  // absent from both prediction and gt
        report.present[static_cast<size_t>(k)] = 1;
        report.per_class_iou[static_cast<size_t>(k)] =
            static_cast<double>(tp[static_cast<size_t>(k)]) / static_cast<double>(denom);
        sum += report.per_class_iou[static_cast<size_t>(k)];
        ++present_count;
    }
    report.mean = present_count > 0 ? sum / present_count : 0.0;
    return report;
}

double mask_iou(const PointMask& a, const PointMask& b) {
    size_t i = 0, j = 0, inter = 0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] < b.indices[j]) ++i;
        else if (a.indices[i] > b.indices[j]) ++j;
        else { ++inter; ++i; ++j; }
    }
    const size_t uni = a.indices.size() + b.indices.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// Predictions of one class, confidence-ordered, with IoUs against that
// class's gt instances cached so every threshold reuses them.
struct ClassBundle {
    std::vector<const InstancePrediction*> preds;  // sorted by matching order
    std::vector<const GtInstance*> gts;
    std::vector<std::vector<double>> iou;  // preds x gts
};

bool match_order(const InstancePrediction* a, const InstancePrediction* b) {
    if (a->confidence != b->confidence) return a->confidence > b->confidence;
    if (a->mask.size() != b->mask.size()) return a->mask.size() > b->mask.size();
    const std::int32_t am = a->mask.indices.empty() ? -1 : a->mask.indices.front();
    const std::int32_t bm = b->mask.indices.empty() ? -1 : b->mask.indices.front();
    return am < bm;
}

std::map<std::int32_t, ClassBundle> bundle_by_class(
    std::span<const InstancePrediction> predictions, const std::vector<GtInstance>& gts) {
    std::map<std::int32_t, ClassBundle> bundles;
    for (const GtInstance& g : gts) bundles[g.class_id].gts.push_back(&g);
    for (const InstancePrediction& p : predictions) {
        const auto it = bundles.find(p.class_id);
        if (it != bundles.end()) it->second.preds.push_back(&p);
    }
    for (auto& [cls, b] : bundles) {
        std::sort(b.preds.begin(), b.preds.end(), match_order);
        b.iou.assign(b.preds.size(), std::vector<double>(b.gts.size(), 0.0));
        for (size_t i = 0; i < b.preds.size(); ++i)
            for (size_t j = 0; j < b.gts.size(); ++j)
                b.iou[i][j] = mask_iou(b.preds[i]->mask, b.gts[j]->mask);
    }
    return bundles;
}

// Greedy confidence-ordered matching; returns per-prediction TP flags.
std::vector<std::uint8_t> greedy_match(const ClassBundle& b, double threshold) {
    std::vector<std::uint8_t> is_tp(b.preds.size(), 0);
    std::vector<std::uint8_t> taken(b.gts.size(), 0);
    for (size_t i = 0; i < b.preds.size(); ++i) {
        double best = 0.0;
        size_t best_j = b.gts.size();
        for (size_t j = 0; j < b.gts.size(); ++j) {
            if (taken[j]) continue;
            if (b.iou[i][j] > best) {  // strict: IoU ties keep the lower gt id
                best = b.iou[i][j];
                best_j = j;
            }
        }
        if (best_j < b.gts.size() && best >= threshold) {
            taken[best_j] = 1;
            is_tp[i] = 1;
        }
    }
    return is_tp;
}

// All-point interpolated area under the PR curve (precision envelope).
double pr_area(const std::vector<std::uint8_t>& is_tp, size_t gt_count) {
    if (gt_count == 0) return 0.0;
    const size_t n = is_tp.size();
    std::vector<double> precision(n), recall(n);
    size_t tp = 0;
    for (size_t i = 0; i < n; ++i) {
        tp += is_tp[i];
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / static_cast<double>(gt_count);
    }
    // envelope: precision at each point becomes the max to its right
    for (size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
    double area = 0.0, prev_recall = 0.0;
    for (size_t i = 0; i < n; ++i) {
        area += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return area;
}

}  // namespace

double average_precision_at(std::span<const InstancePrediction> predictions,
                            const GroundTruth& gt, double iou_threshold) {
    const std::vector<GtInstance> gts = ground_truth_instances(gt);
    const auto bundles = bundle_by_class(predictions, gts);
    if (bundles.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [cls, b] : bundles)
        sum += pr_area(greedy_match(b, iou_threshold), b.gts.size());
    return sum / static_cast<double>(bundles.size());
}

ApReport instance_ap(std::span<const InstancePrediction> predictions, const GroundTruth& gt) {
    const std::vector<GtInstance> gts = ground_truth_instances(gt);
    const auto bundles = bundle_by_class(predictions, gts);

    ApReport report;
    if (bundles.empty()) return report;

    std::vector<double> sweep;
    for (int i = 0; i < 10; ++i) sweep.push_back(0.50 + 0.05 * i);

    for (const auto& [cls, b] : bundles) {
        double class_sum = 0.0;
        for (const double t : sweep) class_sum += pr_area(greedy_match(b, t), b.gts.size());
        report.class_ids.push_back(cls);
        report.per_class_ap.push_back(class_sum / static_cast<double>(sweep.size()));
        report.ap50 += pr_area(greedy_match(b, 0.50), b.gts.size());
        report.ap25 += pr_area(greedy_match(b, 0.25), b.gts.size());
    }
    const double n_classes = static_cast<double>(bundles.size());
    report.ap = std::accumulate(report.per_class_ap.begin(), report.per_class_ap.end(), 0.0) /
                n_classes;
    report.ap50 /= n_classes;
    report.ap25 /= n_classes;
    return report;
}

PrecisionRecall mprec_mrec(std::span<const InstancePrediction> predictions,
                           const GroundTruth& gt, double iou_threshold) {
    const std::vector<GtInstance> gts = ground_truth_instances(gt);
    const auto bundles = bundle_by_class(predictions, gts);
    if (bundles.empty()) return {};

    PrecisionRecall out;
    for (const auto& [cls, b] : bundles) {
        const std::vector<std::uint8_t> is_tp = greedy_match(b, iou_threshold);
        const auto matched =
            static_cast<double>(std::count(is_tp.begin(), is_tp.end(), std::uint8_t{1}));
        out.precision += b.preds.empty() ? 0.0 : matched / static_cast<double>(b.preds.size());
        out.recall += matched / static_cast<double>(b.gts.size());
    }
    out.precision /= static_cast<double>(bundles.size());
    out.recall /= static_cast<double>(bundles.size());
    return out;
}

std::vector<InstancePrediction> predictions_from_labeling(
    const InstanceLabeling& instances, const SemanticLabeling& semantics) {
    std::map<std::int32_t, PointMask> masks;
    for (size_t n = 0; n < instances.ids.size(); ++n)
        if (instances.ids[n] >= 0)
            masks[instances.ids[n]].indices.push_back(static_cast<std::int32_t>(n));

    const std::vector<InstanceClass> classes = assign_instance_classes(instances, semantics);
    std::map<std::int32_t, std::int32_t> class_of;
    for (const InstanceClass& ic : classes) class_of[ic.instance_id] = ic.class_id;

    std::vector<InstancePrediction> out;
    for (auto& [id, mask] : masks) {
        const std::int32_t cls = class_of.count(id) ? class_of[id] : SemanticLabeling::kIgnore;
        if (cls < 0) continue;  // unlabeled pseudo instances cannot be scored
        out.push_back({std::move(mask), cls, 1.f});
    }
    return out;
}

}  // namespace dualgroup
