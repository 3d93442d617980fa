#pragma once

#include <span>
#include <vector>

#include "dualgroup/types.hpp"

namespace dualgroup {

// Intersection cardinalities between a coarse and a fine mask set.
struct OverlapMatrix {
    std::int32_t coarse_count = 0;
    std::int32_t fine_count = 0;
    std::vector<std::int64_t> counts;  // Q x W row-major

    std::int64_t at(std::int32_t q, std::int32_t w) const {
        return counts[static_cast<size_t>(q) * fine_count + w];
    }
};

OverlapMatrix overlap_matrix(std::span<const PointMask> coarse,
                             std::span<const PointMask> fine);

// Keep-or-split per coarse mask: with ratio = max overlap / total overlap,
// a coarse mask whose ratio exceeds `theta` is kept whole, otherwise it is
// replaced by its non-empty intersections with every fine mask. Coarse masks
// with zero total overlap are kept whole. Output order: coarse index
// ascending, then fine index ascending for the split pieces.
std::vector<PointMask> granularity_aware_assign(std::span<const PointMask> coarse,
                                                std::span<const PointMask> fine,
                                                double theta);

// Merges every instance smaller than min_points into its nearest neighboring
// instance of at least min_points, where "nearest" counts, over the small
// instance's points, how many of their knn_k nearest foreign neighbors land
// in each candidate. Sizes and memberships are frozen at entry (single pass),
// so the outcome is independent of processing order. Unmatched small
// instances and unassigned points are left as they are.
InstanceLabeling merge_small_instances(const SceneCloud& cloud,
                                       std::span<const PointMask> masks, int min_points,
                                       int knn_k);

// Per class, keeps the ceil(alpha% * n_k) points with the highest score for
// their own class (n_k = points argmax-classified as k) and ignores the rest.
// Ties at the cutoff break toward the lower point index.
SemanticLabeling semantic_select(const ScoreMatrix& scores, const SemanticLabeling& semantics,
                                 double alpha_percent);

// Spreads the modal selected class across each superpoint; superpoints with
// no selected member become all-ignore. Class ties break toward the lower id.
SemanticLabeling superpoint_propagate(const SemanticLabeling& selected,
                                      const SuperpointPartition& sp);

struct InstanceClass {
    std::int32_t instance_id = 0;
    std::int32_t class_id = SemanticLabeling::kIgnore;
};

// Modal non-ignore semantic class over each instance's points; ties toward
// the lower class id, all-ignore instances map to kIgnore. Sorted by
// instance id.
std::vector<InstanceClass> assign_instance_classes(const InstanceLabeling& instances,
                                                   const SemanticLabeling& semantics);

}  // namespace dualgroup
