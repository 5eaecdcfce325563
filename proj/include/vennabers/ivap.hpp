#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vennabers/isotonic.hpp"
#include "vennabers/merging.hpp"

namespace vennabers {

/// Inductive Venn-Abers prediction rule.
///
/// Holds the deduplicated calibration points, their F0/F1 vectors and a
/// midpoint-balanced binary search tree over the distinct scores. The tree has
/// k' internal nodes keyed by s'_c with payload {F0_c, F1_c} and k'+1 leaves,
/// one per gap between keys; the leaf for (s'_a, s'_{a+1}) carries
/// {F0_a, F1_{a+1}} with F0_0 = 0 and F1_{k'+1} = 1.
///
/// Immutable after construction, so concurrent queries are safe.
class IvapRule {
public:
    static IvapRule build(std::span<const double> calib_scores, std::span<const int> calib_labels);
    static IvapRule from_points(WeightedScorePoints points);
    // Restores a rule from stored vectors without recomputing F0/F1.
    static IvapRule from_parts(WeightedScorePoints points, FVectors f);

    // Interval for a test score. Throws DataError for NaN or infinite scores.
    ProbInterval predict_interval(double score) const;
    double predict_point(double score, MergeLoss loss) const;

    const WeightedScorePoints& points() const { return points_; }
    const FVectors& f() const { return f_; }

    std::int64_t count_ones() const { return count_ones_; }
    std::int64_t count_zeros() const { return count_zeros_; }
    std::int64_t calibration_size() const { return count_ones_ + count_zeros_; }

    // Internal nodes plus leaves: always 2k'+1.
    std::size_t node_count() const { return nodes_.size() + leaves_.size(); }
    // Nodes on the longest root-to-leaf path, leaf included.
    std::size_t depth() const;
    // Key of the root node (s'_c with c the midpoint of 1..k').
    double root_key() const { return nodes_.front().key; }

    // Walks the leaves left to right; exposed for structural tests.
    const std::vector<ProbInterval>& leaves() const { return leaves_; }

private:
    struct Node {
        double key;
        ProbInterval payload;
        // >= 0: index into nodes_; < 0: leaf -(child + 1).
        std::int32_t left;
        std::int32_t right;
    };

    IvapRule(WeightedScorePoints points, FVectors f);
    void build_tree();

    WeightedScorePoints points_;
    FVectors f_;
    std::int64_t count_ones_ = 0;
    std::int64_t count_zeros_ = 0;
    std::vector<Node> nodes_;  // breadth-first order, root first
    std::vector<ProbInterval> leaves_;
};

IvapRule build_ivap(std::span<const double> calib_scores, std::span<const int> calib_labels);
ProbInterval predict_interval(const IvapRule& rule, double score);
// log: p1 / (1 - p0 + p1); brier: p1 + p0^2/2 - p1^2/2.
double predict_point(const IvapRule& rule, double score, MergeLoss loss);

}  // namespace vennabers
