#include "vennabers/ivap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

#include "vennabers/error.hpp"

namespace vennabers {

IvapRule::IvapRule(WeightedScorePoints points, FVectors f) : points_(std::move(points)), f_(std::move(f)) {
    for (std::size_t j = 0; j < points_.size(); ++j) {
        const auto ones = static_cast<std::int64_t>(
            std::llround(points_.mean_labels[j] * static_cast<double>(points_.weights[j])));
        count_ones_ += ones;
        count_zeros_ += points_.weights[j] - ones;
    }
    build_tree();
}

IvapRule IvapRule::build(std::span<const double> calib_scores, std::span<const int> calib_labels) {
    return from_points(dedup_weighted(calib_scores, calib_labels));
}

IvapRule IvapRule::from_points(WeightedScorePoints points) {
    auto f = compute_f_vectors(points);
    return IvapRule(std::move(points), std::move(f));
}

IvapRule IvapRule::from_parts(WeightedScorePoints points, FVectors f) {
    points.validate();
    if (f.f0.size() != points.size() || f.f1.size() != points.size())
        throw DataError("F0/F1 length does not match the number of distinct scores");
    return IvapRule(std::move(points), std::move(f));
}

void IvapRule::build_tree() {
    const std::size_t k = points_.size();
    if (k >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw DataError("calibration set too large for the search tree");

    // Leaf a (a = 0..k) covers (s'_a, s'_{a+1}); 1-based F with F0_0 = 0, F1_{k+1} = 1.
    leaves_.resize(k + 1);
    for (std::size_t a = 0; a <= k; ++a) {
        const double lower = a == 0 ? 0.0 : f_.f0[a - 1];
        const double upper = a == k ? 1.0 : f_.f1[a];
        leaves_[a] = {lower, upper};
    }

    // Breadth-first expansion of BST(1, k): the node for keys a..b is keyed at
    // c = floor((a + b) / 2); an empty side becomes the leaf next to s'_c.
    struct Pending {
        std::int64_t a, b;
        std::size_t slot;
    };
    nodes_.clear();
    nodes_.reserve(k);
    nodes_.push_back({});
    std::deque<Pending> queue{{1, static_cast<std::int64_t>(k), 0}};
    while (!queue.empty()) {
        const auto [a, b, slot] = queue.front();
        queue.pop_front();
        const std::int64_t c = (a + b) / 2;
        Node node{points_.scores[c - 1], {f_.f0[c - 1], f_.f1[c - 1]}, 0, 0};
        if (a <= c - 1) {
            node.left = static_cast<std::int32_t>(nodes_.size());
            nodes_.push_back({});
            queue.push_back({a, c - 1, static_cast<std::size_t>(node.left)});
        } else {
            node.left = static_cast<std::int32_t>(-(c - 1) - 1);
        }
        if (c + 1 <= b) {
            node.right = static_cast<std::int32_t>(nodes_.size());
            nodes_.push_back({});
            queue.push_back({c + 1, b, static_cast<std::size_t>(node.right)});
        } else {
            node.right = static_cast<std::int32_t>(-c - 1);
        }
        nodes_[slot] = node;
    }
}

std::size_t IvapRule::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 1}};
    while (!stack.empty()) {
        const auto [index, level] = stack.back();
        stack.pop_back();
        if (index < 0) {
            deepest = std::max(deepest, level);
            continue;
        }
        stack.push_back({nodes_[index].left, level + 1});
        stack.push_back({nodes_[index].right, level + 1});
    }
    return deepest;
}

ProbInterval IvapRule::predict_interval(double score) const {
    if (!std::isfinite(score)) throw DataError("test score must be finite");
    std::int32_t index = 0;
    while (index >= 0) {
        const Node& node = nodes_[index];
        if (score < node.key)
            index = node.left;
        else if (score > node.key)
            index = node.right;
        else
            return node.payload;
    }
    return leaves_[static_cast<std::size_t>(-index - 1)];
}

double IvapRule::predict_point(double score, MergeLoss loss) const {
    const auto interval = predict_interval(score);
    return loss == MergeLoss::log ? merge_log(interval) : merge_brier(interval);
}

IvapRule build_ivap(std::span<const double> calib_scores, std::span<const int> calib_labels) {
    return IvapRule::build(calib_scores, calib_labels);
}

ProbInterval predict_interval(const IvapRule& rule, double score) { return rule.predict_interval(score); }

double predict_point(const IvapRule& rule, double score, MergeLoss loss) { return rule.predict_point(score, loss); }

}  // namespace vennabers
