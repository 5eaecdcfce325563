#include "vennabers/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vennabers/error.hpp"

namespace vennabers {

namespace {

// (b - a) x (c - b). Coordinates are integers held in doubles, so the result
// is exact while the magnitudes stay below 2^53.
double turn(const CsdPoint& a, const CsdPoint& b, const CsdPoint& c) {
    const double abx = static_cast<double>(b.x - a.x);
    const double bcx = static_cast<double>(c.x - b.x);
    return abx * (c.y - b.y) - (b.y - a.y) * bcx;
}

// (b - a) x (p - a): positive when p lies to the left of the directed line a->b.
double side(const CsdPoint& a, const CsdPoint& b, const CsdPoint& p) {
    const double abx = static_cast<double>(b.x - a.x);
    const double apx = static_cast<double>(p.x - a.x);
    return abx * (p.y - a.y) - (b.y - a.y) * apx;
}

CsdPoint reflect(const CsdPoint& left, const CsdPoint& mid, const CsdPoint& right) {
    return {left.x + right.x - mid.x, left.y + right.y - mid.y};
}

Slope slope_between(const CsdPoint& left, const CsdPoint& right) {
    return {right.y - left.y, right.x - left.x};
}

std::vector<double> values(const std::vector<Slope>& slopes) {
    std::vector<double> out(slopes.size());
    std::transform(slopes.begin(), slopes.end(), out.begin(), [](const Slope& s) { return s.value(); });
    return out;
}

}  // namespace

std::int64_t WeightedScorePoints::total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
}

void WeightedScorePoints::validate() const {
    if (scores.empty()) throw DataError("empty calibration set");
    if (weights.size() != scores.size() || mean_labels.size() != scores.size())
        throw DataError("weighted score points: vectors differ in length");
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (j > 0 && !(scores[j - 1] < scores[j]))
            throw DataError("weighted score points: scores must be strictly increasing");
        if (weights[j] < 1) throw DataError("weighted score points: weights must be positive");
        const double y = mean_labels[j];
        if (!(y >= 0.0 && y <= 1.0)) throw DataError("weighted score points: mean labels must lie in [0,1]");
        const double ones = y * static_cast<double>(weights[j]);
        if (std::abs(ones - std::round(ones)) > 1e-6)
            throw DataError("weighted score points: mean label times weight must be a label count");
    }
}

WeightedScorePoints dedup_weighted(std::span<const double> scores, std::span<const int> labels) {
    if (scores.empty()) throw DataError("empty calibration set");
    if (scores.size() != labels.size())
        throw DataError("scores and labels differ in length (" + std::to_string(scores.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw DataError("non-finite calibration score at index " + std::to_string(i));
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError("label at index " + std::to_string(i) + " is not 0 or 1");
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    WeightedScorePoints out;
    std::vector<std::int64_t> ones;
    for (std::size_t idx : order) {
        if (out.scores.empty() || out.scores.back() != scores[idx]) {
            out.scores.push_back(scores[idx]);
            out.weights.push_back(0);
            ones.push_back(0);
        }
        ++out.weights.back();
        ones.back() += labels[idx];
    }
    out.mean_labels.resize(out.scores.size());
    for (std::size_t j = 0; j < out.scores.size(); ++j)
        out.mean_labels[j] = static_cast<double>(ones[j]) / static_cast<double>(out.weights[j]);
    return out;
}

std::vector<CsdPoint> build_csd(const WeightedScorePoints& points) {
    std::vector<CsdPoint> csd;
    csd.reserve(points.size() + 1);
    csd.push_back({0, 0.0});
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto w = points.weights[j];
        // y'_j w_j is a label count; rounding removes the division error of y'_j.
        const double ones = std::round(points.mean_labels[j] * static_cast<double>(w));
        csd.push_back({csd.back().x + w, csd.back().y + ones});
    }
    return csd;
}

std::vector<CsdPoint> greatest_convex_minorant(std::span<const CsdPoint> csd) {
    std::vector<CsdPoint> hull;
    hull.reserve(csd.size());
    for (const auto& p : csd) {
        while (hull.size() > 1 && turn(hull[hull.size() - 2], hull.back(), p) <= 0.0) hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

std::vector<double> fit_isotonic(const WeightedScorePoints& points) {
    points.validate();
    const auto csd = build_csd(points);
    const auto hull = greatest_convex_minorant(csd);
    std::vector<double> fit(points.size());
    std::size_t c = 0;
    for (std::size_t i = 1; i < csd.size(); ++i) {
        while (hull[c + 1].x < csd[i].x) ++c;
        fit[i - 1] = slope_between(hull[c], hull[c + 1]).value();
    }
    return fit;
}

std::vector<Slope> compute_f1_slopes(const WeightedScorePoints& points, CornerStats* stats) {
    points.validate();
    const std::size_t k = points.size();
    const auto csd = build_csd(points);

    // p[j + 1] holds P_j for j = -1..k.
    std::vector<CsdPoint> p;
    p.reserve(k + 2);
    p.push_back({-1, -1.0});
    p.insert(p.end(), csd.begin(), csd.end());

    CornerStats counts;
    std::vector<CsdPoint> corners;
    corners.reserve(k + 2);
    corners.push_back(p[0]);
    corners.push_back(p[1]);
    counts.initial_pushes = 2;
    for (std::size_t i = 1; i <= k; ++i) {
        while (corners.size() > 1 && turn(corners[corners.size() - 2], corners.back(), p[i + 1]) <= 0.0)
            corners.pop_back();
        corners.push_back(p[i + 1]);
        ++counts.initial_pushes;
    }

    // Reversed copy: back() is the top, starting at P_{-1}.
    std::vector<CsdPoint> stack(corners.rbegin(), corners.rend());
    counts.sweep_pushes = stack.size();

    std::vector<Slope> f1(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const CsdPoint& top = stack.back();
        const CsdPoint& next = stack[stack.size() - 2];
        f1[i - 1] = slope_between(top, next);

        // P_{i-1} := P_{i-2} + P_i - P_{i-1}
        CsdPoint& moved = p[i];
        moved = reflect(p[i - 1], moved, p[i + 1]);
        if (side(top, next, moved) >= 0.0) continue;

        stack.pop_back();
        while (stack.size() > 1 && turn(moved, stack.back(), stack[stack.size() - 2]) <= 0.0) stack.pop_back();
        stack.push_back(moved);
        ++counts.sweep_pushes;
    }
    if (stats) *stats = counts;
    return f1;
}

std::vector<Slope> compute_f0_slopes(const WeightedScorePoints& points, CornerStats* stats) {
    points.validate();
    const std::size_t k = points.size();

    // p[j] holds P_j for j = 0..k+1; P_{k+1} = P_k + (1,0) is the label-0 test step.
    auto p = build_csd(points);
    p.push_back({p.back().x + 1, p.back().y});

    CornerStats counts;
    std::vector<CsdPoint> corners;
    corners.reserve(k + 2);
    corners.push_back(p[k + 1]);
    corners.push_back(p[k]);
    counts.initial_pushes = 2;
    for (std::size_t i = k; i-- > 0;) {
        while (corners.size() > 1 && turn(corners[corners.size() - 2], corners.back(), p[i]) >= 0.0)
            corners.pop_back();
        corners.push_back(p[i]);
        ++counts.initial_pushes;
    }

    std::vector<CsdPoint> stack(corners.rbegin(), corners.rend());
    counts.sweep_pushes = stack.size();

    std::vector<Slope> f0(k);
    for (std::size_t i = k; i >= 1; --i) {
        const CsdPoint& top = stack.back();
        const CsdPoint& next = stack[stack.size() - 2];
        f0[i - 1] = slope_between(next, top);

        // P_i := P_{i-1} + P_{i+1} - P_i
        CsdPoint& moved = p[i];
        moved = reflect(p[i - 1], moved, p[i + 1]);
        if (side(next, top, moved) >= 0.0) continue;

        stack.pop_back();
        while (stack.size() > 1 && turn(moved, stack.back(), stack[stack.size() - 2]) >= 0.0) stack.pop_back();
        stack.push_back(moved);
        ++counts.sweep_pushes;
    }
    if (stats) *stats = counts;
    return f0;
}

std::vector<double> compute_f1(const WeightedScorePoints& points, CornerStats* stats) {
    return values(compute_f1_slopes(points, stats));
}

std::vector<double> compute_f0(const WeightedScorePoints& points, CornerStats* stats) {
    return values(compute_f0_slopes(points, stats));
}

FVectors compute_f_vectors(const WeightedScorePoints& points) {
    return {compute_f0(points), compute_f1(points)};
}

}  // namespace vennabers
