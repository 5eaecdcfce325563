#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vennabers {

/// Calibration data after sorting and merging equal scores.
///
/// `scores` is strictly increasing, `weights[j]` counts the observations with
/// score `scores[j]` and `mean_labels[j]` is the fraction of them labelled 1.
struct WeightedScorePoints {
    std::vector<double> scores;
    std::vector<std::int64_t> weights;
    std::vector<double> mean_labels;

    std::size_t size() const { return scores.size(); }
    std::int64_t total_weight() const;

    // Throws DataError if the invariants above do not hold.
    void validate() const;
};

/// A point of the cumulative sum diagram: x is the cumulative weight (exact
/// integer), y the cumulative weighted label sum.
struct CsdPoint {
    std::int64_t x = 0;
    double y = 0.0;

    friend bool operator==(const CsdPoint&, const CsdPoint&) = default;
};

/// Lower (F0) and upper (F1) Venn-Abers probabilities at every distinct
/// calibration score.
struct FVectors {
    std::vector<double> f0;
    std::vector<double> f1;
};

/// A GCM slope kept as rise over run. With 0/1 labels both are integers, so
/// identities between slopes can be checked exactly by cross-multiplication.
struct Slope {
    double rise = 0.0;
    std::int64_t run = 1;

    double value() const { return rise / static_cast<double>(run); }
};

/// Push counters for the corner-stack sweeps. `initial_pushes` counts pushes
/// onto the Graham-scan stack, `sweep_pushes` the pushes onto the reversed
/// stack (copy phase plus sweep). Both are linear in the number of points.
struct CornerStats {
    std::size_t initial_pushes = 0;
    std::size_t sweep_pushes = 0;
};

// Sorts by score and merges duplicates. Throws DataError on empty input,
// length mismatch, labels outside {0,1} or non-finite scores.
WeightedScorePoints dedup_weighted(std::span<const double> scores, std::span<const int> labels);

// P_0 = (0,0), P_i = (sum of the first i weights, sum of y'_j w_j).
std::vector<CsdPoint> build_csd(const WeightedScorePoints& points);

// Corners of the greatest convex minorant of a CSD, left to right, including
// both end points. Collinear points are dropped.
std::vector<CsdPoint> greatest_convex_minorant(std::span<const CsdPoint> csd);

// Isotonic regression fit at each distinct score: the slope of the GCM over
// the interval of the CSD belonging to that score.
std::vector<double> fit_isotonic(const WeightedScorePoints& points);

std::vector<Slope> compute_f1_slopes(const WeightedScorePoints& points, CornerStats* stats = nullptr);
std::vector<Slope> compute_f0_slopes(const WeightedScorePoints& points, CornerStats* stats = nullptr);

// F1_i: fit at s'_i after inserting a (weight 1, label 1) test point just left
// of s'_i. Linear time given the sorted points.
std::vector<double> compute_f1(const WeightedScorePoints& points, CornerStats* stats = nullptr);

// F0_i: fit at s'_i after inserting a (weight 1, label 0) test point just
// right of s'_i. Mirror image of compute_f1.
std::vector<double> compute_f0(const WeightedScorePoints& points, CornerStats* stats = nullptr);

FVectors compute_f_vectors(const WeightedScorePoints& points);

}  // namespace vennabers
