#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vennabers/data.hpp"
#include "vennabers/ivap.hpp"
#include "vennabers/merging.hpp"
#include "vennabers/scorers.hpp"

namespace vennabers {

enum class FoldMode { contiguous, randomized };

FoldMode parse_fold_mode(std::string_view name);
std::string to_string(FoldMode mode);

/// Assignment of n training observations to K folds (fold ids 0..K-1).
struct FoldAssignment {
    std::size_t n = 0;
    std::size_t folds = 0;
    FoldMode mode = FoldMode::contiguous;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> fold_of;

    std::vector<std::size_t> sizes() const;
    std::vector<std::size_t> members(std::size_t fold) const;
    std::vector<std::size_t> complement(std::size_t fold) const;
};

// Contiguous: the first n mod K folds hold ceil(n/K) observations and the
// rest floor(n/K), in order. Randomized: the contiguous assignment permuted
// by a Fisher-Yates shuffle drawn from the seed's "folds" stream.
// Throws UsageError unless 2 <= K <= n.
FoldAssignment assign_folds(std::size_t n, std::size_t folds, FoldMode mode = FoldMode::contiguous,
                            std::optional<std::uint64_t> seed = std::nullopt);

struct CvapFold {
    TrainedScorer scorer;                        // trained on every fold but this one
    IvapRule rule;                               // calibrated on this fold
    std::vector<std::size_t> training_indices;   // rows seen by `scorer`
    std::vector<std::size_t> calibration_indices;
};

/// Cross Venn-Abers predictor. Immutable once built.
class CvapModel {
public:
    CvapModel(FoldAssignment assignment, ScorerSpec spec, std::vector<CvapFold> folds);

    // One interval per fold for a feature vector.
    std::vector<ProbInterval> intervals(std::span<const double> features) const;
    double predict(std::span<const double> features, MergeLoss loss) const;

    const FoldAssignment& assignment() const { return assignment_; }
    const ScorerSpec& scorer_spec() const { return spec_; }
    const std::vector<CvapFold>& folds() const { return folds_; }
    std::size_t largest_fold() const;

private:
    FoldAssignment assignment_;
    ScorerSpec spec_;
    std::vector<CvapFold> folds_;
};

// Trains one scorer per fold complement and calibrates it on the fold. Folds
// run concurrently; results are stored in fold order. Throws DegenerateError
// when a fold or its complement contains a single class.
CvapModel build_cvap(const FeatureMatrix& x, std::span<const int> labels, std::size_t folds, const ScorerSpec& spec,
                     FoldMode mode = FoldMode::contiguous, std::optional<std::uint64_t> seed = std::nullopt);

double predict_cvap(const CvapModel& model, std::span<const double> features, MergeLoss loss);

// CVAP over externally computed scores: `scores[k]` is the test object's score
// under the scorer of fold k and `rules[k]` the rule calibrated on fold k.
double predict_cvap_scores(std::span<const IvapRule> rules, std::span<const double> scores, MergeLoss loss);

// Picks the ridge coefficient that minimizes the cumulative Brier loss of the
// scorer's own probabilities over the held-out folds (one value shared by all
// folds). Only meaningful for the logistic scorer; other kinds are returned
// unchanged.
ScorerSpec tune_ridge_cross(const FeatureMatrix& x, std::span<const int> labels, const FoldAssignment& folds,
                            const ScorerSpec& base, std::span<const double> ridge_grid);

// Same criterion on a single proper-training / calibration split.
ScorerSpec tune_ridge_holdout(const FeatureMatrix& proper_x, std::span<const int> proper_labels,
                              const FeatureMatrix& calibration_x, std::span<const int> calibration_labels,
                              const ScorerSpec& base, std::span<const double> ridge_grid);

// Row selection helpers shared with the pipeline code.
FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::size_t> rows);
std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows);

}  // namespace vennabers
