#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vennabers/data.hpp"

namespace vennabers {

// Built-in scoring algorithms. Any external model can be used instead by
// feeding its scores to the calibrators directly.
enum class ScorerKind { logistic, stump, constant };

ScorerKind parse_scorer_kind(std::string_view name);
std::string to_string(ScorerKind kind);

struct ScorerSpec {
    ScorerKind kind = ScorerKind::logistic;
    // logistic only
    double learning_rate = 4.0;  // initial step of the backtracking line search
    std::size_t max_iterations = 2000;
    double ridge = 1e-4;       // penalty on standardized weights
    double tolerance = 1e-8;   // gradient norm at which training stops

    void validate() const;
};

struct TrainedScorer {
    ScorerKind kind = ScorerKind::constant;
    std::size_t dimension = 0;
    // logistic: score = intercept + weights . x
    std::vector<double> weights;
    double intercept = 0.0;
    // stump: score = 1 if (x[feature] > threshold) == high_is_one, else 0
    std::size_t feature = 0;
    double threshold = 0.0;
    bool high_is_one = true;
    // constant
    double constant = 0.0;
};

// logistic: ridge-penalized maximum likelihood by gradient descent with an
// Armijo line search on standardized features (loss never increases; the
// per-iteration objective is appended to `loss_trace` when given).
// stump: fewest misclassifications; ties go to the lowest feature index, then
// the lowest threshold, then high_is_one.
// constant: the empirical rate of label 1.
TrainedScorer train_scorer(const ScorerSpec& spec, const FeatureMatrix& x, std::span<const int> labels,
                           std::vector<double>* loss_trace = nullptr);

// Raw score: the linear predictor for logistic, 0/1 for stump.
double score(const TrainedScorer& scorer, std::span<const double> features);
std::vector<double> score_all(const TrainedScorer& scorer, const FeatureMatrix& x);

// The scorer's own probability estimate for a raw score (sigmoid for
// logistic, the score itself otherwise).
double underlying_probability(const TrainedScorer& scorer, double raw_score);

}  // namespace vennabers
