#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vennabers/baselines.hpp"
#include "vennabers/cvap.hpp"
#include "vennabers/data.hpp"
#include "vennabers/ivap.hpp"
#include "vennabers/merging.hpp"
#include "vennabers/metrics.hpp"
#include "vennabers/scorers.hpp"

namespace vennabers {

// Order here is the row order of comparison tables.
enum class Method { underlying, platt, isotonic, ivap, cvap };

inline constexpr Method kAllMethods[] = {Method::underlying, Method::platt, Method::isotonic, Method::ivap,
                                         Method::cvap};

Method parse_method(std::string_view name);
std::string to_string(Method method);

struct RunConfig {
    Method method = Method::cvap;
    std::size_t proper_parts = 4;       // ratio m:k of proper training to calibration
    std::size_t calibration_parts = 1;
    std::optional<std::size_t> folds;   // CVAP fold count, default m + k
    MergeLoss merge = MergeLoss::log;
    ScorerSpec scorer;
    std::uint64_t seed = 0;
    bool all_mode = false;              // proper training set = calibration set = all
    bool permute = false;               // shuffle before splitting / randomized folds
    bool tune = false;                  // ridge grid search by Brier loss
    bool dummy_observations = false;    // direct isotonic regularization

    std::size_t fold_count() const { return folds ? *folds : proper_parts + calibration_parts; }
    // Throws UsageError for inconsistent settings.
    void validate() const;
};

// Ridge values tried when tuning is enabled.
std::vector<double> default_ridge_grid();

struct MethodResult {
    Method method = Method::cvap;
    std::vector<double> probabilities;
    // Per test row: one interval for IVAP, one per fold for CVAP, empty otherwise.
    std::vector<std::vector<ProbInterval>> intervals;
    std::size_t proper_size = 0;
    std::size_t calibration_size = 0;
    // Fitted models; which ones are set depends on the method.
    std::optional<TrainedScorer> scorer;
    std::optional<PlattModel> platt;
    std::optional<DirIsoModel> isotonic;
    std::optional<IvapRule> ivap;
    std::optional<CvapModel> cvap;
};

// Trains the scorer (and calibrator) on the training rows and predicts the
// test rows with the configured method.
MethodResult run_method(const RunConfig& config, const FeatureMatrix& train_x, std::span<const int> train_labels,
                        const FeatureMatrix& test_x);

struct PreparedData {
    FeatureMatrix train_x;
    std::vector<int> train_labels;
    FeatureMatrix test_x;
    std::vector<int> test_labels;
    ImputationStats imputation;
};

// Imputes both sets with statistics from `train` and one-hot encodes them.
PreparedData prepare(const Dataset& train, const Dataset& test);

struct ComparisonRow {
    Method method = Method::cvap;
    EvalReport report;
};

// Runs every method on the same data and seed, in table order.
std::vector<ComparisonRow> compare_methods(const RunConfig& config, const PreparedData& data);

}  // namespace vennabers
