#include "vennabers/pipeline.hpp"

#include <future>

#include "vennabers/baselines.hpp"
#include "vennabers/cvap.hpp"
#include "vennabers/error.hpp"
#include "vennabers/ivap.hpp"

namespace vennabers {

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (to_string(m) == name) return m;
    throw UsageError("unknown method '" + std::string(name) + "' (expected underlying, platt, isotonic, ivap or cvap)");
}

std::string to_string(Method method) {
    switch (method) {
        case Method::underlying: return "underlying";
        case Method::platt: return "platt";
        case Method::isotonic: return "isotonic";
        case Method::ivap: return "ivap";
        case Method::cvap: return "cvap";
    }
    return "unknown";
}

void RunConfig::validate() const {
    scorer.validate();
    if (proper_parts < 1 || calibration_parts < 1) throw UsageError("ratio m:k needs m >= 1 and k >= 1");
    if (method == Method::cvap && fold_count() < 2) throw UsageError("cvap needs at least 2 folds");
}

std::vector<double> default_ridge_grid() { return {1e-6, 1e-4, 1e-2, 1.0}; }

namespace {

struct SplitData {
    FeatureMatrix proper_x;
    std::vector<int> proper_labels;
    FeatureMatrix calibration_x;
    std::vector<int> calibration_labels;
};

SplitData split(const RunConfig& config, const FeatureMatrix& x, std::span<const int> labels) {
    SplitSpec spec;
    spec.proper_parts = config.proper_parts;
    spec.calibration_parts = config.calibration_parts;
    spec.all_mode = config.all_mode;
    if (config.permute) spec.seed = config.seed;
    const auto idx = split_indices(x.rows, spec);
    return {select_rows(x, idx.proper), select_labels(labels, idx.proper), select_rows(x, idx.calibration),
            select_labels(labels, idx.calibration)};
}

ScorerSpec tuned_for_split(const RunConfig& config, const SplitData& data) {
    if (!config.tune) return config.scorer;
    return tune_ridge_holdout(data.proper_x, data.proper_labels, data.calibration_x, data.calibration_labels,
                              config.scorer, default_ridge_grid());
}

}  // namespace

MethodResult run_method(const RunConfig& config, const FeatureMatrix& train_x, std::span<const int> train_labels,
                        const FeatureMatrix& test_x) {
    config.validate();
    if (train_x.rows != train_labels.size()) throw DataError("training rows and labels differ in length");
    if (test_x.cols != train_x.cols) throw DataError("test features do not match the training features");

    MethodResult result;
    result.method = config.method;
    result.probabilities.resize(test_x.rows);

    if (config.method == Method::cvap) {
        const FoldMode mode = config.permute ? FoldMode::randomized : FoldMode::contiguous;
        const std::optional<std::uint64_t> seed = config.permute ? std::optional(config.seed) : std::nullopt;
        ScorerSpec spec = config.scorer;
        if (config.tune)
            spec = tune_ridge_cross(train_x, train_labels, assign_folds(train_x.rows, config.fold_count(), mode, seed),
                                    config.scorer, default_ridge_grid());
        const auto model = build_cvap(train_x, train_labels, config.fold_count(), spec, mode, seed);
        result.proper_size = train_x.rows - model.largest_fold();
        result.calibration_size = model.largest_fold();
        result.intervals.resize(test_x.rows);
        for (std::size_t r = 0; r < test_x.rows; ++r) {
            result.intervals[r] = model.intervals(test_x.row(r));
            result.probabilities[r] = merge(result.intervals[r], config.merge);
        }
        result.cvap = model;
        return result;
    }

    const auto data = split(config, train_x, train_labels);
    result.proper_size = data.proper_x.rows;
    result.calibration_size = data.calibration_x.rows;
    const auto scorer = train_scorer(tuned_for_split(config, data), data.proper_x, data.proper_labels);
    const auto test_scores = score_all(scorer, test_x);
    result.scorer = scorer;

    switch (config.method) {
        case Method::underlying:
            for (std::size_t r = 0; r < test_x.rows; ++r)
                result.probabilities[r] = underlying_probability(scorer, test_scores[r]);
            break;
        case Method::platt: {
            const auto model = fit_platt(score_all(scorer, data.calibration_x), data.calibration_labels);
            for (std::size_t r = 0; r < test_x.rows; ++r) result.probabilities[r] = predict_platt(model, test_scores[r]);
            result.platt = model;
            break;
        }
        case Method::isotonic: {
            const auto model = fit_direct_isotonic(score_all(scorer, data.calibration_x), data.calibration_labels,
                                                   {config.dummy_observations});
            for (std::size_t r = 0; r < test_x.rows; ++r)
                result.probabilities[r] = predict_direct(model, test_scores[r]);
            result.isotonic = model;
            break;
        }
        case Method::ivap: {
            const auto rule = IvapRule::build(score_all(scorer, data.calibration_x), data.calibration_labels);
            result.intervals.resize(test_x.rows);
            for (std::size_t r = 0; r < test_x.rows; ++r) {
                const auto interval = rule.predict_interval(test_scores[r]);
                result.intervals[r] = {interval};
                result.probabilities[r] = merge({&interval, 1}, config.merge);
            }
            result.ivap = rule;
            break;
        }
        case Method::cvap: break;
    }
    return result;
}

PreparedData prepare(const Dataset& train, const Dataset& test) {
    PreparedData out;
    out.imputation = fit_imputation(train);
    out.train_x = encode(impute(train, out.imputation));
    out.train_labels = train.labels;
    out.test_x = encode(impute(test, out.imputation));
    if (test.labeled) out.test_labels = test.labels;
    return out;
}

std::vector<ComparisonRow> compare_methods(const RunConfig& config, const PreparedData& data) {
    if (data.test_labels.size() != data.test_x.rows) throw DataError("comparison needs labelled test data");
    std::vector<std::future<ComparisonRow>> pending;
    for (Method method : kAllMethods) {
        pending.push_back(std::async(std::launch::async, [&, method] {
            RunConfig run = config;
            run.method = method;
            // The all-mode flag only concerns single-split methods.
            if (method == Method::cvap) run.all_mode = false;
            const auto result = run_method(run, data.train_x, data.train_labels, data.test_x);
            return ComparisonRow{method, evaluate(result.probabilities, data.test_labels)};
        }));
    }
    std::vector<ComparisonRow> rows;
    for (auto& future : pending) rows.push_back(future.get());
    return rows;
}

}  // namespace vennabers
