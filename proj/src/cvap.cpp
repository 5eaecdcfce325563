#include "vennabers/cvap.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <numeric>

#include "vennabers/error.hpp"
#include "vennabers/metrics.hpp"
#include "vennabers/rng.hpp"

namespace vennabers {

namespace {

bool single_class(std::span<const int> labels) {
    return std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels.front(); });
}

}  // namespace

FoldMode parse_fold_mode(std::string_view name) {
    if (name == "contiguous") return FoldMode::contiguous;
    if (name == "randomized" || name == "random") return FoldMode::randomized;
    throw UsageError("unknown fold mode '" + std::string(name) + "' (expected contiguous or randomized)");
}

std::string to_string(FoldMode mode) { return mode == FoldMode::contiguous ? "contiguous" : "randomized"; }

std::vector<std::size_t> FoldAssignment::sizes() const {
    std::vector<std::size_t> out(folds, 0);
    for (std::size_t f : fold_of) ++out[f];
    return out;
}

std::vector<std::size_t> FoldAssignment::members(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldAssignment::complement(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldAssignment assign_folds(std::size_t n, std::size_t folds, FoldMode mode, std::optional<std::uint64_t> seed) {
    if (folds < 2) throw UsageError("number of folds must be at least 2");
    if (folds > n)
        throw UsageError("number of folds (" + std::to_string(folds) + ") exceeds training size (" +
                         std::to_string(n) + ")");
    if (mode == FoldMode::randomized && !seed) throw UsageError("randomized folds need a seed");

    FoldAssignment out{n, folds, mode, mode == FoldMode::randomized ? seed : std::nullopt, {}};
    out.fold_of.reserve(n);
    const std::size_t base = n / folds;
    const std::size_t larger = n % folds;
    for (std::size_t f = 0; f < folds; ++f) out.fold_of.insert(out.fold_of.end(), base + (f < larger ? 1 : 0), f);
    if (mode == FoldMode::randomized) Rng::substream(*seed, "folds").shuffle(std::span<std::size_t>(out.fold_of));
    return out;
}

CvapModel::CvapModel(FoldAssignment assignment, ScorerSpec spec, std::vector<CvapFold> folds)
    : assignment_(std::move(assignment)), spec_(spec), folds_(std::move(folds)) {
    if (folds_.empty()) throw UsageError("CVAP model needs at least one fold");
}

std::vector<ProbInterval> CvapModel::intervals(std::span<const double> features) const {
    std::vector<ProbInterval> out;
    out.reserve(folds_.size());
    for (const auto& fold : folds_) out.push_back(fold.rule.predict_interval(score(fold.scorer, features)));
    return out;
}

double CvapModel::predict(std::span<const double> features, MergeLoss loss) const {
    return merge(intervals(features), loss);
}

std::size_t CvapModel::largest_fold() const {
    std::size_t largest = 0;
    for (const auto& fold : folds_) largest = std::max(largest, fold.calibration_indices.size());
    return largest;
}

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::size_t> rows) {
    FeatureMatrix out;
    out.rows = rows.size();
    out.cols = x.cols;
    out.values.reserve(rows.size() * x.cols);
    for (std::size_t r : rows) {
        const auto row = x.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
    }
    return out;
}

std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(labels[r]);
    return out;
}

CvapModel build_cvap(const FeatureMatrix& x, std::span<const int> labels, std::size_t folds, const ScorerSpec& spec,
                     FoldMode mode, std::optional<std::uint64_t> seed) {
    if (x.rows != labels.size()) throw DataError("feature rows and labels differ in length");
    auto assignment = assign_folds(x.rows, folds, mode, seed);

    std::vector<std::vector<std::size_t>> calibration(folds), training(folds);
    for (std::size_t k = 0; k < folds; ++k) {
        calibration[k] = assignment.members(k);
        training[k] = assignment.complement(k);
        const auto cal_labels = select_labels(labels, calibration[k]);
        const auto train_labels = select_labels(labels, training[k]);
        if (single_class(cal_labels))
            throw DegenerateError("degenerate fold " + std::to_string(k + 1) +
                                  ": calibration set contains a single class");
        if (single_class(train_labels))
            throw DegenerateError("degenerate fold " + std::to_string(k + 1) +
                                  ": proper training set contains a single class");
    }

    std::vector<std::future<CvapFold>> pending;
    pending.reserve(folds);
    for (std::size_t k = 0; k < folds; ++k) {
        pending.push_back(std::async(std::launch::async, [&, k] {
            const auto train_x = select_rows(x, training[k]);
            const auto train_y = select_labels(labels, training[k]);
            auto scorer = train_scorer(spec, train_x, train_y);
            const auto cal_scores = score_all(scorer, select_rows(x, calibration[k]));
            const auto cal_labels = select_labels(labels, calibration[k]);
            auto rule = IvapRule::build(cal_scores, cal_labels);
            return CvapFold{std::move(scorer), std::move(rule), training[k], calibration[k]};
        }));
    }
    std::vector<CvapFold> built;
    built.reserve(folds);
    for (auto& future : pending) built.push_back(future.get());
    return CvapModel(std::move(assignment), spec, std::move(built));
}

double predict_cvap(const CvapModel& model, std::span<const double> features, MergeLoss loss) {
    return model.predict(features, loss);
}

double predict_cvap_scores(std::span<const IvapRule> rules, std::span<const double> scores, MergeLoss loss) {
    if (rules.size() != scores.size())
        throw DataError("expected one score per fold (" + std::to_string(rules.size()) + "), got " +
                        std::to_string(scores.size()));
    std::vector<ProbInterval> batch;
    batch.reserve(rules.size());
    for (std::size_t k = 0; k < rules.size(); ++k) batch.push_back(rules[k].predict_interval(scores[k]));
    return merge(batch, loss);
}

namespace {

double heldout_brier(const TrainedScorer& scorer, const FeatureMatrix& x, std::span<const int> labels) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r)
        sum += brier_loss(underlying_probability(scorer, score(scorer, x.row(r))), labels[r]);
    return sum;
}

}  // namespace

ScorerSpec tune_ridge_cross(const FeatureMatrix& x, std::span<const int> labels, const FoldAssignment& folds,
                            const ScorerSpec& base, std::span<const double> ridge_grid) {
    if (base.kind != ScorerKind::logistic || ridge_grid.empty()) return base;
    ScorerSpec best = base;
    double best_loss = std::numeric_limits<double>::infinity();
    for (double ridge : ridge_grid) {
        ScorerSpec candidate = base;
        candidate.ridge = ridge;
        double total = 0.0;
        for (std::size_t k = 0; k < folds.folds; ++k) {
            const auto train = folds.complement(k);
            const auto held = folds.members(k);
            const auto scorer = train_scorer(candidate, select_rows(x, train), select_labels(labels, train));
            total += heldout_brier(scorer, select_rows(x, held), select_labels(labels, held));
        }
        if (total < best_loss) {
            best_loss = total;
            best = candidate;
        }
    }
    return best;
}

ScorerSpec tune_ridge_holdout(const FeatureMatrix& proper_x, std::span<const int> proper_labels,
                              const FeatureMatrix& calibration_x, std::span<const int> calibration_labels,
                              const ScorerSpec& base, std::span<const double> ridge_grid) {
    if (base.kind != ScorerKind::logistic || ridge_grid.empty()) return base;
    ScorerSpec best = base;
    double best_loss = std::numeric_limits<double>::infinity();
    for (double ridge : ridge_grid) {
        ScorerSpec candidate = base;
        candidate.ridge = ridge;
        const auto scorer = train_scorer(candidate, proper_x, proper_labels);
        const double loss = heldout_brier(scorer, calibration_x, calibration_labels);
        if (loss < best_loss) {
            best_loss = loss;
            best = candidate;
        }
    }
    return best;
}

}  // namespace vennabers
