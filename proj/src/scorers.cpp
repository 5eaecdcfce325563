#include "vennabers/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vennabers/error.hpp"

namespace vennabers {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_training_data(const FeatureMatrix& x, std::span<const int> labels) {
    if (x.rows == 0) throw DataError("cannot train a scorer on an empty dataset");
    if (x.rows != labels.size()) throw DataError("feature rows and labels differ in length");
    for (int y : labels)
        if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
}

class LogisticObjective {
public:
    LogisticObjective(const FeatureMatrix& x, std::span<const int> labels, double ridge)
        : x_(x), labels_(labels), ridge_(ridge), mean_(x.cols, 0.0), scale_(x.cols, 1.0) {
        const auto n = static_cast<double>(x.rows);
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t c = 0; c < x.cols; ++c) mean_[c] += x.values[r * x.cols + c];
        for (auto& m : mean_) m /= n;
        std::vector<double> var(x.cols, 0.0);
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t c = 0; c < x.cols; ++c) {
                const double d = x.values[r * x.cols + c] - mean_[c];
                var[c] += d * d;
            }
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double sd = std::sqrt(var[c] / n);
            scale_[c] = sd > 0.0 ? sd : 1.0;
        }
    }

    // params = (v_1..v_d, b) in standardized space.
    double value(std::span<const double> params) const {
        double sum = 0.0;
        for (std::size_t r = 0; r < x_.rows; ++r) {
            const double z = linear(params, r);
            sum += softplus(z) - labels_[r] * z;
        }
        return sum / static_cast<double>(x_.rows) + penalty(params);
    }

    double value_and_gradient(std::span<const double> params, std::vector<double>& grad) const {
        const std::size_t d = x_.cols;
        std::fill(grad.begin(), grad.end(), 0.0);
        double sum = 0.0;
        for (std::size_t r = 0; r < x_.rows; ++r) {
            const double z = linear(params, r);
            sum += softplus(z) - labels_[r] * z;
            const double residual = sigmoid(z) - labels_[r];
            for (std::size_t c = 0; c < d; ++c) grad[c] += residual * standardized(r, c);
            grad[d] += residual;
        }
        const auto n = static_cast<double>(x_.rows);
        for (auto& g : grad) g /= n;
        for (std::size_t c = 0; c < d; ++c) grad[c] += ridge_ * params[c];
        return sum / n + penalty(params);
    }

    TrainedScorer to_scorer(std::span<const double> params) const {
        TrainedScorer out;
        out.kind = ScorerKind::logistic;
        out.dimension = x_.cols;
        out.weights.resize(x_.cols);
        out.intercept = params[x_.cols];
        for (std::size_t c = 0; c < x_.cols; ++c) {
            out.weights[c] = params[c] / scale_[c];
            out.intercept -= out.weights[c] * mean_[c];
        }
        return out;
    }

private:
    double standardized(std::size_t r, std::size_t c) const {
        return (x_.values[r * x_.cols + c] - mean_[c]) / scale_[c];
    }
    double linear(std::span<const double> params, std::size_t r) const {
        double z = params[x_.cols];
        for (std::size_t c = 0; c < x_.cols; ++c) z += params[c] * standardized(r, c);
        return z;
    }
    double penalty(std::span<const double> params) const {
        double sq = 0.0;
        for (std::size_t c = 0; c < x_.cols; ++c) sq += params[c] * params[c];
        return 0.5 * ridge_ * sq;
    }

    const FeatureMatrix& x_;
    std::span<const int> labels_;
    double ridge_;
    std::vector<double> mean_;
    std::vector<double> scale_;
};

TrainedScorer train_logistic(const ScorerSpec& spec, const FeatureMatrix& x, std::span<const int> labels,
                             std::vector<double>* trace) {
    const auto ones = std::count(labels.begin(), labels.end(), 1);
    if (ones == 0 || ones == static_cast<std::ptrdiff_t>(labels.size()))
        throw DegenerateError("logistic scorer needs both classes in its training data");

    const LogisticObjective objective(x, labels, spec.ridge);
    std::vector<double> params(x.cols + 1, 0.0);
    std::vector<double> grad(params.size());
    std::vector<double> trial(params.size());
    double loss = objective.value_and_gradient(params, grad);
    if (trace) trace->push_back(loss);
    double step = spec.learning_rate;
    for (std::size_t iter = 0; iter < spec.max_iterations; ++iter) {
        const double norm_sq = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
        if (std::sqrt(norm_sq) < spec.tolerance) break;
        // Armijo backtracking; the step grows again after each success.
        // Stops once no step gives a measurable decrease (rounding level).
        double trial_loss = 0.0;
        bool accepted = false;
        while (step >= 1e-20) {
            for (std::size_t j = 0; j < params.size(); ++j) trial[j] = params[j] - step * grad[j];
            trial_loss = objective.value(trial);
            if (trial_loss <= loss - 0.5 * step * norm_sq && trial_loss < loss) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        params.swap(trial);
        loss = objective.value_and_gradient(params, grad);
        if (trace) trace->push_back(loss);
        step = std::min(spec.learning_rate, 2.0 * step);
    }
    return objective.to_scorer(params);
}

TrainedScorer train_stump(const FeatureMatrix& x, std::span<const int> labels) {
    if (x.cols == 0) throw DataError("stump scorer needs at least one feature");
    const auto total_ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t total_zeros = labels.size() - total_ones;

    TrainedScorer best;
    best.kind = ScorerKind::stump;
    best.dimension = x.cols;
    std::size_t best_errors = labels.size() + 1;

    std::vector<std::pair<double, int>> column(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        for (std::size_t r = 0; r < x.rows; ++r) column[r] = {x.values[r * x.cols + c], labels[r]};
        std::sort(column.begin(), column.end());
        std::size_t ones_left = 0;
        std::size_t zeros_left = 0;
        for (std::size_t r = 0; r + 1 < column.size(); ++r) {
            (column[r].second == 1 ? ones_left : zeros_left) += 1;
            if (column[r].first == column[r + 1].first) continue;
            const double threshold = 0.5 * (column[r].first + column[r + 1].first);
            const std::size_t high_one_errors = ones_left + (total_zeros - zeros_left);
            const std::size_t high_zero_errors = zeros_left + (total_ones - ones_left);
            if (high_one_errors < best_errors) {
                best_errors = high_one_errors;
                best.feature = c;
                best.threshold = threshold;
                best.high_is_one = true;
            }
            if (high_zero_errors < best_errors) {
                best_errors = high_zero_errors;
                best.feature = c;
                best.threshold = threshold;
                best.high_is_one = false;
            }
        }
    }
    if (best_errors > labels.size()) {
        // No feature separates anything: put every row below the threshold and
        // predict the majority class.
        best.feature = 0;
        best.threshold = x.cols ? *std::max_element(x.values.begin(), x.values.end()) : 0.0;
        best.high_is_one = total_ones > total_zeros ? false : true;
    }
    return best;
}

}  // namespace

ScorerKind parse_scorer_kind(std::string_view name) {
    if (name == "logistic") return ScorerKind::logistic;
    if (name == "stump") return ScorerKind::stump;
    if (name == "constant") return ScorerKind::constant;
    throw UsageError("unknown scorer '" + std::string(name) + "' (expected logistic, stump or constant)");
}

std::string to_string(ScorerKind kind) {
    switch (kind) {
        case ScorerKind::logistic: return "logistic";
        case ScorerKind::stump: return "stump";
        case ScorerKind::constant: return "constant";
    }
    return "unknown";
}

void ScorerSpec::validate() const {
    if (kind != ScorerKind::logistic) return;
    if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
    if (max_iterations == 0) throw UsageError("iteration cap must be positive");
    if (!(ridge > 0.0)) throw UsageError("ridge coefficient must be positive");
    if (!(tolerance > 0.0)) throw UsageError("tolerance must be positive");
}

TrainedScorer train_scorer(const ScorerSpec& spec, const FeatureMatrix& x, std::span<const int> labels,
                           std::vector<double>* loss_trace) {
    spec.validate();
    check_training_data(x, labels);
    switch (spec.kind) {
        case ScorerKind::logistic: return train_logistic(spec, x, labels, loss_trace);
        case ScorerKind::stump: return train_stump(x, labels);
        case ScorerKind::constant: {
            TrainedScorer out;
            out.kind = ScorerKind::constant;
            out.dimension = x.cols;
            out.constant = static_cast<double>(std::count(labels.begin(), labels.end(), 1)) /
                           static_cast<double>(labels.size());
            return out;
        }
    }
    throw UsageError("unknown scorer kind");
}

double score(const TrainedScorer& scorer, std::span<const double> features) {
    if (features.size() != scorer.dimension)
        throw DataError("feature vector has " + std::to_string(features.size()) + " entries; scorer expects " +
                        std::to_string(scorer.dimension));
    switch (scorer.kind) {
        case ScorerKind::logistic:
            return std::inner_product(features.begin(), features.end(), scorer.weights.begin(), scorer.intercept);
        case ScorerKind::stump:
            return (features[scorer.feature] > scorer.threshold) == scorer.high_is_one ? 1.0 : 0.0;
        case ScorerKind::constant: return scorer.constant;
    }
    return 0.0;
}

std::vector<double> score_all(const TrainedScorer& scorer, const FeatureMatrix& x) {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = score(scorer, x.row(r));
    return out;
}

double underlying_probability(const TrainedScorer& scorer, double raw_score) {
    return scorer.kind == ScorerKind::logistic ? sigmoid(raw_score) : std::clamp(raw_score, 0.0, 1.0);
}

}  // namespace vennabers
