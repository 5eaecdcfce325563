#include "vennabers/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vennabers/error.hpp"
#include "vennabers/isotonic.hpp"

namespace vennabers {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// 1 / (1 + exp(f)) without overflow.
double platt_sigmoid(double f) {
    if (f >= 0.0) {
        const double e = std::exp(-f);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(f));
}

struct Targets {
    double positive = 1.0;
    double negative = 0.0;
    std::int64_t k_plus = 0;
    std::int64_t k_minus = 0;
};

Targets make_targets(std::span<const double> scores, std::span<const int> labels, bool regularized) {
    if (scores.empty()) throw DataError("empty calibration set");
    if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
    Targets t;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
        if (!std::isfinite(scores[i])) throw DataError("calibration scores must be finite");
        (labels[i] == 1 ? t.k_plus : t.k_minus) += 1;
    }
    if (regularized) {
        t.positive = static_cast<double>(t.k_plus + 1) / static_cast<double>(t.k_plus + 2);
        t.negative = 1.0 / static_cast<double>(t.k_minus + 2);
    }
    return t;
}

// sum_i softplus(f_i) - (1 - t_i) f_i with f_i = a s_i + b.
double objective(double a, double b, std::span<const double> scores, std::span<const int> labels,
                 const Targets& t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double f = a * scores[i] + b;
        const double target = labels[i] == 1 ? t.positive : t.negative;
        sum += softplus(f) - (1.0 - target) * f;
    }
    return sum;
}

}  // namespace

double platt_objective(double a, double b, std::span<const double> scores, std::span<const int> labels,
                       bool regularized_targets) {
    return objective(a, b, scores, labels, make_targets(scores, labels, regularized_targets));
}

PlattModel fit_platt(std::span<const double> scores, std::span<const int> labels, const PlattOptions& options) {
    const Targets t = make_targets(scores, labels, options.regularized_targets);
    if (t.k_plus == 0 || t.k_minus == 0) throw DegenerateError("Platt scaling needs both classes in the calibration set");

    PlattModel model;
    model.k_plus = t.k_plus;
    model.k_minus = t.k_minus;
    model.a = 0.0;
    model.b = std::log(static_cast<double>(t.k_minus + 1) / static_cast<double>(t.k_plus + 1));

    constexpr double kDamping = 1e-12;
    constexpr double kSufficientDecrease = 1e-4;
    double value = objective(model.a, model.b, scores, labels, t);
    for (; model.iterations < options.max_iterations; ++model.iterations) {
        // dF/df = t - p, d2F/df2 = p (1 - p).
        double ga = 0.0, gb = 0.0, haa = kDamping, hab = 0.0, hbb = kDamping;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const double s = scores[i];
            const double p = platt_sigmoid(model.a * s + model.b);
            const double target = labels[i] == 1 ? t.positive : t.negative;
            const double d1 = target - p;
            const double d2 = p * (1.0 - p);
            ga += d1 * s;
            gb += d1;
            haa += d2 * s * s;
            hab += d2 * s;
            hbb += d2;
        }
        if (std::hypot(ga, gb) < options.tolerance) break;

        const double det = haa * hbb - hab * hab;
        double da = -(hbb * ga - hab * gb) / det;
        double db = -(-hab * ga + haa * gb) / det;
        double slope = ga * da + gb * db;
        if (!(slope < 0.0) || !std::isfinite(slope)) {
            // Hessian too ill-conditioned: fall back to steepest descent.
            da = -ga;
            db = -gb;
            slope = -(ga * ga + gb * gb);
        }
        double step = 1.0;
        bool moved = false;
        while (step > 1e-12) {
            const double na = model.a + step * da;
            const double nb = model.b + step * db;
            const double candidate = objective(na, nb, scores, labels, t);
            if (candidate <= value + kSufficientDecrease * step * slope && candidate < value) {
                model.a = na;
                model.b = nb;
                value = candidate;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        // No representable decrease left: stationary to rounding precision.
        if (!moved) break;
    }
    return model;
}

double predict_platt(const PlattModel& model, double score) { return platt_sigmoid(model.a * score + model.b); }

DirIsoModel fit_direct_isotonic(std::span<const double> scores, std::span<const int> labels,
                                const DirectIsotonicOptions& options) {
    auto points = dedup_weighted(scores, labels);
    if (options.dummy_observations) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        points.scores.insert(points.scores.begin(), -inf);
        points.weights.insert(points.weights.begin(), 1);
        points.mean_labels.insert(points.mean_labels.begin(), 1.0);
        points.scores.push_back(inf);
        points.weights.push_back(1);
        points.mean_labels.push_back(0.0);
    }
    auto fitted = fit_isotonic(points);
    if (options.dummy_observations) {
        points.scores = {points.scores.begin() + 1, points.scores.end() - 1};
        fitted = {fitted.begin() + 1, fitted.end() - 1};
    }
    return {std::move(points.scores), std::move(fitted)};
}

double predict_direct(const DirIsoModel& model, double score) {
    if (std::isnan(score)) throw DataError("test score is NaN");
    if (model.scores.empty()) throw DataError("direct isotonic model is empty");
    const auto it = std::upper_bound(model.scores.begin(), model.scores.end(), score);
    const auto index = it == model.scores.begin() ? 0 : static_cast<std::size_t>(it - model.scores.begin()) - 1;
    return model.fitted[index];
}

}  // namespace vennabers
