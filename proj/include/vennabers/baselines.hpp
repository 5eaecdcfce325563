#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vennabers {

/// Platt's sigmoid g(s) = 1 / (1 + exp(A s + B)).
struct PlattModel {
    double a = 0.0;
    double b = 0.0;
    std::int64_t k_plus = 0;   // calibration observations labelled 1
    std::int64_t k_minus = 0;  // calibration observations labelled 0
    std::size_t iterations = 0;
};

struct PlattOptions {
    // Targets (k+ + 1)/(k+ + 2) and 1/(k- + 2) instead of the raw labels.
    bool regularized_targets = true;
    double tolerance = 1e-8;  // gradient norm
    std::size_t max_iterations = 10000;
};

// Cross-entropy of the sigmoid (a, b) against the (possibly regularized)
// targets, summed over the calibration set.
double platt_objective(double a, double b, std::span<const double> scores, std::span<const int> labels,
                       bool regularized_targets = true);

// Damped Newton with backtracking from A = 0, B = log((k- + 1)/(k+ + 1)).
// Throws DegenerateError when the calibration set has a single class.
PlattModel fit_platt(std::span<const double> scores, std::span<const int> labels, const PlattOptions& options = {});

double predict_platt(const PlattModel& model, double score);

/// Isotonic regression used directly as the calibrator.
struct DirIsoModel {
    std::vector<double> scores;  // distinct calibration scores
    std::vector<double> fitted;  // nondecreasing fitted values
};

struct DirectIsotonicOptions {
    // Adds a label-1 observation at -inf and a label-0 observation at +inf
    // before fitting, which keeps fitted values away from 0 and 1.
    bool dummy_observations = false;
};

DirIsoModel fit_direct_isotonic(std::span<const double> scores, std::span<const int> labels,
                                const DirectIsotonicOptions& options = {});

// Left-step rule: fitted value at the largest calibration score <= s, or the
// first fitted value when s lies below every calibration score.
double predict_direct(const DirIsoModel& model, double score);

}  // namespace vennabers
