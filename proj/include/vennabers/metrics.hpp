#pragma once

#include <cstddef>
#include <span>

namespace vennabers {

struct EvalReport {
    double mean_log_loss = 0.0;    // +inf if any observation has infinite loss
    double mean_brier_loss = 0.0;  // always finite, in [0, 4]
    std::size_t n = 0;
    std::size_t infinite_log_losses = 0;
};

// Binary logarithm: -log2 p for y = 1, -log2(1 - p) for y = 0. No clipping,
// so a confident wrong prediction costs +inf. Throws DataError for p outside
// [0, 1] or y outside {0, 1}.
double log_loss(double p, int y);

// 4 (y - p)^2, scaled so that always predicting 1/2 costs 1.
double brier_loss(double p, int y);

EvalReport evaluate(std::span<const double> predictions, std::span<const int> labels);

}  // namespace vennabers
