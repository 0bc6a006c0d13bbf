#pragma once

#include <cstddef>
#include <span>

namespace reminisce {

struct SampleSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n - 1)
    std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> values);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_two_sided = 1.0;
};

// Unequal-variance two-sample t test. Needs n >= 2 in each group.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Goodness of fit of observed counts against a uniform expectation.
ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts);

}  // namespace reminisce
