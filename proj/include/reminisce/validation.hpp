#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reminisce/dataset.hpp"
#include "reminisce/metrics.hpp"
#include "reminisce/svm.hpp"

namespace reminisce {

struct CvResult {
    double accuracy = 0.0;
    double f_measure = 0.0;
    ConfusionMatrix confusion;  // pooled out-of-fold predictions
};

// Row order in which folds and training subsets are built: by label, then
// segment_id, participant_id and values. Independent of the input order.
std::vector<std::size_t> canonical_order(const Dataset& data);

// Fold index for every row. Stratified: each label's rows are shuffled under
// `seed` from canonical order and dealt round-robin. Throws std::invalid_argument
// naming any label with fewer than k rows.
std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed);

// Standardization is re-fitted on each fold's training rows.
CvResult cross_validate(const Dataset& data, const SvmConfig& config, std::size_t k = 5, std::uint64_t seed = 0);

struct GridSearchSpace {
    std::vector<SvmConfig> cells;

    // linear: C in {1e-3 .. 1e2}; rbf: the same C x gamma in {1e-4 .. 10}.
    static GridSearchSpace defaults();
};

struct CellScore {
    SvmConfig config;
    std::optional<CvResult> result;
    std::string error;  // non-empty when the cell failed
};

struct GridSearchResult {
    SvmConfig best;
    CvResult best_result;
    std::vector<CellScore> cells;  // in space order
};

// True when `a` wins over `b` at equal accuracy: linear before rbf, then smaller C, then smaller gamma.
bool simpler_config(const SvmConfig& a, const SvmConfig& b);

// Highest CV accuracy, ties by simpler_config. Failed cells are kept with
// their error; throws std::runtime_error only when every cell fails.
GridSearchResult grid_search(const Dataset& data, const GridSearchSpace& space, std::size_t k = 5,
                             std::uint64_t seed = 0, unsigned threads = 0);

}  // namespace reminisce
