#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reminisce {

// 88 prosodic slots followed by one sentiment slot.
inline constexpr std::size_t kProsodicDim = 88;
inline constexpr std::size_t kFeatureDim = kProsodicDim + 1;

struct FeatureVector {
    std::vector<double> values;
    std::string label;
    std::string participant_id;
    std::string segment_id;
};

// Throws std::invalid_argument on wrong length or non-finite entries.
void validate_feature_vector(const FeatureVector& v, std::size_t expected_dim = kFeatureDim);

// Per-dimension z-scoring fitted on one split and applied to others.
class Standardizer {
public:
    static Standardizer fit(std::span<const FeatureVector> train);

    void apply(std::vector<FeatureVector>& vectors) const;
    std::vector<double> apply(std::span<const double> x) const;

    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& stddevs() const { return stddevs_; }
    // Dimensions constant on the fitting split; they map to 0.
    const std::vector<std::size_t>& zero_variance_dims() const { return zero_variance_; }

private:
    std::vector<double> means_;
    std::vector<double> stddevs_;
    std::vector<std::size_t> zero_variance_;
};

struct Dataset {
    std::vector<FeatureVector> vectors;
    std::vector<std::string> label_set;  // canonical label order; the first is the positive class
    std::optional<Standardizer> standardization;

    // label_set from `label_order` filtered to labels present, else sorted unique labels.
    static Dataset from_vectors(std::vector<FeatureVector> vectors, const std::vector<std::string>& label_order = {});

    std::size_t size() const { return vectors.size(); }
    bool empty() const { return vectors.empty(); }
    std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().values.size(); }
    std::size_t label_index(const std::string& label) const;  // throws std::out_of_range
    std::vector<std::size_t> label_counts() const;

    // Rows at `indices`, same label_set.
    Dataset subset(std::span<const std::size_t> indices) const;
};

// Fits on `train` only and transforms both; zero-variance dimensions are
// reported through spdlog and mapped to 0.
std::pair<Dataset, Dataset> standardize(const Dataset& train, const Dataset& apply_to);

}  // namespace reminisce
