#include "reminisce/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace reminisce {

void validate_feature_vector(const FeatureVector& v, std::size_t expected_dim) {
    if (v.values.size() != expected_dim) {
        throw std::invalid_argument("feature vector '" + v.segment_id + "' has " + std::to_string(v.values.size()) +
                                    " values, expected " + std::to_string(expected_dim));
    }
    for (double x : v.values) {
        if (!std::isfinite(x)) throw std::invalid_argument("feature vector '" + v.segment_id + "' has a non-finite value");
    }
}

Standardizer Standardizer::fit(std::span<const FeatureVector> train) {
    if (train.empty()) throw std::invalid_argument("cannot fit standardization on an empty split");
    const std::size_t dim = train.front().values.size();
    Standardizer s;
    s.means_.assign(dim, 0.0);
    s.stddevs_.assign(dim, 0.0);
    const double n = static_cast<double>(train.size());
    for (const auto& v : train) {
        if (v.values.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");
        for (std::size_t d = 0; d < dim; ++d) s.means_[d] += v.values[d];
    }
    for (auto& m : s.means_) m /= n;
    for (const auto& v : train) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double dev = v.values[d] - s.means_[d];
            s.stddevs_[d] += dev * dev;
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        s.stddevs_[d] = std::sqrt(s.stddevs_[d] / n);
        if (!(s.stddevs_[d] > 1e-12 * std::max(1.0, std::abs(s.means_[d])))) {
            s.stddevs_[d] = 0.0;
            s.zero_variance_.push_back(d);
        }
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    if (x.size() != means_.size()) throw std::invalid_argument("dimension mismatch in standardization");
    std::vector<double> out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        out[d] = stddevs_[d] == 0.0 ? 0.0 : (x[d] - means_[d]) / stddevs_[d];
    }
    return out;
}

void Standardizer::apply(std::vector<FeatureVector>& vectors) const {
    for (auto& v : vectors) v.values = apply(v.values);
}

Dataset Dataset::from_vectors(std::vector<FeatureVector> vectors, const std::vector<std::string>& label_order) {
    Dataset ds;
    std::set<std::string> present;
    for (const auto& v : vectors) present.insert(v.label);
    if (label_order.empty()) {
        ds.label_set.assign(present.begin(), present.end());
    } else {
        for (const auto& l : label_order) {
            if (present.count(l)) ds.label_set.push_back(l);
        }
        for (const auto& l : present) {
            if (std::find(label_order.begin(), label_order.end(), l) == label_order.end()) {
                throw std::invalid_argument("label '" + l + "' is not in the declared label set");
            }
        }
    }
    if (!vectors.empty()) {
        const auto dim = vectors.front().values.size();
        for (const auto& v : vectors) validate_feature_vector(v, dim);
    }
    ds.vectors = std::move(vectors);
    return ds;
}

std::size_t Dataset::label_index(const std::string& label) const {
    auto it = std::find(label_set.begin(), label_set.end(), label);
    if (it == label_set.end()) throw std::out_of_range("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - label_set.begin());
}

std::vector<std::size_t> Dataset::label_counts() const {
    std::vector<std::size_t> counts(label_set.size(), 0);
    for (const auto& v : vectors) ++counts[label_index(v.label)];
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.label_set = label_set;
    out.standardization = standardization;
    out.vectors.reserve(indices.size());
    for (auto i : indices) out.vectors.push_back(vectors.at(i));
    return out;
}

std::pair<Dataset, Dataset> standardize(const Dataset& train, const Dataset& apply_to) {
    auto transform = Standardizer::fit(train.vectors);
    if (!transform.zero_variance_dims().empty()) {
        spdlog::warn("{} zero-variance feature dimension(s) mapped to 0 (first: {})",
                     transform.zero_variance_dims().size(), transform.zero_variance_dims().front());
    }
    Dataset a = train;
    Dataset b = apply_to;
    transform.apply(a.vectors);
    transform.apply(b.vectors);
    a.standardization = transform;
    b.standardization = transform;
    return {std::move(a), std::move(b)};
}

}  // namespace reminisce
