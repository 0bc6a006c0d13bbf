#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace reminisce {

// Rows are predicted labels, columns are true labels.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> labels);
    ConfusionMatrix(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> counts);

    void add(std::size_t predicted, std::size_t truth, std::size_t n = 1);
    void add(const std::string& predicted, const std::string& truth);

    std::size_t at(std::size_t predicted, std::size_t truth) const { return counts_.at(predicted).at(truth); }
    std::size_t size() const { return labels_.size(); }
    std::size_t total() const;
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<std::size_t>>& counts() const { return counts_; }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<std::size_t>> counts_;
};

// (TP + TN) / total, generalised to trace / total.
double accuracy(const ConfusionMatrix& cm);

// One-vs-rest F of class `c`: 2PR / (P + R); 0 (with a warning) when P + R = 0.
double class_f_measure(const ConfusionMatrix& cm, std::size_t c);

// Binary: F of the positive (first) class. More classes: macro average.
double f_measure(const ConfusionMatrix& cm);

}  // namespace reminisce
