#include "reminisce/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace reminisce {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size(), std::vector<std::size_t>(labels_.size(), 0)) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels, std::vector<std::vector<std::size_t>> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
    if (counts_.size() != labels_.size()) throw std::invalid_argument("confusion matrix must be square over its labels");
    for (const auto& row : counts_) {
        if (row.size() != labels_.size()) throw std::invalid_argument("confusion matrix must be square over its labels");
    }
}

void ConfusionMatrix::add(std::size_t predicted, std::size_t truth, std::size_t n) {
    counts_.at(predicted).at(truth) += n;
}

void ConfusionMatrix::add(const std::string& predicted, const std::string& truth) {
    auto index = [this](const std::string& l) {
        auto it = std::find(labels_.begin(), labels_.end(), l);
        if (it == labels_.end()) throw std::out_of_range("label '" + l + "' not in confusion matrix");
        return static_cast<std::size_t>(it - labels_.begin());
    };
    add(index(predicted), index(truth));
}

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts_) {
        for (auto c : row) n += c;
    }
    return n;
}

double accuracy(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
    std::size_t correct = 0;
    for (std::size_t c = 0; c < cm.size(); ++c) correct += cm.at(c, c);
    return static_cast<double>(correct) / static_cast<double>(total);
}

double class_f_measure(const ConfusionMatrix& cm, std::size_t c) {
    if (cm.total() == 0) throw std::invalid_argument("F-measure of an empty confusion matrix");
    std::size_t tp = cm.at(c, c);
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t o = 0; o < cm.size(); ++o) {
        if (o == c) continue;
        fp += cm.at(c, o);
        fn += cm.at(o, c);
    }
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (precision + recall == 0.0) {
        spdlog::warn("precision + recall is 0 for class '{}'; its F-measure is set to 0", cm.labels().at(c));
        return 0.0;
    }
    return 2.0 * precision * recall / (precision + recall);
}

double f_measure(const ConfusionMatrix& cm) {
    if (cm.size() == 2) return class_f_measure(cm, 0);
    double sum = 0.0;
    for (std::size_t c = 0; c < cm.size(); ++c) sum += class_f_measure(cm, c);
    return sum / static_cast<double>(cm.size());
}

}  // namespace reminisce
