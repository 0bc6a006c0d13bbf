#include "reminisce/validation.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "reminisce/rng.hpp"

namespace reminisce {

std::vector<std::size_t> canonical_order(const Dataset& data) {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> label_of(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) label_of[i] = data.label_index(data.vectors[i].label);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& va = data.vectors[a];
        const auto& vb = data.vectors[b];
        if (label_of[a] != label_of[b]) return label_of[a] < label_of[b];
        if (va.segment_id != vb.segment_id) return va.segment_id < vb.segment_id;
        if (va.participant_id != vb.participant_id) return va.participant_id < vb.participant_id;
        return va.values < vb.values;
    });
    return order;
}

std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross-validation needs k >= 2");
    const auto counts = data.label_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0 && counts[c] < k) {
            throw std::invalid_argument("label '" + data.label_set[c] + "' has " + std::to_string(counts[c]) +
                                        " samples, fewer than k=" + std::to_string(k));
        }
    }
    const auto order = canonical_order(data);
    std::vector<std::size_t> fold(data.size(), 0);
    Rng rng(seed);
    std::size_t offset = 0;
    std::size_t start = 0;
    while (start < order.size()) {
        const auto& label = data.vectors[order[start]].label;
        std::size_t end = start;
        while (end < order.size() && data.vectors[order[end]].label == label) ++end;
        std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(end));
        for (std::size_t i = group.size(); i > 1; --i) std::swap(group[i - 1], group[rng.index(i)]);
        for (std::size_t p = 0; p < group.size(); ++p) fold[group[p]] = (offset + p) % k;
        offset = (offset + group.size()) % k;
        start = end;
    }
    return fold;
}

CvResult cross_validate(const Dataset& data, const SvmConfig& config, std::size_t k, std::uint64_t seed) {
    config.validate();
    if (data.empty()) throw std::invalid_argument("cross-validation on an empty dataset");
    const auto fold = stratified_folds(data, k, seed);
    const auto order = canonical_order(data);

    CvResult result;
    result.confusion = ConfusionMatrix(data.label_set);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> test_rows;
        for (auto i : order) (fold[i] == f ? test_rows : train_rows).push_back(i);
        if (test_rows.empty()) continue;
        auto [train, test] = standardize(data.subset(train_rows), data.subset(test_rows));
        const auto model = MulticlassSvm::train(train, config);
        for (const auto& v : test.vectors) result.confusion.add(model.predict(v.values), v.label);
    }
    result.accuracy = accuracy(result.confusion);
    result.f_measure = f_measure(result.confusion);
    return result;
}

GridSearchSpace GridSearchSpace::defaults() {
    static const std::vector<double> kC{0.001, 0.01, 0.1, 1, 10, 100};
    static const std::vector<double> kGamma{0.0001, 0.001, 0.01, 0.1, 1, 10};
    GridSearchSpace space;
    for (double c : kC) space.cells.push_back({KernelType::linear, c, 1.0});
    for (double c : kC) {
        for (double g : kGamma) space.cells.push_back({KernelType::rbf, c, g});
    }
    return space;
}

bool simpler_config(const SvmConfig& a, const SvmConfig& b) {
    if (a.kernel != b.kernel) return a.kernel == KernelType::linear;
    if (a.C != b.C) return a.C < b.C;
    if (a.kernel == KernelType::rbf && a.gamma != b.gamma) return a.gamma < b.gamma;
    return false;
}

GridSearchResult grid_search(const Dataset& data, const GridSearchSpace& space, std::size_t k, std::uint64_t seed,
                             unsigned threads) {
    if (space.cells.empty()) throw std::invalid_argument("grid search space is empty");
    GridSearchResult out;
    out.cells.resize(space.cells.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < space.cells.size(); c = next++) {
            auto& cell = out.cells[c];
            cell.config = space.cells[c];
            try {
                cell.result = cross_validate(data, cell.config, k, seed);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(space.cells.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    const CellScore* best = nullptr;
    for (const auto& cell : out.cells) {
        if (!cell.result) continue;
        if (!best || cell.result->accuracy > best->result->accuracy ||
            (cell.result->accuracy == best->result->accuracy && simpler_config(cell.config, best->config))) {
            best = &cell;
        }
    }
    if (!best) {
        throw std::runtime_error("every grid-search cell failed; first error: " + out.cells.front().error);
    }
    out.best = best->config;
    out.best_result = *best->result;
    return out;
}

}  // namespace reminisce
