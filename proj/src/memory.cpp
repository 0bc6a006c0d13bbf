#include "reminisce/memory.hpp"

#include <algorithm>
#include <cmath>

namespace reminisce {

PresentationHistory::PresentationHistory(std::vector<double> times) {
    for (double t : times) append(t);
}

void PresentationHistory::append(double time) {
    if (!std::isfinite(time)) throw std::invalid_argument("presentation time must be finite");
    if (!times_.empty() && !(time > times_.back())) {
        throw std::invalid_argument("presentation times must be strictly increasing");
    }
    times_.push_back(time);
}

void ActivationParams::validate() const {
    if (!(decay > 0.0)) throw std::invalid_argument("decay must be positive");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("activation noise scale must be non-negative");
}

std::optional<double> base_level_activation(const PresentationHistory& history, double now, double decay) {
    if (history.empty()) return std::nullopt;
    double sum = 0.0;
    for (double t : history.times()) {
        const double lag = now - t;
        if (!(lag > 0.0)) {
            throw ActivationError("base-level activation needs now > every presentation time");
        }
        sum += std::pow(lag, -decay);
    }
    return std::log(sum);
}

double spreading_activation(const std::set<AttributeKey>& chunk_keys, const std::set<AttributeKey>& context_keys,
                            const ActivationParams& params, const LifelogNetwork& network) {
    double total = 0.0;
    for (const auto& key : context_keys) {
        if (!chunk_keys.count(key)) continue;
        const auto fan = static_cast<double>(std::max<std::size_t>(network.fan(key), 1));
        total += params.source_weight * std::max(0.0, params.max_associative_strength - std::log(fan));
    }
    return total;
}

double noise_sample(double scale, Rng& rng) {
    if (scale < 0.0) throw std::invalid_argument("noise scale must be non-negative");
    return rng.logistic(scale);
}

ActivationBreakdown compute_activation(const PhotoId& chunk, const std::set<AttributeKey>& context_keys,
                                       const HistoryMap& histories, double now, const ActivationParams& params,
                                       const LifelogNetwork& network, Rng& rng) {
    ActivationBreakdown b;
    std::optional<double> base;
    if (auto it = histories.find(chunk); it != histories.end()) base = base_level_activation(it->second, now, params.decay);
    b.base_level = base.value_or(params.never_presented_offset);
    b.spreading = spreading_activation(network.keys_of(chunk), context_keys, params, network);
    b.noise = noise_sample(params.noise_scale, rng);
    b.total = b.base_level + b.spreading + b.noise;
    return b;
}

RetrievalResult retrieve(std::span<const PhotoId> candidates, const PhotoId& context_photo, const HistoryMap& histories,
                         double now, const ActivationParams& params, bool activation_enabled,
                         const LifelogNetwork& network, Rng& rng) {
    RetrievalResult result;
    if (candidates.empty()) return result;

    std::vector<PhotoId> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    if (!activation_enabled) {
        result.photo = ordered[rng.index(ordered.size())];
        return result;
    }

    const auto& context_keys = network.keys_of(context_photo);
    for (const auto& id : ordered) {
        const auto b = compute_activation(id, context_keys, histories, now, params, network, rng);
        // Strict comparison over sorted ids keeps the smallest id on ties.
        if (!result.best || b.total > result.best->total) {
            result.best = b;
            result.best_candidate = id;
        }
    }
    if (result.best->total >= params.retrieval_threshold) result.photo = result.best_candidate;
    return result;
}

}  // namespace reminisce
