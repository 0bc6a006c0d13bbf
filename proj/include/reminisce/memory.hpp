#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "reminisce/lifelog.hpp"
#include "reminisce/rng.hpp"

namespace reminisce {

// Session-clock times (seconds) at which a chunk was displayed or recalled.
class PresentationHistory {
public:
    PresentationHistory() = default;
    explicit PresentationHistory(std::vector<double> times);  // must be strictly increasing

    void append(double time);  // throws std::invalid_argument unless time > last()
    bool empty() const { return times_.empty(); }
    std::size_t count() const { return times_.size(); }
    double last() const { return times_.back(); }
    std::span<const double> times() const { return times_; }

private:
    std::vector<double> times_;
};

struct ActivationParams {
    double decay = 0.5;
    double noise_scale = 0.25;
    double retrieval_threshold = -2.0;
    double max_associative_strength = 2.0;
    double source_weight = 1.0;
    // Base level used for a chunk that has never been displayed.
    double never_presented_offset = -1.0;

    void validate() const;
};

struct ActivationBreakdown {
    double base_level = 0.0;
    double spreading = 0.0;
    double noise = 0.0;
    double total = 0.0;
};

class ActivationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ln(sum_j (now - t_j)^-d). nullopt when the history is empty (never presented);
// throws ActivationError when now is not strictly after every presentation.
std::optional<double> base_level_activation(const PresentationHistory& history, double now, double decay);

// Fan-effect association from the context keys to the chunk:
// sum over shared keys k of W * max(0, S - ln(fan_k)).
double spreading_activation(const std::set<AttributeKey>& chunk_keys, const std::set<AttributeKey>& context_keys,
                            const ActivationParams& params, const LifelogNetwork& network);

double noise_sample(double scale, Rng& rng);

using HistoryMap = std::map<PhotoId, PresentationHistory>;

ActivationBreakdown compute_activation(const PhotoId& chunk, const std::set<AttributeKey>& context_keys,
                                       const HistoryMap& histories, double now, const ActivationParams& params,
                                       const LifelogNetwork& network, Rng& rng);

struct RetrievalResult {
    std::optional<PhotoId> photo;  // nullopt: retrieval failure
    // Breakdown of the most active candidate (retrieved or not); only with activation enabled.
    std::optional<ActivationBreakdown> best;
    std::optional<PhotoId> best_candidate;

    bool ok() const { return photo.has_value(); }
};

// Chooses among candidates sharing the selected attribute with the context photo.
// Activation enabled: highest total activation at or above threshold, ties to the
// smallest photo_id. Activation disabled: uniform random candidate.
RetrievalResult retrieve(std::span<const PhotoId> candidates, const PhotoId& context_photo, const HistoryMap& histories,
                         double now, const ActivationParams& params, bool activation_enabled,
                         const LifelogNetwork& network, Rng& rng);

}  // namespace reminisce
