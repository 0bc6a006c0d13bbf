#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "reminisce/dataset.hpp"
#include "reminisce/lifelog.hpp"
#include "reminisce/rng.hpp"
#include "reminisce/session.hpp"

namespace reminisce {

// Synthetic participant: rates photos and produces class-conditional
// Gaussian response features so the loop can run without human data.
struct SyntheticUserProfile {
    // A photo counts as preferred when it carries one of `preferred_values`, or
    // when it was reached through `preferred_kind`.
    std::optional<AttributeKind> preferred_kind;
    std::set<AttributeKey> preferred_values;
    int rating_when_preferred = 6;
    int rating_otherwise = 2;
    int rating_jitter = 0;

    // Label scheme the feature means are keyed by (a task name such as "four_condition").
    std::string feature_task = "four_condition";
    std::map<std::string, std::vector<double>> feature_means;  // label -> kFeatureDim means
    std::vector<double> feature_stddev = std::vector<double>(kFeatureDim, 1.0);
    std::uint64_t seed = 0;

    void validate() const;
};

SyntheticUserProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticUserProfile& profile);
SyntheticUserProfile load_profile(const std::string& path);

// Means that put each label `separation` stddevs up on its own block of
// `dims_per_label` dimensions (label i uses dims [i*block, (i+1)*block)).
std::map<std::string, std::vector<double>> separated_means(const std::vector<std::string>& labels, double separation,
                                                          std::size_t dims_per_label = 10);

MoodRatingEvent respond(const PhotoId& photo, const LifelogNetwork& network, std::optional<AttributeKind> entered_via,
                        const SyntheticUserProfile& profile, Rng& rng, double wall_time = 0.0);

// One vector drawn from the class-conditional distribution of `label`
// (zero means when the profile has none for it).
FeatureVector emit_features(const std::string& label, const SyntheticUserProfile& profile, Rng& rng,
                            std::string participant_id = {}, std::string segment_id = {});

// Rates the displayed photo after every tick.
Responder make_responder(const SyntheticUserProfile& profile, std::shared_ptr<Rng> rng);

}  // namespace reminisce
