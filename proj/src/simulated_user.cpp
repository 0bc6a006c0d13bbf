#include "reminisce/simulated_user.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace reminisce {

using nlohmann::json;

void SyntheticUserProfile::validate() const {
    auto check_rating = [](int r, const char* what) {
        if (r < 1 || r > 6) throw std::invalid_argument(std::string(what) + " must be within 1..6");
    };
    check_rating(rating_when_preferred, "rating_when_preferred");
    check_rating(rating_otherwise, "rating_otherwise");
    if (rating_jitter < 0) throw std::invalid_argument("rating_jitter must be non-negative");
    if (feature_stddev.size() != kFeatureDim) throw std::invalid_argument("feature_stddev must have 89 entries");
    for (double s : feature_stddev) {
        if (!(s >= 0.0)) throw std::invalid_argument("feature_stddev entries must be non-negative");
    }
    for (const auto& [label, means] : feature_means) {
        if (means.size() != kFeatureDim) throw std::invalid_argument("feature means for '" + label + "' must have 89 entries");
    }
}

SyntheticUserProfile profile_from_json(const json& j) {
    SyntheticUserProfile p;
    if (auto it = j.find("preferred_kind"); it != j.end() && !it->is_null()) p.preferred_kind = parse_kind(it->get<std::string>());
    if (auto it = j.find("preferred_values"); it != j.end()) {
        for (const auto& v : *it) p.preferred_values.insert(parse_attribute_key(v.get<std::string>()));
    }
    p.rating_when_preferred = j.value("rating_when_preferred", p.rating_when_preferred);
    p.rating_otherwise = j.value("rating_otherwise", p.rating_otherwise);
    p.rating_jitter = j.value("rating_jitter", p.rating_jitter);
    p.feature_task = j.value("feature_task", p.feature_task);
    p.seed = j.value("seed", p.seed);
    if (auto it = j.find("feature_stddev"); it != j.end()) {
        p.feature_stddev = it->is_number() ? std::vector<double>(kFeatureDim, it->get<double>()) : it->get<std::vector<double>>();
    }
    if (auto it = j.find("feature_means"); it != j.end()) {
        p.feature_means = it->get<std::map<std::string, std::vector<double>>>();
    }
    // Shorthand: {"separation": 4, "labels": [...], "dims_per_label": 10}
    if (auto it = j.find("feature_separation"); it != j.end()) {
        const auto labels = it->at("labels").get<std::vector<std::string>>();
        p.feature_means = separated_means(labels, it->at("separation").get<double>(), it->value("dims_per_label", std::size_t{10}));
    }
    p.validate();
    return p;
}

json to_json(const SyntheticUserProfile& p) {
    json values = json::array();
    for (const auto& k : p.preferred_values) values.push_back(to_string(k));
    return {{"preferred_kind", p.preferred_kind ? json(to_string(*p.preferred_kind)) : json(nullptr)},
            {"preferred_values", values},
            {"rating_when_preferred", p.rating_when_preferred},
            {"rating_otherwise", p.rating_otherwise},
            {"rating_jitter", p.rating_jitter},
            {"feature_task", p.feature_task},
            {"feature_means", p.feature_means},
            {"feature_stddev", p.feature_stddev},
            {"seed", p.seed}};
}

SyntheticUserProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile '" + path + "'");
    return profile_from_json(json::parse(in));
}

std::map<std::string, std::vector<double>> separated_means(const std::vector<std::string>& labels, double separation,
                                                          std::size_t dims_per_label) {
    if (labels.size() * dims_per_label > kFeatureDim) throw std::invalid_argument("not enough feature dimensions for the label blocks");
    std::map<std::string, std::vector<double>> means;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::vector<double> m(kFeatureDim, 0.0);
        for (std::size_t d = i * dims_per_label; d < (i + 1) * dims_per_label; ++d) m[d] = separation;
        means[labels[i]] = std::move(m);
    }
    return means;
}

MoodRatingEvent respond(const PhotoId& photo, const LifelogNetwork& network, std::optional<AttributeKind> entered_via,
                        const SyntheticUserProfile& profile, Rng& rng, double wall_time) {
    const auto& keys = network.keys_of(photo);
    bool preferred = entered_via && profile.preferred_kind && *entered_via == *profile.preferred_kind;
    for (const auto& k : profile.preferred_values) preferred = preferred || keys.count(k) != 0;
    int rating = preferred ? profile.rating_when_preferred : profile.rating_otherwise;
    if (profile.rating_jitter > 0) {
        const auto span = static_cast<std::size_t>(2 * profile.rating_jitter + 1);
        rating += static_cast<int>(rng.index(span)) - profile.rating_jitter;
    }
    return {std::clamp(rating, 1, 6), wall_time, photo};
}

FeatureVector emit_features(const std::string& label, const SyntheticUserProfile& profile, Rng& rng,
                            std::string participant_id, std::string segment_id) {
    FeatureVector v;
    v.label = label;
    v.participant_id = std::move(participant_id);
    v.segment_id = std::move(segment_id);
    v.values.resize(kFeatureDim);
    const auto it = profile.feature_means.find(label);
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        const double mean = it == profile.feature_means.end() ? 0.0 : it->second[d];
        const double sd = profile.feature_stddev[d];
        v.values[d] = sd == 0.0 ? mean : mean + sd * rng.normal();
    }
    return v;
}

Responder make_responder(const SyntheticUserProfile& profile, std::shared_ptr<Rng> rng) {
    return [profile, rng](const TransitionEvent& event, const Session& session) -> std::optional<MoodRatingEvent> {
        const auto& entered = session.state().entered_by;
        auto it = entered.find(event.photo_id);
        std::optional<AttributeKind> via;
        if (it != entered.end()) via = it->second;
        return respond(event.photo_id, session.network(), via, profile, *rng, event.clock);
    };
}

}  // namespace reminisce
