#include "reminisce/json_io.hpp"

namespace reminisce {

json to_json(const ActivationParams& p) {
    return {{"decay", p.decay},
            {"noise_scale", p.noise_scale},
            {"retrieval_threshold", p.retrieval_threshold},
            {"max_associative_strength", p.max_associative_strength},
            {"source_weight", p.source_weight},
            {"never_presented_offset", p.never_presented_offset}};
}

json to_json(const UtilityParams& p) {
    return {{"learning_rate", p.learning_rate},
            {"selection_noise", p.selection_noise},
            {"initial_utility", p.initial_utility}};
}

json to_json(const SessionConfig& c) {
    return {{"activation_enabled", c.condition.activation_enabled},
            {"reward_enabled", c.condition.reward_enabled},
            {"tick_seconds", c.tick_seconds},
            {"session_duration", c.session_duration},
            {"activation", to_json(c.activation)},
            {"utility", to_json(c.utility)},
            {"seed", c.seed},
            {"initial_photo", c.initial_photo ? json(*c.initial_photo) : json("random")}};
}

json to_json(const ActivationBreakdown& b) {
    return {{"base_level", b.base_level}, {"spreading", b.spreading}, {"noise", b.noise}, {"total", b.total}};
}

json to_json(const TransitionEvent& e) {
    json rewards = json::array();
    for (const auto& r : e.rewards) {
        rewards.push_back({{"kind", to_string(r.kind)},
                           {"rating", r.rating},
                           {"reward", r.reward},
                           {"target_photo", r.target_photo}});
    }
    return {{"tick_index", e.tick_index},
            {"clock", e.clock},
            {"selected_kind", e.selected_kind ? json(to_string(*e.selected_kind)) : json(nullptr)},
            {"outcome", to_string(e.outcome)},
            {"photo_id", e.photo_id},
            {"activation_breakdown", e.activation ? to_json(*e.activation) : json(nullptr)},
            {"reward_applied", rewards},
            {"ratings_received", e.ratings_received}};
}

json to_json(const RuleSet& rules) {
    json out = json::object();
    for (const auto& r : rules.rules()) out[std::string(to_string(r.kind))] = r.utility;
    return out;
}

json to_json(const SessionLog& log) {
    json events = json::array();
    for (const auto& e : log.events) events.push_back(to_json(e));
    return {{"header",
             {{"config", to_json(log.config)},
              {"seed", log.config.seed},
              {"network_hash", log.network_hash},
              {"condition", log.config.condition.label()}}},
            {"initial_photo", log.initial_photo},
            {"events", events},
            {"final_utilities", to_json(log.final_rules)}};
}

ActivationParams activation_params_from_json(const json& j, ActivationParams p) {
    p.decay = j.value("decay", p.decay);
    p.noise_scale = j.value("noise_scale", p.noise_scale);
    p.retrieval_threshold = j.value("retrieval_threshold", p.retrieval_threshold);
    p.max_associative_strength = j.value("max_associative_strength", p.max_associative_strength);
    p.source_weight = j.value("source_weight", p.source_weight);
    p.never_presented_offset = j.value("never_presented_offset", p.never_presented_offset);
    return p;
}

UtilityParams utility_params_from_json(const json& j, UtilityParams p) {
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.selection_noise = j.value("selection_noise", p.selection_noise);
    p.initial_utility = j.value("initial_utility", p.initial_utility);
    return p;
}

SessionConfig session_config_from_json(const json& j, SessionConfig c) {
    c.condition.activation_enabled = j.value("activation_enabled", c.condition.activation_enabled);
    c.condition.reward_enabled = j.value("reward_enabled", c.condition.reward_enabled);
    c.tick_seconds = j.value("tick_seconds", c.tick_seconds);
    c.session_duration = j.value("session_duration", c.session_duration);
    if (j.contains("activation")) c.activation = activation_params_from_json(j["activation"], c.activation);
    if (j.contains("utility")) c.utility = utility_params_from_json(j["utility"], c.utility);
    c.seed = j.value("seed", c.seed);
    if (auto it = j.find("initial_photo"); it != j.end()) {
        if (it->is_null() || *it == "random") {
            c.initial_photo.reset();
        } else {
            c.initial_photo = it->get<std::string>();
        }
    }
    return c;
}

TransitionEvent transition_event_from_json(const json& j) {
    TransitionEvent e;
    e.tick_index = j.at("tick_index").get<std::size_t>();
    e.clock = j.at("clock").get<double>();
    if (!j.at("selected_kind").is_null()) e.selected_kind = parse_kind(j["selected_kind"].get<std::string>());
    e.outcome = parse_outcome(j.at("outcome").get<std::string>());
    e.photo_id = j.at("photo_id").get<std::string>();
    if (const auto& a = j.at("activation_breakdown"); !a.is_null()) {
        e.activation = ActivationBreakdown{a.at("base_level").get<double>(), a.at("spreading").get<double>(),
                                           a.at("noise").get<double>(), a.at("total").get<double>()};
    }
    for (const auto& r : j.at("reward_applied")) {
        e.rewards.push_back({parse_kind(r.at("kind").get<std::string>()), r.at("rating").get<int>(),
                             r.at("reward").get<double>(), r.at("target_photo").get<std::string>()});
    }
    e.ratings_received = j.value("ratings_received", std::size_t{0});
    return e;
}

SessionLog session_log_from_json(const json& j) {
    SessionLog log;
    const auto& header = j.at("header");
    log.config = session_config_from_json(header.at("config"));
    log.network_hash = header.at("network_hash").get<std::string>();
    log.initial_photo = j.at("initial_photo").get<std::string>();
    for (const auto& e : j.at("events")) log.events.push_back(transition_event_from_json(e));
    log.final_rules = RuleSet(log.config.utility.initial_utility);
    for (const auto& [name, value] : j.at("final_utilities").items()) log.final_rules[parse_kind(name)].utility = value.get<double>();
    return log;
}

json network_summary(const LifelogNetwork& network) {
    std::map<std::size_t, std::size_t> fan_histogram;
    json per_kind = json::object();
    for (auto kind : kAllKinds) per_kind[std::string(to_string(kind))] = 0;
    for (const auto& [key, members] : network.edges()) {
        ++fan_histogram[members.size()];
        per_kind[std::string(to_string(key.kind))] = per_kind[std::string(to_string(key.kind))].get<int>() + 1;
    }
    json fans = json::array();
    for (const auto& [fan, n] : fan_histogram) fans.push_back({{"fan", fan}, {"keys", n}});
    const auto& report = network.report();
    return {{"photos", network.size()},
            {"attribute_keys", network.edges().size()},
            {"keys_per_kind", per_kind},
            {"components", report.component_count},
            {"component_sizes", report.component_sizes},
            {"isolated", report.isolated},
            {"fan_histogram", fans},
            {"network_hash", network.content_hash()}};
}

}  // namespace reminisce
