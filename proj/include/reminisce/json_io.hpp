#pragma once

#include <json.hpp>

#include "reminisce/lifelog.hpp"
#include "reminisce/session.hpp"

namespace reminisce {

using nlohmann::json;

json to_json(const ActivationParams& p);
json to_json(const UtilityParams& p);
json to_json(const SessionConfig& c);
json to_json(const ActivationBreakdown& b);
json to_json(const TransitionEvent& e);
json to_json(const RuleSet& rules);
json to_json(const SessionLog& log);

// Missing fields keep their defaults; unknown fields are ignored.
ActivationParams activation_params_from_json(const json& j, ActivationParams base = {});
UtilityParams utility_params_from_json(const json& j, UtilityParams base = {});
SessionConfig session_config_from_json(const json& j, SessionConfig base = {});
TransitionEvent transition_event_from_json(const json& j);
SessionLog session_log_from_json(const json& j);

json network_summary(const LifelogNetwork& network);

}  // namespace reminisce
