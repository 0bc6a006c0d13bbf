#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "reminisce/session.hpp"
#include "reminisce/simulated_user.hpp"
#include "reminisce/stats.hpp"
#include "reminisce/tasks.hpp"

namespace reminisce {

// The four cells of the 2x2 design in report order.
inline constexpr std::array<SessionCondition, 4> kConditions{
    SessionCondition{false, false}, SessionCondition{false, true}, SessionCondition{true, false},
    SessionCondition{true, true}};

struct SweepOptions {
    std::size_t sessions_per_condition = 40;
    std::uint64_t seed = 0;
    SessionConfig base;  // condition and seed are overwritten per session
    std::optional<SyntheticUserProfile> profile;
    bool collect_features = false;  // one feature row per tick; needs a profile
    unsigned threads = 0;
};

struct ConditionRun {
    SessionCondition condition;
    std::vector<double> distinct_counts;
    std::vector<RuleSet> final_rules;
    SampleSummary summary;
};

struct SweepResult {
    std::vector<ConditionRun> conditions;  // kConditions order
    SampleSummary activation_on;
    SampleSummary activation_off;
    WelchResult activation_test;  // on vs off, reward levels pooled
    FeatureTable features;
};

// Session i of every condition shares the seed derived from (seed, i), so the
// four conditions see the same initial photos. Throws when sessions_per_condition < 2.
SweepResult run_sweep(std::shared_ptr<const LifelogNetwork> network, const SweepOptions& options);

nlohmann::json to_json(const SweepResult& result);
// condition,activation,reward,mean,stddev,n
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace reminisce
