#include "reminisce/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "reminisce/json_io.hpp"

namespace reminisce {

namespace {

struct SessionOutcome {
    std::size_t distinct = 0;
    RuleSet final_rules;
    std::vector<FeatureRow> features;
};

std::string direction(int previous, int current) {
    if (current > previous) return "up";
    if (current < previous) return "down";
    return "no_change";
}

SessionOutcome simulate(std::shared_ptr<const LifelogNetwork> network, const SweepOptions& options,
                        std::size_t condition_index, std::size_t session_index) {
    SessionConfig config = options.base;
    config.condition = kConditions[condition_index];
    config.seed = Rng::mix(options.seed, session_index);
    const std::uint64_t stream = session_index * kConditions.size() + condition_index;

    std::vector<int> ratings;
    Responder responder;
    if (options.profile) {
        auto user_rng = std::make_shared<Rng>(Rng::mix(options.profile->seed ^ options.seed, stream));
        auto inner = make_responder(*options.profile, user_rng);
        responder = [inner, &ratings](const TransitionEvent& e, const Session& s) {
            auto r = inner(e, s);
            ratings.push_back(r ? r->rating : 0);
            return r;
        };
    }
    const auto log = run_session(config, network, responder);

    SessionOutcome out{distinct_photo_count(log), log.final_rules, {}};
    if (options.collect_features && options.profile) {
        Rng feature_rng(Rng::mix(options.seed ^ 0x5eed5eed5eedULL, stream));
        char participant[32];
        std::snprintf(participant, sizeof participant, "u%03zu", session_index);
        for (std::size_t t = 0; t < log.events.size(); ++t) {
            char segment[64];
            std::snprintf(segment, sizeof segment, "%s_u%03zu_t%02zu", config.condition.label().c_str(), session_index, t);
            FeatureRow row;
            row.segment_id = segment;
            row.participant_id = participant;
            row.labels["four_condition"] = config.condition.label();
            row.labels["activation_flag"] = config.condition.activation_enabled ? "on" : "off";
            row.labels["reward_flag"] = config.condition.reward_enabled ? "on" : "off";
            if (t > 0) row.labels["mood_rating_direction"] = direction(ratings[t - 1], ratings[t]);
            auto it = row.labels.find(options.profile->feature_task);
            const std::string label = it == row.labels.end() ? "no_change" : it->second;
            row.values = emit_features(label, *options.profile, feature_rng).values;
            out.features.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace

SweepResult run_sweep(std::shared_ptr<const LifelogNetwork> network, const SweepOptions& options) {
    if (options.sessions_per_condition < 2) throw std::invalid_argument("a sweep needs at least 2 sessions per condition");
    if (options.collect_features && !options.profile) throw std::invalid_argument("feature collection needs a user profile");
    options.base.validate();

    const std::size_t n = options.sessions_per_condition;
    const std::size_t jobs = n * kConditions.size();
    std::vector<SessionOutcome> outcomes(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) outcomes[j] = simulate(network, options, j / n, j % n);
    };
    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    SweepResult result;
    result.features.label_columns = {"four_condition", "activation_flag", "reward_flag", "mood_rating_direction"};
    std::vector<double> on;
    std::vector<double> off;
    for (std::size_t c = 0; c < kConditions.size(); ++c) {
        ConditionRun run{kConditions[c], {}, {}, {}};
        for (std::size_t i = 0; i < n; ++i) {
            auto& o = outcomes[c * n + i];
            run.distinct_counts.push_back(static_cast<double>(o.distinct));
            run.final_rules.push_back(o.final_rules);
            for (auto& row : o.features) result.features.rows.push_back(std::move(row));
        }
        run.summary = summarize(run.distinct_counts);
        auto& bucket = kConditions[c].activation_enabled ? on : off;
        bucket.insert(bucket.end(), run.distinct_counts.begin(), run.distinct_counts.end());
        result.conditions.push_back(std::move(run));
    }
    result.activation_on = summarize(on);
    result.activation_off = summarize(off);
    result.activation_test = welch_t_test(on, off);
    return result;
}

nlohmann::json to_json(const SweepResult& result) {
    using nlohmann::json;
    json conditions = json::array();
    for (const auto& c : result.conditions) {
        conditions.push_back({{"condition", c.condition.label()},
                              {"activation_enabled", c.condition.activation_enabled},
                              {"reward_enabled", c.condition.reward_enabled},
                              {"distinct_photos_mean", c.summary.mean},
                              {"distinct_photos_stddev", c.summary.stddev},
                              {"sessions", c.summary.n},
                              {"distinct_photos", c.distinct_counts}});
    }
    const bool direction_ok = result.activation_on.mean < result.activation_off.mean;
    return {{"conditions", conditions},
            {"activation_factor",
             {{"mean_on", result.activation_on.mean},
              {"mean_off", result.activation_off.mean},
              {"welch_t", result.activation_test.t},
              {"welch_df", result.activation_test.df},
              {"p_value", result.activation_test.p_two_sided},
              {"direction_on_lower", direction_ok}}}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "condition,activation,reward,mean,stddev,n\n";
    char buf[160];
    for (const auto& c : result.conditions) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.6f,%.6f,%zu\n", c.condition.label().c_str(),
                      c.condition.activation_enabled ? 1 : 0, c.condition.reward_enabled ? 1 : 0, c.summary.mean,
                      c.summary.stddev, c.summary.n);
        out << buf;
    }
}

}  // namespace reminisce
