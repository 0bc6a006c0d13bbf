#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "reminisce/lifelog.hpp"
#include "reminisce/memory.hpp"
#include "reminisce/procedural.hpp"
#include "reminisce/rng.hpp"

namespace reminisce {

// One cell of the 2x2 design: activation-biased retrieval and mood-driven reward.
struct SessionCondition {
    bool activation_enabled = true;
    bool reward_enabled = true;

    std::string label() const;  // "A0R0", "A0R1", "A1R0", "A1R1"
    bool operator==(const SessionCondition&) const = default;
};

struct SessionConfig {
    SessionCondition condition;
    double tick_seconds = 11.0;
    double session_duration = 300.0;
    ActivationParams activation;
    UtilityParams utility;
    std::uint64_t seed = 0;
    std::optional<PhotoId> initial_photo;  // nullopt: uniform random under the seed

    void validate() const;
    std::size_t tick_count() const;
};

enum class TransitionOutcome { switched, retrieval_failed, same_photo };

std::string_view to_string(TransitionOutcome outcome);
TransitionOutcome parse_outcome(std::string_view text);

struct MoodRatingEvent {
    int rating = 0;
    double wall_time = 0.0;
    PhotoId target_photo;
};

// A rating that changed a rule utility at the start of a tick.
struct AppliedReward {
    AttributeKind kind = AttributeKind::person;
    int rating = 0;
    double reward = 0.0;
    PhotoId target_photo;
};

struct TransitionEvent {
    std::size_t tick_index = 0;
    double clock = 0.0;  // session time at which the tick's display takes effect
    std::optional<AttributeKind> selected_kind;
    TransitionOutcome outcome = TransitionOutcome::retrieval_failed;
    PhotoId photo_id;  // photo displayed after this tick
    std::optional<ActivationBreakdown> activation;
    std::vector<AppliedReward> rewards;
    std::size_t ratings_received = 0;
};

// Ordered, thread-safe hand-over of ratings from the UI thread to the tick loop.
class RatingQueue {
public:
    void push(MoodRatingEvent event);
    std::vector<MoodRatingEvent> drain();
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::deque<MoodRatingEvent> queue_;
};

struct SessionState {
    double clock = 0.0;
    PhotoId current_photo;
    RuleSet rules;
    HistoryMap histories;
    // Rule that most recently retrieved each photo; rewards for a photo credit this rule.
    std::map<PhotoId, AttributeKind> entered_by;
    std::vector<TransitionEvent> log;
};

struct SessionLog {
    SessionConfig config;
    std::string network_hash;
    PhotoId initial_photo;
    std::vector<TransitionEvent> events;
    RuleSet final_rules;
};

// Runs the stimulus/response loop for one participant over a shared network.
// tick() and the accessors are single-owner; enqueue_rating() may be called
// from any thread.
class Session {
public:
    Session(SessionConfig config, std::shared_ptr<const LifelogNetwork> network);

    const SessionConfig& config() const { return config_; }
    const SessionState& state() const { return state_; }
    const LifelogNetwork& network() const { return *network_; }
    const PhotoId& initial_photo() const { return initial_photo_; }

    bool finished() const { return state_.log.size() >= config_.tick_count(); }
    std::size_t next_tick_index() const { return state_.log.size(); }
    double remaining_seconds() const;

    // Queues a rating for the currently displayed photo (or `target` when given).
    // Throws std::out_of_range for ratings outside 1..6.
    void enqueue_rating(int rating, double wall_time = 0.0, std::optional<PhotoId> target = std::nullopt);
    void enqueue_rating(MoodRatingEvent event);
    std::size_t pending_ratings() const { return pending_.size(); }

    // Advances one tick. Throws std::logic_error once the session is over.
    const TransitionEvent& tick();

    SessionLog log() const;

private:
    std::vector<AppliedReward> apply_ratings(std::size_t& received);

    SessionConfig config_;
    std::shared_ptr<const LifelogNetwork> network_;
    Rng rng_;
    PhotoId initial_photo_;
    SessionState state_;
    RatingQueue pending_;
};

// Called after every tick; a returned rating is queued for the next tick.
using Responder = std::function<std::optional<MoodRatingEvent>(const TransitionEvent&, const Session&)>;

SessionLog run_session(const SessionConfig& config, std::shared_ptr<const LifelogNetwork> network,
                       const Responder& responder = {});

std::size_t distinct_photo_count(const SessionLog& log);

// Re-applies every logged reward to fresh rules.
RuleSet replay_utilities(const SessionLog& log);

}  // namespace reminisce
