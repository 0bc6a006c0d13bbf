#include "reminisce/session.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace reminisce {

std::string SessionCondition::label() const {
    return std::string("A") + (activation_enabled ? "1" : "0") + "R" + (reward_enabled ? "1" : "0");
}

void SessionConfig::validate() const {
    if (!(tick_seconds > 0.0)) throw std::invalid_argument("tick_seconds must be positive");
    if (!(session_duration >= tick_seconds)) throw std::invalid_argument("session_duration must be >= tick_seconds");
    activation.validate();
    utility.validate();
}

std::size_t SessionConfig::tick_count() const {
    return static_cast<std::size_t>(std::floor(session_duration / tick_seconds + 1e-9));
}

std::string_view to_string(TransitionOutcome outcome) {
    switch (outcome) {
        case TransitionOutcome::switched: return "switched";
        case TransitionOutcome::retrieval_failed: return "retrieval_failed";
        case TransitionOutcome::same_photo: return "same_photo";
    }
    return "unknown";
}

TransitionOutcome parse_outcome(std::string_view text) {
    if (text == "switched") return TransitionOutcome::switched;
    if (text == "retrieval_failed") return TransitionOutcome::retrieval_failed;
    if (text == "same_photo") return TransitionOutcome::same_photo;
    throw std::invalid_argument("unknown outcome '" + std::string(text) + "'");
}

void RatingQueue::push(MoodRatingEvent event) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(event));
}

std::vector<MoodRatingEvent> RatingQueue::drain() {
    std::lock_guard lock(mutex_);
    std::vector<MoodRatingEvent> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
}

std::size_t RatingQueue::size() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
}

Session::Session(SessionConfig config, std::shared_ptr<const LifelogNetwork> network)
    : config_(std::move(config)), network_(std::move(network)), rng_(config_.seed) {
    if (!network_ || network_->size() == 0) throw std::invalid_argument("session needs a non-empty network");
    config_.validate();
    state_.rules = RuleSet(config_.utility.initial_utility);

    if (config_.initial_photo) {
        if (!network_->contains(*config_.initial_photo)) {
            throw std::invalid_argument("initial photo '" + *config_.initial_photo + "' is not in the lifelog");
        }
        initial_photo_ = *config_.initial_photo;
    } else {
        auto it = network_->photos().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng_.index(network_->size())));
        initial_photo_ = it->first;
    }
    state_.current_photo = initial_photo_;
    state_.histories[initial_photo_].append(0.0);
}

double Session::remaining_seconds() const {
    return std::max(0.0, config_.session_duration - state_.clock);
}

void Session::enqueue_rating(int rating, double wall_time, std::optional<PhotoId> target) {
    enqueue_rating(MoodRatingEvent{rating, wall_time, target ? *target : state_.current_photo});
}

void Session::enqueue_rating(MoodRatingEvent event) {
    if (event.rating < 1 || event.rating > 6) throw std::out_of_range("mood rating must be within 1..6");
    pending_.push(std::move(event));
}

std::vector<AppliedReward> Session::apply_ratings(std::size_t& received) {
    std::vector<AppliedReward> applied;
    const auto ratings = pending_.drain();
    received = ratings.size();
    if (!config_.condition.reward_enabled) return applied;
    for (const auto& r : ratings) {
        auto it = state_.entered_by.find(r.target_photo);
        if (it == state_.entered_by.end()) continue;  // no rule produced this photo (initial display)
        const double reward = rating_to_reward(r.rating);
        auto& rule = state_.rules[it->second];
        rule = update_utility(rule, reward, config_.utility.learning_rate);
        applied.push_back({it->second, r.rating, reward, r.target_photo});
    }
    return applied;
}

const TransitionEvent& Session::tick() {
    if (finished()) throw std::logic_error("session already finished");

    TransitionEvent event;
    event.tick_index = state_.log.size();
    event.rewards = apply_ratings(event.ratings_received);

    // The clock moves first so every lag is at least one tick.
    const double now = state_.clock + config_.tick_seconds;
    const PhotoId previous = state_.current_photo;
    const auto available = network_->available_kinds(previous);
    event.selected_kind = select_rule(state_.rules, available, config_.utility.selection_noise, rng_);
    event.outcome = TransitionOutcome::retrieval_failed;

    if (event.selected_kind) {
        const auto candidates = network_->neighbours(previous, *event.selected_kind);
        auto result = retrieve(candidates, previous, state_.histories, now, config_.activation,
                               config_.condition.activation_enabled, *network_, rng_);
        event.activation = result.best;
        if (result.ok()) {
            const PhotoId& chosen = *result.photo;
            event.outcome = chosen == previous ? TransitionOutcome::same_photo : TransitionOutcome::switched;
            // A successful retrieval is a recollection of the chunk, re-displayed or not.
            state_.histories[chosen].append(now);
            state_.entered_by[chosen] = *event.selected_kind;
            state_.current_photo = chosen;
        }
    }

    state_.clock = now;
    event.clock = now;
    event.photo_id = state_.current_photo;
    state_.log.push_back(std::move(event));
    return state_.log.back();
}

SessionLog Session::log() const {
    return {config_, network_->content_hash(), initial_photo_, state_.log, state_.rules};
}

SessionLog run_session(const SessionConfig& config, std::shared_ptr<const LifelogNetwork> network,
                       const Responder& responder) {
    Session session(config, std::move(network));
    while (!session.finished()) {
        const auto& event = session.tick();
        if (responder) {
            if (auto rating = responder(event, session)) session.enqueue_rating(std::move(*rating));
        }
    }
    return session.log();
}

std::size_t distinct_photo_count(const SessionLog& log) {
    std::set<PhotoId> shown{log.initial_photo};
    for (const auto& e : log.events) shown.insert(e.photo_id);
    return shown.size();
}

RuleSet replay_utilities(const SessionLog& log) {
    RuleSet rules(log.config.utility.initial_utility);
    for (const auto& e : log.events) {
        for (const auto& r : e.rewards) rules[r.kind] = update_utility(rules[r.kind], r.reward, log.config.utility.learning_rate);
    }
    return rules;
}

}  // namespace reminisce
