#include "reminisce/procedural.hpp"

#include <stdexcept>

namespace reminisce {

void UtilityParams::validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw std::invalid_argument("learning rate must be in (0, 1]");
    if (!(selection_noise >= 0.0)) throw std::invalid_argument("selection noise must be non-negative");
}

RuleSet::RuleSet(double initial_utility) {
    for (auto kind : kAllKinds) rules_[static_cast<std::size_t>(kind)] = {kind, initial_utility};
}

bool RuleSet::operator==(const RuleSet& other) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].kind != other.rules_[i].kind || rules_[i].utility != other.rules_[i].utility) return false;
    }
    return true;
}

AttributeRule update_utility(const AttributeRule& rule, double reward, double learning_rate) {
    return {rule.kind, rule.utility + learning_rate * (reward - rule.utility)};
}

double rating_to_reward(int rating) {
    if (rating < 1 || rating > 6) throw std::out_of_range("mood rating must be within 1..6");
    return (static_cast<double>(rating) - 3.5) / 2.5;
}

std::optional<AttributeKind> select_rule(const RuleSet& rules, std::span<const AttributeKind> available,
                                         double selection_noise, Rng& rng) {
    std::optional<AttributeKind> best;
    double best_value = 0.0;
    for (auto kind : kAllKinds) {
        bool offered = false;
        for (auto a : available) offered = offered || a == kind;
        if (!offered) continue;
        const double value = rules[kind].utility + rng.logistic(selection_noise);
        if (!best || value > best_value) {
            best = kind;
            best_value = value;
        }
    }
    return best;
}

}  // namespace reminisce
