#pragma once

#include <array>
#include <optional>
#include <span>

#include "reminisce/lifelog.hpp"
#include "reminisce/rng.hpp"

namespace reminisce {

struct AttributeRule {
    AttributeKind kind = AttributeKind::person;
    double utility = 0.0;
};

struct UtilityParams {
    double learning_rate = 0.2;
    double selection_noise = 0.25;
    double initial_utility = 0.0;

    void validate() const;
};

// One attribute-selection rule per kind, indexed by AttributeKind.
class RuleSet {
public:
    explicit RuleSet(double initial_utility = 0.0);

    const AttributeRule& operator[](AttributeKind kind) const { return rules_[static_cast<std::size_t>(kind)]; }
    AttributeRule& operator[](AttributeKind kind) { return rules_[static_cast<std::size_t>(kind)]; }
    const std::array<AttributeRule, 4>& rules() const { return rules_; }

    bool operator==(const RuleSet& other) const;

private:
    std::array<AttributeRule, 4> rules_;
};

// U' = U + alpha (R - U)
AttributeRule update_utility(const AttributeRule& rule, double reward, double learning_rate);

// Linear map of a 1..6 mood rating onto [-1, 1]; 3.5 is neutral.
double rating_to_reward(int rating);

// Noisy argmax of utility over the available kinds; nullopt when none are available.
// Noise is drawn for every available kind in kind order, ties go to the earlier kind.
std::optional<AttributeKind> select_rule(const RuleSet& rules, std::span<const AttributeKind> available,
                                         double selection_noise, Rng& rng);

}  // namespace reminisce
