#include <doctest.h>

#include "fixtures.hpp"
#include "reminisce/simulated_user.hpp"
#include "reminisce/validation.hpp"

using namespace reminisce;

TEST_SUITE("simulated_user") {

TEST_CASE("ratings follow the preference rule") {
    const auto net = LifelogNetwork::build({fixtures::photo("a", {"mom"}), fixtures::photo("b", {"dad"}, {"cake"})});
    SyntheticUserProfile p;
    p.preferred_values = {{AttributeKind::person, "mom"}};
    Rng rng(0);
    CHECK(respond("a", net, std::nullopt, p, rng).rating == 6);
    CHECK(respond("b", net, std::nullopt, p, rng).rating == 2);
    CHECK(respond("b", net, AttributeKind::object, p, rng).rating == 2);
    p.preferred_kind = AttributeKind::object;
    CHECK(respond("b", net, AttributeKind::object, p, rng).rating == 6);
    CHECK(respond("b", net, AttributeKind::time, p, rng).target_photo == "b");
}

TEST_CASE("jitter stays within one step and inside the scale") {
    const auto net = LifelogNetwork::build({fixtures::photo("a", {"mom"}), fixtures::photo("b", {"dad"})});
    SyntheticUserProfile p;
    p.preferred_values = {{AttributeKind::person, "mom"}};
    p.rating_jitter = 1;
    Rng rng(9);
    std::set<int> seen_high;
    std::set<int> seen_low;
    for (int i = 0; i < 10000; ++i) {
        const int high = respond("a", net, std::nullopt, p, rng).rating;
        const int low = respond("b", net, std::nullopt, p, rng).rating;
        CHECK(high >= 5);
        CHECK(high <= 6);
        CHECK(low >= 1);
        CHECK(low <= 3);
        seen_high.insert(high);
        seen_low.insert(low);
    }
    CHECK(seen_high == std::set<int>{5, 6});
    CHECK(seen_low == std::set<int>{1, 2, 3});
}

TEST_CASE("respond is deterministic under a seed") {
    const auto net = fixtures::bundled_lifelog();
    SyntheticUserProfile p;
    p.rating_jitter = 2;
    Rng a(3);
    Rng b(3);
    for (const auto& [id, _] : net->photos()) CHECK(respond(id, *net, std::nullopt, p, a).rating == respond(id, *net, std::nullopt, p, b).rating);
}

TEST_CASE("zero spread emits the class mean exactly") {
    SyntheticUserProfile p;
    p.feature_means = separated_means({"x", "y"}, 4.0);
    p.feature_stddev.assign(kFeatureDim, 0.0);
    Rng rng(0);
    const auto v = emit_features("y", p, rng, "u1", "s1");
    CHECK(v.values == p.feature_means.at("y"));
    CHECK(v.values.size() == kFeatureDim);
    CHECK(v.label == "y");
    CHECK(v.participant_id == "u1");
    CHECK(emit_features("unknown", p, rng).values == std::vector<double>(kFeatureDim, 0.0));
}

TEST_CASE("separated classes are linearly learnable, identical ones are not") {
    auto sample = [](double separation, std::uint64_t seed) {
        SyntheticUserProfile p;
        p.feature_means = separated_means({"x", "y"}, separation);
        Rng rng(seed);
        std::vector<FeatureVector> vs;
        for (int i = 0; i < 250; ++i) {
            for (const char* label : {"x", "y"}) {
                auto v = emit_features(label, p, rng);
                v.segment_id = std::string(label) + std::to_string(i);
                vs.push_back(std::move(v));
            }
        }
        return Dataset::from_vectors(std::move(vs));
    };
    SvmConfig linear;
    linear.C = 1.0;
    CHECK(cross_validate(sample(4.0, 1), linear, 5, 0).accuracy >= 0.99);
    const double chance = cross_validate(sample(0.0, 2), linear, 5, 0).accuracy;
    // Binomial sd at n=500 is 0.022; 0.5 +- 0.09 is four of them.
    CHECK(chance > 0.41);
    CHECK(chance < 0.59);
}

TEST_CASE("profiles load from json and validate") {
    const auto p = load_profile(fixtures::data_path("profiles/separated_features.json"));
    CHECK(p.preferred_kind == AttributeKind::person);
    CHECK(p.feature_means.size() == 4);
    CHECK(p.feature_means.at("A0R1")[10] == 4.0);
    CHECK(p.feature_means.at("A0R1")[9] == 0.0);
    CHECK(profile_from_json(to_json(p)).feature_means == p.feature_means);

    CHECK_THROWS(profile_from_json({{"rating_when_preferred", 7}}));
    CHECK_THROWS(profile_from_json({{"rating_jitter", -1}}));
    CHECK_THROWS(profile_from_json({{"feature_stddev", std::vector<double>(3, 1.0)}}));
    CHECK_THROWS(load_profile("/nonexistent/profile.json"));
}

TEST_CASE("reward-seeking user raises the person utility only under reward") {
    const auto p = load_profile(fixtures::data_path("profiles/reward_seeker.json"));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SessionConfig c;
        c.seed = seed;
        c.condition = {false, true};
        const auto on = run_session(c, fixtures::bundled_lifelog(), make_responder(p, std::make_shared<Rng>(seed)));
        c.condition = {false, false};
        const auto off = run_session(c, fixtures::bundled_lifelog(), make_responder(p, std::make_shared<Rng>(seed)));
        CHECK(off.final_rules[AttributeKind::person].utility == 0.0);
        CHECK(on.final_rules[AttributeKind::person].utility > off.final_rules[AttributeKind::person].utility);
    }
}

}
