// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "reminisce/json_io.hpp"
#include "reminisce/metrics.hpp"
#include "reminisce/stats.hpp"
#include "reminisce/sweep.hpp"
#include "reminisce/tasks.hpp"
#include "reminisce/validation.hpp"

using namespace reminisce;

namespace {

constexpr double kUtilityRelTol = 1e-12;
constexpr double kActivationRelTol = 1e-12;
constexpr std::size_t kActivationCases = 10000;
constexpr double kWelchAlpha = 0.01;
constexpr double kSteeringShare = 0.90;
constexpr double kChiSquareFloor = 0.001;
constexpr double kDualRelTol = 1e-3;
constexpr double kChanceBand = 0.06;
constexpr double kSeparatedAccuracy = 0.9;

std::string data_path(const std::string& name) { return std::string(REMINISCE_DATA_DIR) + "/" + name; }

std::shared_ptr<const LifelogNetwork> bundled() {
    static const auto net = std::make_shared<const LifelogNetwork>(
        LifelogNetwork::build(load_manifest(data_path("lifelog_200.jsonl")).records));
    return net;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;  // 0: no runtime bound
    std::function<Outcome()> run;
};

std::string text(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

Outcome utility_convergence() {
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_real_distribution<double> rate(0.0, 1.0);
    double worst = 0.0;
    for (int triple = 0; triple < 1000; ++triple) {
        const double u0 = value(gen);
        const double r = value(gen);
        double alpha = rate(gen);
        if (alpha == 0.0) alpha = 1.0;
        const double scale = std::max({std::abs(u0), std::abs(r), std::abs(u0 - r)});
        AttributeRule rule{AttributeKind::person, u0};
        for (int n = 1; n <= 50; ++n) {
            rule = update_utility(rule, r, alpha);
            const double lhs = std::abs(rule.utility - r);
            const double rhs = std::pow(1.0 - alpha, n) * std::abs(u0 - r);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    return {worst <= kUtilityRelTol, text("1000 triples x 50 steps, worst relative deviation %.2e", worst)};
}

Outcome base_level_activation_suite() {
    const double hand[] = {
        *base_level_activation(PresentationHistory({6.0, 9.0}), 10.0, 0.5),
        *base_level_activation(PresentationHistory({0.0}), 100.0, 0.5),
    };
    // Reference script values for ln 1.5 and ln 0.1.
    const double reference[] = {0.4054651081081644, -2.3025850929940455};
    double worst_hand = 0.0;
    for (int i = 0; i < 2; ++i) worst_hand = std::max(worst_hand, std::abs(hand[i] - reference[i]) / std::abs(reference[i]));

    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> gap(0.25, 40.0);
    std::uniform_real_distribution<double> decay(0.05, 2.0);
    std::size_t violations = 0;
    double worst_oracle = 0.0;
    for (std::size_t c = 0; c < kActivationCases; ++c) {
        std::vector<double> times;
        double t = 0.0;
        const std::size_t n = 1 + gen() % 20;
        for (std::size_t i = 0; i < n; ++i) times.push_back(t += gap(gen));
        const double d = decay(gen);
        const PresentationHistory h(times);
        const double n1 = t + gap(gen);
        const double n2 = n1 + gap(gen);
        const double n3 = n2 + gap(gen);
        const double a1 = *base_level_activation(h, n1, d);
        const double a2 = *base_level_activation(h, n2, d);
        const double a3 = *base_level_activation(h, n3, d);
        if (!(a1 > a2 && a2 > a3)) ++violations;
        PresentationHistory more = h;
        more.append(t + 0.5 * (n1 - t));
        if (!(*base_level_activation(more, n1, d) > a1)) ++violations;
        if (!(*base_level_activation(more, n3, d) > a3)) ++violations;
        const double ref = oracle::base_level(times, n1, d);
        worst_oracle = std::max(worst_oracle, std::abs(a1 - ref) / std::max(1.0, std::abs(ref)));
    }
    const bool empty_signalled = !base_level_activation(PresentationHistory{}, 1.0, 0.5).has_value();
    const bool pass = worst_hand <= kActivationRelTol && worst_oracle <= kActivationRelTol && violations == 0 && empty_signalled;
    return {pass, text("%.0f randomized histories, %.0f monotonicity violations, oracle deviation %.2e, ln1.5/ln0.1 deviation %.2e",
                      double(kActivationCases), double(violations), worst_oracle, worst_hand)};
}

Outcome activation_lowers_distinct_photos() {
    SweepOptions o;
    o.sessions_per_condition = 40;
    o.seed = 2024;
    o.profile = load_profile(data_path("profiles/reward_seeker.json"));
    const auto r = run_sweep(bundled(), o);
    const bool pass = r.activation_on.mean < r.activation_off.mean && r.activation_test.p_two_sided < kWelchAlpha;
    return {pass, text("40 sessions/condition: mean distinct ON %.3f vs OFF %.3f, Welch t %.2f, p %.2e", r.activation_on.mean,
                      r.activation_off.mean, r.activation_test.t, r.activation_test.p_two_sided)};
}

double preferred_share_second_half(const SessionLog& log, AttributeKind kind) {
    const std::size_t half = log.events.size() / 2;
    std::size_t hits = 0;
    for (std::size_t i = half; i < log.events.size(); ++i) hits += log.events[i].selected_kind == kind;
    return static_cast<double>(hits) / static_cast<double>(log.events.size() - half);
}

Outcome reward_steering() {
    const auto profile = load_profile(data_path("profiles/reward_seeker.json"));
    const auto kind = *profile.preferred_kind;
    const double max_reward = rating_to_reward(6);
    std::size_t good = 0;
    double mean_utility = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SessionConfig c;
        c.seed = seed;
        c.condition = {false, true};
        const auto on = run_session(c, bundled(), make_responder(profile, std::make_shared<Rng>(Rng::mix(seed, 1))));
        c.condition = {false, false};
        const auto off = run_session(c, bundled(), make_responder(profile, std::make_shared<Rng>(Rng::mix(seed, 1))));
        const double u = on.final_rules[kind].utility;
        mean_utility += u / 50.0;
        if (u > 0.5 * max_reward && preferred_share_second_half(on, kind) > preferred_share_second_half(off, kind)) ++good;
    }
    const double share = static_cast<double>(good) / 50.0;
    return {share >= kSteeringShare,
            text("%.0f/50 seeds steered (need %.0f%%), mean final preferred utility %.3f", double(good), 100 * kSteeringShare,
                mean_utility)};
}

Outcome condition_contract() {
    const auto profile = load_profile(data_path("profiles/reward_seeker.json"));
    std::size_t drifted = 0;
    std::size_t breakdowns = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        for (bool activation : {false, true}) {
            SessionConfig c;
            c.seed = seed;
            c.condition = {activation, false};
            c.utility.initial_utility = seed % 3 == 0 ? 0.0 : 0.1 * static_cast<double>(seed % 7);
            const auto log = run_session(c, bundled(), make_responder(profile, std::make_shared<Rng>(seed)));
            if (!(log.final_rules == RuleSet(c.utility.initial_utility))) ++drifted;
            c.condition = {false, true};
            const auto no_act = run_session(c, bundled(), make_responder(profile, std::make_shared<Rng>(seed)));
            for (const auto& e : no_act.events) breakdowns += e.activation.has_value();
        }
    }

    // Uniformity of retrieval with activation off over a real candidate set.
    const auto net = bundled();
    PhotoId context;
    std::vector<PhotoId> candidates;
    for (const auto& [id, _] : net->photos()) {
        for (auto kind : net->available_kinds(id)) {
            auto c = net->neighbours(id, kind);
            if (c.size() > candidates.size() && c.size() <= 12) {
                candidates = std::move(c);
                context = id;
            }
        }
    }
    HistoryMap histories;
    histories[context].append(0.0);
    ActivationParams params;
    params.noise_scale = 0.0;
    Rng rng(303);
    std::map<PhotoId, std::size_t> counts;
    for (int i = 0; i < 10000; ++i) ++counts[*retrieve(candidates, context, histories, 11.0, params, false, *net, rng).photo];
    std::vector<std::size_t> observed;
    for (const auto& id : candidates) observed.push_back(counts[id]);
    const auto chi = chi_square_uniform(observed);
    const bool pass = drifted == 0 && breakdowns == 0 && chi.p_value > kChiSquareFloor;
    return {pass, text("reward OFF drifted sessions %.0f/80; activation OFF breakdowns %.0f; uniform retrieval over %.0f candidates p %.3f",
                      double(drifted), double(breakdowns), double(candidates.size()), chi.p_value)};
}

Outcome svm_oracle() {
    std::mt19937_64 gen(404);
    std::normal_distribution<double> noise(0.0, 1.0);
    double worst = 0.0;
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t n = 6 + gen() % 25;
        const std::size_t dim = 1 + gen() % 4;
        std::vector<std::vector<double>> x(n, std::vector<double>(dim));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i < 2 ? (i == 0 ? 1 : -1) : (gen() % 2 ? 1 : -1);
            for (auto& v : x[i]) v = noise(gen) + 0.6 * y[i];
        }
        SvmConfig c;
        c.kernel = instance % 2 ? KernelType::rbf : KernelType::linear;
        c.C = std::pow(10.0, static_cast<double>(instance % 3) - 1.0);
        c.gamma = std::pow(10.0, -static_cast<double>(instance % 3));
        const auto sol = solve_svm_dual(x, y, c);
        std::vector<std::vector<double>> K(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) K[i][j] = kernel_value(c, x[i], x[j]);
        const double reference = oracle::svm_dual_optimum(K, y, c.C);
        worst = std::max(worst, std::abs(sol.objective - reference) / std::max(std::abs(reference), 1e-12));
    }

    const auto xor_data = Dataset::from_vectors({{{1, 1}, "a", "", "x1"}, {{-1, -1}, "a", "", "x2"},
                                                 {{1, -1}, "b", "", "x3"}, {{-1, 1}, "b", "", "x4"}},
                                                {"a", "b"});
    SvmConfig rbf{KernelType::rbf, 100.0, 1.0};
    const auto model = train_svm(xor_data, rbf);
    std::size_t xor_ok = 0;
    for (const auto& v : xor_data.vectors) xor_ok += model.predict(v.values) == v.label;

    std::vector<FeatureVector> vs;
    for (int i = 0; i < 400; ++i) {
        std::vector<double> v(kFeatureDim);
        for (auto& d : v) d = noise(gen);
        vs.push_back({std::move(v), i < 200 ? "a" : "b", "", "s" + std::to_string(i)});
    }
    std::vector<std::string> labels;
    for (const auto& v : vs) labels.push_back(v.label);
    std::shuffle(labels.begin(), labels.end(), gen);
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i].label = labels[i];
    const double shuffled = cross_validate(Dataset::from_vectors(std::move(vs)), SvmConfig{}, 5, 7).accuracy;

    const bool pass = worst <= kDualRelTol && xor_ok == 4 && std::abs(shuffled - 0.5) <= kChanceBand;
    return {pass, text("20 instances worst dual deviation %.2e; XOR %.0f/4; shuffled-label CV accuracy %.3f (n=400)", worst,
                      double(xor_ok), shuffled)};
}

Outcome classification_metrics() {
    std::mt19937_64 gen(505);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t tp = gen() % 50, fp = gen() % 50, fn = gen() % 50, tn = gen() % 50 + (tp + fp + fn == 0);
        ConfusionMatrix cm({"pos", "neg"}, {{tp, fp}, {fn, tn}});
        const oracle::Binary b{double(tp), double(fp), double(fn), double(tn)};
        mismatches += accuracy(cm) != oracle::accuracy(b);
        mismatches += f_measure(cm) != oracle::f_measure(b);
    }
    ConfusionMatrix worked({"pos", "neg"}, {{3, 1}, {1, 5}});
    const double acc = accuracy(worked);
    const double f = f_measure(worked);
    const bool pass = mismatches == 0 && acc == 0.8 && f == 0.75;
    return {pass, text("1000 random 2x2 matrices, %.0f mismatches; worked example accuracy %.4f F %.4f", double(mismatches), acc, f)};
}

Outcome grid_search_contract() {
    const auto space = GridSearchSpace::defaults();
    const std::vector<double> cs{0.001, 0.01, 0.1, 1, 10, 100};
    const std::vector<double> gammas{0.0001, 0.001, 0.01, 0.1, 1, 10};
    bool table = space.cells.size() == 42;
    for (std::size_t i = 0; table && i < 42; ++i) {
        const auto& cell = space.cells[i];
        if (i < 6) table = cell.kernel == KernelType::linear && cell.C == cs[i];
        else table = cell.kernel == KernelType::rbf && cell.C == cs[(i - 6) / 6] && cell.gamma == gammas[(i - 6) % 6];
    }

    std::mt19937_64 gen(606);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 60; ++i) {
        const bool pos = i % 2 == 0;
        vs.push_back({{noise(gen) + (pos ? 1.0 : -1.0), noise(gen)}, pos ? "a" : "b", "", "s" + std::to_string(i)});
    }
    const auto data = Dataset::from_vectors(std::move(vs));
    const auto result = grid_search(data, space, 5, 1);
    // Independent argmax: highest accuracy; among equals linear, then C, then gamma.
    std::size_t pick = 0;
    for (std::size_t i = 1; i < result.cells.size(); ++i) {
        const auto& a = result.cells[i];
        const auto& b = result.cells[pick];
        if (!a.result) continue;
        if (!b.result || a.result->accuracy > b.result->accuracy) {
            pick = i;
            continue;
        }
        if (a.result->accuracy < b.result->accuracy) continue;
        const auto key = [](const SvmConfig& c) {
            return std::tuple(c.kernel == KernelType::linear ? 0 : 1, c.C, c.kernel == KernelType::rbf ? c.gamma : 0.0);
        };
        if (key(a.config) < key(b.config)) pick = i;
    }
    std::size_t ties = 0;
    for (const auto& c : result.cells) ties += c.result && c.result->accuracy == result.cells[pick].result->accuracy;
    const bool argmax = result.best == result.cells[pick].config && result.cells.size() == 42;

    SvmConfig lone{KernelType::rbf, 10.0, 0.01};
    const auto single = grid_search(data, {{lone}}, 5, 1);
    const bool identity = single.best == lone && single.cells.size() == 1;
    return {table && argmax && identity,
            std::string("42-cell table ") + (table ? "ok" : "WRONG") +
                text("; argmax matches independent pick among %.0f tied cells (accuracy %.4f)", double(ties),
                    result.best_result.accuracy) +
                "; best " + result.best.describe() + "; single-cell identity " + (identity ? "ok" : "WRONG")};
}

Outcome end_to_end(const std::string& profile_file, bool expect_signal, std::string& summary) {
    SweepOptions o;
    o.sessions_per_condition = 6;
    o.seed = 77;
    o.profile = load_profile(data_path(profile_file));
    o.collect_features = true;
    const auto sweep = run_sweep(bundled(), o);
    const auto data = dataset_for_task(sweep.features, Task::four_condition);
    const auto report = run_task(Task::four_condition, data, EvalMode::pooled, GridSearchSpace::defaults(), 5, 77);
    const double acc = report.pooled->best_result.accuracy;
    summary = "n=" + std::to_string(data.size()) + " best " + report.pooled->best.describe() + " accuracy " + text("%.3f", acc);
    if (expect_signal) return {acc >= kSeparatedAccuracy, summary};
    return {std::abs(acc - 0.25) <= kChanceBand, summary};
}

Outcome end_to_end_detection() {
    std::string with_signal;
    std::string without;
    const auto a = end_to_end("profiles/separated_features.json", true, with_signal);
    const auto b = end_to_end("profiles/no_signal.json", false, without);
    return {a.pass && b.pass, "4-sigma separation: " + with_signal + " (need >= 0.9); zero separation: " + without +
                                  " (need 0.25 +- 0.06)"};
}

Outcome log_replay() {
    std::mt19937_64 gen(707);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t mismatches = 0;
    std::size_t rewarded = 0;
    for (int i = 0; i < 100; ++i) {
        SessionConfig c;
        c.seed = gen();
        c.condition = {gen() % 2 == 0, gen() % 4 != 0};
        c.tick_seconds = 2.0 + 18.0 * unit(gen);
        c.session_duration = c.tick_seconds * static_cast<double>(1 + gen() % 40);
        c.utility.learning_rate = 0.01 + 0.99 * unit(gen);
        c.utility.selection_noise = 0.5 * unit(gen);
        c.utility.initial_utility = unit(gen) - 0.5;
        c.activation.noise_scale = 0.5 * unit(gen);
        c.activation.decay = 0.1 + unit(gen);
        SyntheticUserProfile p;
        p.preferred_kind = kAllKinds[gen() % 4];
        p.rating_when_preferred = 1 + static_cast<int>(gen() % 6);
        p.rating_otherwise = 1 + static_cast<int>(gen() % 6);
        p.rating_jitter = static_cast<int>(gen() % 3);
        const auto log = run_session(c, bundled(), make_responder(p, std::make_shared<Rng>(gen())));
        for (const auto& e : log.events) rewarded += e.rewards.size();
        mismatches += !(replay_utilities(log) == log.final_rules);
        const auto reread = session_log_from_json(json::parse(to_json(log).dump()));
        mismatches += !(replay_utilities(reread) == log.final_rules);
    }
    return {mismatches == 0, text("100 random configs, %.0f replayed rewards, %.0f mismatches", double(rewarded), double(mismatches))};
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    const std::vector<Criterion> criteria{
        {"utility-convergence", 1.0, utility_convergence},
        {"base-level-activation", 5.0, base_level_activation_suite},
        {"activation-lowers-distinct-photos", 30.0, activation_lowers_distinct_photos},
        {"reward-steering", 30.0, reward_steering},
        {"condition-contract", 0.0, condition_contract},
        {"svm-dual-oracle", 60.0, svm_oracle},
        {"classification-metrics", 0.0, classification_metrics},
        {"grid-search", 0.0, grid_search_contract},
        {"end-to-end-detection", 0.0, end_to_end_detection},
        {"log-replay", 0.0, log_replay},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("%s %-34s %7.2fs%s  %s\n", pass ? "PASS" : "FAIL", c.name.c_str(), seconds,
                    c.budget_seconds > 0.0 ? text(" (< %.0fs)", c.budget_seconds).c_str() : "", out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
