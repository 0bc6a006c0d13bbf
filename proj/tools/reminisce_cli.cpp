// reminisce: batch entry points for lifelog ingestion, seeded condition sweeps,
// internal-state estimation and the session service.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "reminisce/json_io.hpp"
#include "reminisce/service.hpp"
#include "reminisce/sweep.hpp"
#include "reminisce/tasks.hpp"

using namespace reminisce;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string output_path;
};

json load_config(const GlobalOptions& g) {
    if (g.config_path.empty()) return json::object();
    std::ifstream in(g.config_path);
    if (!in) throw std::runtime_error("cannot open config '" + g.config_path + "'");
    return json::parse(in);
}

BucketPolicy policy_from(const json& config, const std::string& granularity, double cell) {
    BucketPolicy policy;
    std::string g = granularity;
    if (g.empty() && config.contains("policy")) g = config["policy"].value("time_granularity", std::string("month"));
    if (cell <= 0.0 && config.contains("policy")) cell = config["policy"].value("location_cell_degrees", 0.1);
    if (g == "year") policy.time_granularity = TimeGranularity::year;
    else if (g == "day") policy.time_granularity = TimeGranularity::day;
    else if (g.empty() || g == "month") policy.time_granularity = TimeGranularity::month;
    else throw std::invalid_argument("time granularity must be year, month or day");
    if (cell > 0.0) policy.location_cell_degrees = cell;
    return policy;
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + g.output_path + "'");
    out << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::shared_ptr<const LifelogNetwork> load_network(const std::string& path, const BucketPolicy& policy) {
    const auto parsed = load_manifest(path);
    for (auto line : parsed.unusable_rows) spdlog::warn("manifest line {} carries no usable attributes", line);
    return std::make_shared<const LifelogNetwork>(LifelogNetwork::build(parsed.records, policy));
}

SessionConfig session_from(const json& config) {
    return config.contains("session") ? session_config_from_json(config["session"]) : SessionConfig{};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-based reminiscence: lifelog ingestion, condition sweeps and state estimation"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every random draw")->default_val(0);
    app.add_option("--config", g.config_path, "JSON config with 'session' and 'policy' sections");
    app.add_option("--output", g.output_path, "Write the primary output here instead of stdout");

    std::string granularity;
    double cell = 0.0;

    auto* ingest = app.add_subcommand("ingest", "Parse a manifest and summarise the attribute network");
    std::string ingest_manifest;
    ingest->add_option("manifest", ingest_manifest, "JSON Lines or CSV manifest")->required();
    ingest->add_option("--time-granularity", granularity, "year | month | day");
    ingest->add_option("--cell-degrees", cell, "Location grid cell size in degrees");

    auto* sweep = app.add_subcommand("sweep", "Run seeded sessions for all four conditions");
    std::string sweep_manifest;
    std::size_t sessions = 40;
    std::string profile_path;
    std::string csv_path;
    std::string features_path;
    sweep->add_option("--manifest", sweep_manifest, "Lifelog manifest")->required();
    sweep->add_option("-n,--sessions", sessions, "Sessions per condition (>= 2)")->default_val(40);
    sweep->add_option("--profile", profile_path, "Synthetic user profile JSON");
    sweep->add_option("--csv", csv_path, "Plot-ready per-condition CSV");
    sweep->add_option("--features", features_path, "Feature CSV with one row per tick (needs --profile)");

    auto* estimate = app.add_subcommand("estimate", "Grid-searched SVM classification of one task");
    std::string features_csv;
    std::string task_name;
    std::string mode_name = "pooled";
    std::size_t folds = 5;
    std::string space_name = "default";
    estimate->add_option("--features", features_csv, "Feature CSV")->required();
    estimate->add_option("--task", task_name,
                         "four_condition | activation_flag | reward_flag | tmd_direction | mood_rating_direction")
        ->required();
    estimate->add_option("--mode", mode_name, "pooled | per_participant")->default_val("pooled");
    estimate->add_option("--folds", folds, "Cross-validation folds")->default_val(5);
    estimate->add_option("--space", space_name, "default (42 cells) | linear (6 cells)")->default_val("default");

    auto* simulate = app.add_subcommand("simulate", "Run one session and print its log");
    std::string simulate_manifest;
    std::string simulate_profile;
    simulate->add_option("--manifest", simulate_manifest, "Lifelog manifest")->required();
    simulate->add_option("--profile", simulate_profile, "Synthetic user profile JSON");

    auto* generate = app.add_subcommand("generate-lifelog", "Write a connected synthetic lifelog manifest");
    std::size_t photo_count = 200;
    generate->add_option("--count", photo_count, "Number of photos")->default_val(200);

    auto* serve_cmd = app.add_subcommand("serve", "Serve sessions over HTTP");
    std::string listen = "127.0.0.1:8080";
    std::vector<std::string> manifests;
    std::string media_root;
    serve_cmd->add_option("--listen", listen, "host:port")->envname("REMINISCE_LISTEN")->default_val("127.0.0.1:8080");
    serve_cmd->add_option("--manifest", manifests, "name=path or path (named 'default')")->envname("REMINISCE_MANIFEST");
    serve_cmd->add_option("--media-root", media_root, "Directory served under /media")->envname("REMINISCE_MEDIA_ROOT");

    CLI11_PARSE(app, argc, argv);

    try {
        const json config = load_config(g);

        if (*ingest) {
            const auto parsed = load_manifest(ingest_manifest);
            const auto network = LifelogNetwork::build(parsed.records, policy_from(config, granularity, cell));
            json summary = network_summary(network);
            summary["unusable_rows"] = parsed.unusable_rows;
            if (network.report().component_count > 1) {
                spdlog::warn("lifelog splits into {} components; {} photo(s) are isolated",
                             network.report().component_count, network.report().isolated.size());
            }
            std::cerr << network.size() << " photos\n";
            emit(g, summary.dump(2) + "\n");
        } else if (*sweep) {
            SweepOptions options;
            options.sessions_per_condition = sessions;
            options.seed = g.seed;
            options.base = session_from(config);
            if (!profile_path.empty()) options.profile = load_profile(profile_path);
            options.collect_features = !features_path.empty();
            const auto network = load_network(sweep_manifest, policy_from(config, granularity, cell));
            const auto result = run_sweep(network, options);
            emit(g, to_json(result).dump(2) + "\n");
            if (!csv_path.empty()) {
                std::ostringstream csv;
                write_sweep_csv(csv, result);
                write_file(csv_path, csv.str());
            }
            if (!features_path.empty()) {
                std::ostringstream csv;
                write_feature_csv(csv, result.features);
                write_file(features_path, csv.str());
            }
            if (!(result.activation_on.mean < result.activation_off.mean)) {
                spdlog::warn("activation-on mean distinct count is not below activation-off");
            }
        } else if (*estimate) {
            const auto task = parse_task(task_name);
            const auto mode = parse_mode(mode_name);
            GridSearchSpace space = GridSearchSpace::defaults();
            if (space_name == "linear") {
                space.cells.resize(6);
            } else if (space_name != "default") {
                throw std::invalid_argument("space must be 'default' or 'linear'");
            }
            const auto table = load_feature_csv(features_csv);
            const auto data = dataset_for_task(table, task);
            const auto report = run_task(task, data, mode, space, folds, g.seed);
            emit(g, to_json(report).dump(2) + "\n");
        } else if (*simulate) {
            SessionConfig session = session_from(config);
            session.seed = g.seed;
            const auto network = load_network(simulate_manifest, policy_from(config, granularity, cell));
            Responder responder;
            if (!simulate_profile.empty()) {
                const auto profile = load_profile(simulate_profile);
                responder = make_responder(profile, std::make_shared<Rng>(Rng::mix(profile.seed ^ g.seed, 0)));
            }
            emit(g, to_json(run_session(session, network, responder)).dump(2) + "\n");
        } else if (*generate) {
            std::ostringstream out;
            write_manifest_jsonl(out, generate_synthetic_lifelog(photo_count, g.seed));
            emit(g, out.str());
        } else if (*serve_cmd) {
            ServiceOptions options;
            const auto colon = listen.rfind(':');
            if (colon == std::string::npos) throw std::invalid_argument("--listen must be host:port");
            options.host = listen.substr(0, colon);
            options.port = std::stoi(listen.substr(colon + 1));
            for (const auto& m : manifests) {
                const auto eq = m.find('=');
                if (eq == std::string::npos) options.manifests["default"] = m;
                else options.manifests[m.substr(0, eq)] = m.substr(eq + 1);
            }
            options.media_root = media_root;
            return serve(options);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
