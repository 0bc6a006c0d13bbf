#include <memory>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reminisce/json_io.hpp"
#include "reminisce/lifelog.hpp"
#include "reminisce/memory.hpp"
#include "reminisce/metrics.hpp"
#include "reminisce/procedural.hpp"
#include "reminisce/session.hpp"
#include "reminisce/simulated_user.hpp"
#include "reminisce/sweep.hpp"
#include "reminisce/tasks.hpp"

namespace py = pybind11;
using namespace reminisce;

namespace {

// Everything structured crosses the boundary as JSON text; the Python side parses it.

std::shared_ptr<const LifelogNetwork> load_network(const std::string& path) {
    return std::make_shared<const LifelogNetwork>(LifelogNetwork::build(load_manifest(path).records));
}

SessionConfig config_from(const std::string& config_json) {
    return config_json.empty() ? SessionConfig{} : session_config_from_json(json::parse(config_json));
}

std::string summary_of(const std::string& manifest) { return network_summary(*load_network(manifest)).dump(); }

std::string simulate(const std::string& manifest, std::uint64_t seed, const std::string& config_json,
                     const std::string& profile_path) {
    auto config = config_from(config_json);
    config.seed = seed;
    Responder responder;
    if (!profile_path.empty()) {
        const auto profile = load_profile(profile_path);
        responder = make_responder(profile, std::make_shared<Rng>(Rng::mix(profile.seed ^ seed, 0)));
    }
    py::gil_scoped_release release;
    return to_json(run_session(config, load_network(manifest), responder)).dump();
}

std::string replay(const std::string& log_json) {
    return to_json(replay_utilities(session_log_from_json(json::parse(log_json)))).dump();
}

py::tuple sweep(const std::string& manifest, std::size_t sessions, std::uint64_t seed, const std::string& profile_path,
                bool features, const std::string& config_json) {
    SweepOptions options;
    options.sessions_per_condition = sessions;
    options.seed = seed;
    options.base = config_from(config_json);
    if (!profile_path.empty()) options.profile = load_profile(profile_path);
    options.collect_features = features;
    std::string result;
    std::string feature_csv;
    {
        py::gil_scoped_release release;
        const auto r = run_sweep(load_network(manifest), options);
        result = to_json(r).dump();
        if (features) {
            std::ostringstream out;
            write_feature_csv(out, r.features);
            feature_csv = out.str();
        }
    }
    return py::make_tuple(result, feature_csv);
}

std::string estimate(const std::string& feature_csv, const std::string& task_name, const std::string& mode_name,
                     bool linear_only, std::size_t folds, std::uint64_t seed) {
    const auto task = parse_task(task_name);
    const auto mode = parse_mode(mode_name);
    auto space = GridSearchSpace::defaults();
    if (linear_only) space.cells.resize(6);
    std::istringstream in(feature_csv);
    const auto table = read_feature_csv(in);
    py::gil_scoped_release release;
    return to_json(run_task(task, dataset_for_task(table, task), mode, space, folds, seed)).dump();
}

py::dict metrics(const std::vector<std::string>& labels, const std::vector<std::vector<std::size_t>>& counts) {
    const ConfusionMatrix cm(labels, counts);
    py::dict out;
    out["accuracy"] = accuracy(cm);
    out["f_measure"] = f_measure(cm);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<ManifestError>(m, "ManifestError", PyExc_ValueError);
    py::register_exception<ActivationError>(m, "ActivationError", PyExc_ValueError);

    m.def("base_level_activation",
          [](const std::vector<double>& times, double now, double decay) {
              return base_level_activation(PresentationHistory(times), now, decay);
          },
          py::arg("times"), py::arg("now"), py::arg("decay") = 0.5);
    m.def("update_utility",
          [](double utility, double reward, double rate) {
              return update_utility({AttributeKind::person, utility}, reward, rate).utility;
          },
          py::arg("utility"), py::arg("reward"), py::arg("rate") = 0.2);
    m.def("rating_to_reward", [](int rating) { return rating_to_reward(rating); }, py::arg("rating"));
    m.def("network_summary", &summary_of, py::arg("manifest"));
    m.def("run_session", &simulate, py::arg("manifest"), py::arg("seed") = 0, py::arg("config") = "",
          py::arg("profile") = "");
    m.def("replay_utilities", &replay, py::arg("log"));
    m.def("run_sweep", &sweep, py::arg("manifest"), py::arg("sessions") = 40, py::arg("seed") = 0,
          py::arg("profile") = "", py::arg("features") = false, py::arg("config") = "");
    m.def("estimate", &estimate, py::arg("features_csv"), py::arg("task") = "four_condition",
          py::arg("mode") = "pooled", py::arg("linear_only") = false, py::arg("folds") = 5, py::arg("seed") = 0);
    m.def("metrics", &metrics, py::arg("labels"), py::arg("counts"));
}
