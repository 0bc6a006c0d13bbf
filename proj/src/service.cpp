#include "reminisce/service.hpp"

#include <cstdio>
#include <ctime>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "reminisce/json_io.hpp"

namespace reminisce {

using nlohmann::json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void require_type(const json& request, const char* field, bool (json::*check)() const noexcept, const char* type) {
    if (auto it = request.find(field); it != request.end() && !((*it).*check)()) {
        throw ServiceError(400, std::string("field '") + field + "' must be " + type);
    }
}

}  // namespace

SessionService::~SessionService() { stop_all(); }

void SessionService::stop_all() {
    std::map<std::string, std::shared_ptr<Live>> sessions;
    {
        std::lock_guard lock(registry_mutex_);
        sessions = sessions_;
    }
    for (auto& [_, live] : sessions) {
        if (live->runner.joinable()) {
            live->runner.request_stop();
            live->runner.join();
        }
    }
}

void SessionService::add_lifelog(const std::string& name, std::shared_ptr<const LifelogNetwork> network) {
    std::lock_guard lock(registry_mutex_);
    lifelogs_[name] = std::move(network);
}

std::shared_ptr<SessionService::Live> SessionService::find(const std::string& session_id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + session_id + "'");
    return it->second;
}

json SessionService::handle_json(const Live& live) {
    const auto& s = *live.session;
    return {{"session_id", live.id},
            {"created_at", live.created_at},
            {"lifelog", live.lifelog},
            {"config", to_json(s.config())},
            {"condition", s.config().condition.label()},
            {"cadence", live.manual ? "manual" : "realtime"},
            {"status", s.finished() ? "finished" : "running"}};
}

void SessionService::run_ticks(std::stop_token stop, Live& live) {
    std::unique_lock lock(live.mutex);
    while (!live.session->finished()) {
        if (live.changed.wait_for(lock, stop, live.cadence, [] { return false; })) break;
        if (stop.stop_requested()) break;
        live.session->tick();
        live.changed.notify_all();
    }
    live.changed.notify_all();
}

json SessionService::create_session(const json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    const std::string lifelog = request.value("lifelog", std::string("default"));
    std::shared_ptr<const LifelogNetwork> network;
    {
        std::lock_guard lock(registry_mutex_);
        auto it = lifelogs_.find(lifelog);
        if (it == lifelogs_.end()) throw ServiceError(404, "unknown lifelog '" + lifelog + "'");
        network = it->second;
    }
    require_type(request, "activation_enabled", &json::is_boolean, "a boolean");
    require_type(request, "reward_enabled", &json::is_boolean, "a boolean");
    require_type(request, "seed", &json::is_number_unsigned, "a non-negative integer");
    require_type(request, "tick_seconds", &json::is_number, "a number");
    require_type(request, "session_duration", &json::is_number, "a number");

    auto live = std::make_shared<Live>();
    try {
        auto config = session_config_from_json(request);
        live->session = std::make_unique<Session>(config, network);
    } catch (const json::exception& e) {
        throw ServiceError(400, std::string("invalid session request: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ServiceError(400, e.what());
    }
    const std::string cadence = request.value("cadence", std::string("realtime"));
    if (cadence != "realtime" && cadence != "manual") throw ServiceError(400, "cadence must be 'realtime' or 'manual'");
    live->manual = cadence == "manual";
    const double wall_ms = request.value("wall_tick_ms", live->session->config().tick_seconds * 1000.0);
    if (!(wall_ms > 0.0)) throw ServiceError(400, "wall_tick_ms must be positive");
    live->cadence = std::chrono::milliseconds(static_cast<long long>(wall_ms));
    live->created_at = utc_now();
    live->lifelog = lifelog;
    {
        std::lock_guard lock(registry_mutex_);
        char id[32];
        std::snprintf(id, sizeof id, "s%06zu", next_id_++);
        live->id = id;
        sessions_[live->id] = live;
    }
    if (!live->manual) {
        live->runner = std::jthread([raw = live.get()](std::stop_token stop) { run_ticks(stop, *raw); });
    }
    std::lock_guard lock(live->mutex);
    return handle_json(*live);
}

json SessionService::handle(const std::string& session_id) const {
    auto live = find(session_id);
    std::lock_guard lock(live->mutex);
    return handle_json(*live);
}

json SessionService::current_stimulus(const std::string& session_id) const {
    auto live = find(session_id);
    std::lock_guard lock(live->mutex);
    const auto& s = *live->session;
    const auto& state = s.state();
    return {{"session_id", live->id},
            {"photo_id", state.current_photo},
            {"media_path", s.network().photo(state.current_photo).media_path},
            {"tick_index", state.log.empty() ? json(nullptr) : json(state.log.back().tick_index)},
            {"remaining_seconds", s.remaining_seconds()},
            {"status", s.finished() ? "finished" : "running"}};
}

json SessionService::submit_rating(const std::string& session_id, const json& body) {
    auto live = find(session_id);
    if (!body.is_object() || !body.contains("rating") || !body["rating"].is_number_integer()) {
        throw ServiceError(400, "body must be {\"rating\": <integer 1..6>}");
    }
    const int rating = body["rating"].get<int>();
    if (rating < 1 || rating > 6) throw ServiceError(400, "rating must be within 1..6");
    std::lock_guard lock(live->mutex);
    auto& s = *live->session;
    if (s.finished()) throw ServiceError(409, "session '" + session_id + "' is finished");
    const auto wall = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
    s.enqueue_rating(rating, wall);
    return {{"queued_for_tick", s.next_tick_index()}, {"target_photo", s.state().current_photo}, {"rating", rating}};
}

json SessionService::session_log(const std::string& session_id) const {
    auto live = find(session_id);
    std::lock_guard lock(live->mutex);
    json j = to_json(live->session->log());
    j["header"]["session_id"] = live->id;
    j["header"]["status"] = live->session->finished() ? "finished" : "running";
    return j;
}

json SessionService::advance(const std::string& session_id) {
    auto live = find(session_id);
    std::lock_guard lock(live->mutex);
    if (!live->manual) throw ServiceError(409, "session '" + session_id + "' ticks on its own cadence");
    if (live->session->finished()) throw ServiceError(409, "session '" + session_id + "' is finished");
    const auto& event = live->session->tick();
    live->changed.notify_all();
    return to_json(event);
}

SessionService::EventBatch SessionService::events_after(const std::string& session_id, std::optional<std::size_t> after,
                                                        std::chrono::milliseconds wait) const {
    auto live = find(session_id);
    std::unique_lock lock(live->mutex);
    const std::size_t first = after ? *after + 1 : 0;
    auto ready = [&] { return live->session->state().log.size() > first || live->session->finished(); };
    if (wait.count() > 0) live->changed.wait_for(lock, wait, ready);
    EventBatch batch;
    const auto& log = live->session->state().log;
    for (std::size_t i = first; i < log.size(); ++i) batch.events.push_back(log[i]);
    batch.finished = live->session->finished();
    return batch;
}

std::string sse_frame(const TransitionEvent& event) {
    return "id: " + std::to_string(event.tick_index) + "\nevent: transition\ndata: " + to_json(event).dump() + "\n\n";
}

void SessionService::mount(httplib::Server& server, const std::string& media_root) {
    auto guarded = [](auto&& body) {
        return [body](const httplib::Request& req, httplib::Response& res) {
            try {
                const json out = body(req);
                res.set_content(out.dump(), "application/json");
            } catch (const ServiceError& e) {
                res.status = e.status();
                res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            } catch (const json::exception& e) {
                res.status = 400;
                res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            } catch (const std::exception& e) {
                res.status = 500;
                res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            }
        };
    };
    auto parse_body = [](const httplib::Request& req) {
        if (req.body.empty()) return json::object();
        try {
            return json::parse(req.body);
        } catch (const json::parse_error& e) {
            throw ServiceError(400, std::string("malformed JSON body: ") + e.what());
        }
    };

    server.Post("/sessions", guarded([this, parse_body](const httplib::Request& req) {
        return create_session(parse_body(req));
    }));
    server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req) { return handle(req.matches[1]); }));
    server.Get(R"(/sessions/([^/]+)/current)",
               guarded([this](const httplib::Request& req) { return current_stimulus(req.matches[1]); }));
    server.Post(R"(/sessions/([^/]+)/ratings)", guarded([this, parse_body](const httplib::Request& req) {
        return submit_rating(req.matches[1], parse_body(req));
    }));
    server.Post(R"(/sessions/([^/]+)/tick)", guarded([this](const httplib::Request& req) { return advance(req.matches[1]); }));
    server.Get(R"(/sessions/([^/]+)/log)", guarded([this](const httplib::Request& req) { return session_log(req.matches[1]); }));

    // Server-sent events; resume with ?after=<tick_index> or Last-Event-ID.
    // ?format=json returns the currently available events as one JSON document.
    server.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        std::optional<std::size_t> after;
        try {
            find(id);
            if (req.has_param("after")) {
                after = std::stoull(req.get_param_value("after"));
            } else if (req.has_header("Last-Event-ID")) {
                after = std::stoull(req.get_header_value("Last-Event-ID"));
            }
        } catch (const ServiceError& e) {
            res.status = e.status();
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            return;
        } catch (const std::exception&) {
            res.status = 400;
            res.set_content(json{{"error", "resume index must be a non-negative integer"}}.dump(), "application/json");
            return;
        }
        if (req.get_param_value("format") == "json") {
            const auto batch = events_after(id, after);
            json events = json::array();
            for (const auto& e : batch.events) events.push_back(to_json(e));
            res.set_content(json{{"events", events}, {"finished", batch.finished}}.dump(), "application/json");
            return;
        }
        res.set_header("Cache-Control", "no-cache");
        auto cursor = std::make_shared<std::optional<std::size_t>>(after);
        res.set_chunked_content_provider("text/event-stream", [this, id, cursor](std::size_t, httplib::DataSink& sink) {
            const auto batch = events_after(id, *cursor, std::chrono::milliseconds(500));
            for (const auto& e : batch.events) {
                const auto frame = sse_frame(e);
                if (!sink.write(frame.data(), frame.size())) return false;
                *cursor = e.tick_index;
            }
            if (batch.finished) {
                static const std::string kEnd = "event: end\ndata: {\"status\":\"finished\"}\n\n";
                sink.write(kEnd.data(), kEnd.size());
                sink.done();
            } else if (batch.events.empty()) {
                static const std::string kKeepAlive = ": keep-alive\n\n";
                if (!sink.write(kKeepAlive.data(), kKeepAlive.size())) return false;
            }
            return true;
        });
    });

    if (!media_root.empty() && !server.set_mount_point("/media", media_root)) {
        throw std::runtime_error("media root '" + media_root + "' is not a directory");
    }
}

int serve(const ServiceOptions& options) {
    SessionService service;
    for (const auto& [name, path] : options.manifests) {
        const auto parsed = load_manifest(path);
        auto network = std::make_shared<const LifelogNetwork>(LifelogNetwork::build(parsed.records));
        spdlog::info("lifelog '{}': {} photos, {} component(s)", name, network->size(), network->report().component_count);
        service.add_lifelog(name, std::move(network));
    }
    httplib::Server server;
    service.mount(server, options.media_root);
    spdlog::info("listening on {}:{}", options.host, options.port);
    if (!server.listen(options.host, options.port)) {
        spdlog::error("could not listen on {}:{}", options.host, options.port);
        return 1;
    }
    return 0;
}

}  // namespace reminisce
