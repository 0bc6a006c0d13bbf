#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "reminisce/session.hpp"

namespace httplib {
class Server;
}

namespace reminisce {

// Carries the HTTP status the error maps to.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::map<std::string, std::string> manifests;  // lifelog name -> manifest path
    std::string media_root;                        // served read-only under /media
};

// Sessions exposed over HTTP+JSON. Each session ticks on its own thread;
// handlers only call the session's public API under its lock.
class SessionService {
public:
    SessionService() = default;
    ~SessionService();
    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    void add_lifelog(const std::string& name, std::shared_ptr<const LifelogNetwork> network);

    // Request fields: lifelog, activation_enabled, reward_enabled, seed, tick_seconds,
    // session_duration, initial_photo, activation{}, utility{}, and
    // cadence ("realtime" | "manual") with optional wall_tick_ms.
    nlohmann::json create_session(const nlohmann::json& request);
    nlohmann::json handle(const std::string& session_id) const;
    nlohmann::json current_stimulus(const std::string& session_id) const;
    nlohmann::json submit_rating(const std::string& session_id, const nlohmann::json& body);
    nlohmann::json session_log(const std::string& session_id) const;
    // Advances a manual-cadence session by one tick.
    nlohmann::json advance(const std::string& session_id);

    // Events with tick_index > after (all when nullopt). Blocks up to `wait`
    // for at least one new event unless the session is finished.
    struct EventBatch {
        std::vector<TransitionEvent> events;
        bool finished = false;
    };
    EventBatch events_after(const std::string& session_id, std::optional<std::size_t> after,
                            std::chrono::milliseconds wait = std::chrono::milliseconds{0}) const;

    void mount(httplib::Server& server, const std::string& media_root = {});

    void stop_all();

private:
    struct Live {
        std::string id;
        std::string created_at;
        std::string lifelog;
        std::unique_ptr<Session> session;
        bool manual = false;
        std::chrono::milliseconds cadence{11000};
        mutable std::mutex mutex;
        mutable std::condition_variable_any changed;
        std::jthread runner;
    };

    std::shared_ptr<Live> find(const std::string& session_id) const;
    static nlohmann::json handle_json(const Live& live);
    static void run_ticks(std::stop_token stop, Live& live);

    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<const LifelogNetwork>> lifelogs_;
    std::map<std::string, std::shared_ptr<Live>> sessions_;
    std::size_t next_id_ = 1;
};

// Formats one server-sent event frame for a transition.
std::string sse_frame(const TransitionEvent& event);

// Loads the manifests and blocks serving until the process is stopped.
int serve(const ServiceOptions& options);

}  // namespace reminisce
