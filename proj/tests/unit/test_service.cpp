#include <filesystem>
#include <fstream>
#include <thread>

#include <doctest.h>
#include <httplib.h>

#include "fixtures.hpp"
#include "reminisce/json_io.hpp"
#include "reminisce/service.hpp"

using namespace reminisce;

namespace {

// Service mounted on an ephemeral port for the lifetime of the fixture.
struct LiveServer {
    SessionService service;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit LiveServer(const std::string& media_root = {}) {
        service.add_lifelog("default", fixtures::bundled_lifelog());
        service.mount(server, media_root);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LiveServer() {
        service.stop_all();
        server.stop();
        thread.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(10, 0);
        return c;
    }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expected) {
    auto res = c.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expected);
    return json::parse(res->body);
}

json get(httplib::Client& c, const std::string& path, int expected = 200) {
    auto res = c.Get(path);
    REQUIRE(res);
    CHECK(res->status == expected);
    return json::parse(res->body);
}

std::string create_manual(httplib::Client& c, json extra = json::object()) {
    json body{{"activation_enabled", true}, {"reward_enabled", true}, {"seed", 5}, {"cadence", "manual"}};
    body.update(extra);
    const auto handle = post(c, "/sessions", body, 200);
    return handle["session_id"];
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("session creation and validation") {
    LiveServer s;
    auto c = s.client();
    const auto handle = post(c, "/sessions", {{"activation_enabled", false}, {"reward_enabled", true}, {"seed", 1}, {"cadence", "manual"}}, 200);
    CHECK(handle["status"] == "running");
    CHECK(handle["condition"] == "A0R1");
    CHECK(handle["cadence"] == "manual");
    CHECK(get(c, "/sessions/" + handle["session_id"].get<std::string>())["status"] == "running");

    CHECK(post(c, "/sessions", {{"lifelog", "nope"}}, 404).contains("error"));
    CHECK(post(c, "/sessions", {{"tick_seconds", 0}}, 400).contains("error"));
    CHECK(post(c, "/sessions", {{"activation_enabled", "yes"}}, 400).contains("error"));
    CHECK(post(c, "/sessions", {{"cadence", "hourly"}}, 400).contains("error"));
    CHECK(post(c, "/sessions", json::array(), 400).contains("error"));
    auto res = c.Post("/sessions", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    get(c, "/sessions/unknown", 404);
    get(c, "/sessions/unknown/current", 404);
}

TEST_CASE("current stimulus tracks ticks") {
    LiveServer s;
    auto c = s.client();
    const auto id = create_manual(c, {{"session_duration", 33}});
    const auto initial = get(c, "/sessions/" + id + "/current");
    CHECK(initial["tick_index"].is_null());
    CHECK(initial["remaining_seconds"] == 33.0);
    const auto log0 = get(c, "/sessions/" + id + "/log");
    CHECK(initial["photo_id"] == log0["initial_photo"]);
    CHECK(initial["media_path"] == fixtures::bundled_lifelog()->photo(initial["photo_id"]).media_path);

    for (int t = 0; t < 3; ++t) {
        const auto event = post(c, "/sessions/" + id + "/tick", json::object(), 200);
        const auto now = get(c, "/sessions/" + id + "/current");
        CHECK(now["tick_index"] == t);
        CHECK(now["photo_id"] == event["photo_id"]);
    }
    const auto done = get(c, "/sessions/" + id + "/current");
    CHECK(done["status"] == "finished");
    CHECK(done["remaining_seconds"] == 0.0);
    post(c, "/sessions/" + id + "/tick", json::object(), 409);
}

TEST_CASE("ratings are acknowledged for the next tick and applied there") {
    LiveServer s;
    auto c = s.client();
    const auto id = create_manual(c, {{"activation_enabled", false}});
    post(c, "/sessions/" + id + "/tick", json::object(), 200);
    post(c, "/sessions/" + id + "/tick", json::object(), 200);
    const auto current = get(c, "/sessions/" + id + "/current");

    const auto ack = post(c, "/sessions/" + id + "/ratings", {{"rating", 5}}, 200);
    CHECK(ack["queued_for_tick"] == 2);
    CHECK(ack["target_photo"] == current["photo_id"]);
    const auto second = post(c, "/sessions/" + id + "/ratings", {{"rating", 4}}, 200);
    CHECK(second["queued_for_tick"] == 2);

    post(c, "/sessions/" + id + "/ratings", {{"rating", 7}}, 400);
    post(c, "/sessions/" + id + "/ratings", {{"rating", "five"}}, 400);
    post(c, "/sessions/" + id + "/ratings", {{"rating", 0}}, 400);

    const auto event = post(c, "/sessions/" + id + "/tick", json::object(), 200);
    CHECK(event["tick_index"] == 2);
    CHECK(event["ratings_received"] == 2);
    REQUIRE(event["reward_applied"].size() == 2);
    CHECK(event["reward_applied"][0]["reward"].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(event["reward_applied"][0]["target_photo"] == current["photo_id"]);

    const auto log = session_log_from_json(get(c, "/sessions/" + id + "/log"));
    REQUIRE(log.events.size() == 3);
    CHECK(log.events[2].rewards.size() == 2);
    CHECK(log.events[2].rewards[0].rating == 5);
    CHECK(replay_utilities(log) == log.final_rules);
}

TEST_CASE("finished sessions reject ratings") {
    LiveServer s;
    auto c = s.client();
    const auto id = create_manual(c, {{"session_duration", 11}});
    post(c, "/sessions/" + id + "/tick", json::object(), 200);
    post(c, "/sessions/" + id + "/ratings", {{"rating", 4}}, 409);
    CHECK(get(c, "/sessions/" + id)["status"] == "finished");
}

TEST_CASE("sessions on one lifelog are independent") {
    LiveServer s;
    auto c = s.client();
    const auto a = create_manual(c, {{"seed", 9}});
    const auto b = create_manual(c, {{"seed", 9}});
    CHECK(a != b);
    post(c, "/sessions/" + a + "/ratings", {{"rating", 6}}, 200);
    for (int t = 0; t < 4; ++t) post(c, "/sessions/" + a + "/tick", json::object(), 200);
    CHECK(get(c, "/sessions/" + a + "/log")["events"].size() == 4);
    CHECK(get(c, "/sessions/" + b + "/log")["events"].size() == 0);
    for (int t = 0; t < 4; ++t) post(c, "/sessions/" + b + "/tick", json::object(), 200);
    const auto la = get(c, "/sessions/" + a + "/log");
    const auto lb = get(c, "/sessions/" + b + "/log");
    CHECK(la["initial_photo"] == lb["initial_photo"]);
    CHECK(la["events"][0]["ratings_received"] == 1);
    CHECK(lb["events"][0]["ratings_received"] == 0);
}

TEST_CASE("event stream as json supports resume") {
    LiveServer s;
    auto c = s.client();
    const auto id = create_manual(c, {{"session_duration", 88}});
    for (int t = 0; t < 8; ++t) post(c, "/sessions/" + id + "/tick", json::object(), 200);
    const auto all = get(c, "/sessions/" + id + "/events?format=json");
    CHECK(all["events"].size() == 8);
    CHECK(all["finished"] == true);
    const auto resumed = get(c, "/sessions/" + id + "/events?format=json&after=5");
    REQUIRE(resumed["events"].size() == 2);
    CHECK(resumed["events"][0]["tick_index"] == 6);
    CHECK(resumed["events"][1]["tick_index"] == 7);
    get(c, "/sessions/" + id + "/events?format=json&after=x", 400);
}

TEST_CASE("server-sent events stream in order and end with a marker") {
    LiveServer s;
    auto c = s.client();
    const auto handle = post(c, "/sessions",
                             {{"activation_enabled", true}, {"reward_enabled", false}, {"seed", 2},
                              {"session_duration", 55}, {"wall_tick_ms", 20}},
                             200);
    const std::string id = handle["session_id"];
    CHECK(handle["cadence"] == "realtime");

    std::string body;
    auto res = c.Get("/sessions/" + id + "/events", [&](const char* data, std::size_t n) {
        body.append(data, n);
        return true;
    });
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type").find("text/event-stream") != std::string::npos);
    for (int t = 0; t < 5; ++t) CHECK(body.find("id: " + std::to_string(t) + "\nevent: transition\n") != std::string::npos);
    CHECK(body.find("id: 0\n") < body.find("id: 4\n"));
    CHECK(body.find("event: end") != std::string::npos);

    std::string tail;
    httplib::Headers headers{{"Last-Event-ID", "3"}};
    auto resumed = c.Get("/sessions/" + id + "/events", headers, [&](const char* data, std::size_t n) {
        tail.append(data, n);
        return true;
    });
    REQUIRE(resumed);
    CHECK(tail.find("id: 3\n") == std::string::npos);
    CHECK(tail.find("id: 4\n") != std::string::npos);
    CHECK(tail.find("event: end") != std::string::npos);

    const auto log = get(c, "/sessions/" + id + "/log");
    CHECK(log["events"].size() == 5);
    CHECK(log["header"]["status"] == "finished");
}

TEST_CASE("sse frames carry the tick index as id") {
    TransitionEvent e;
    e.tick_index = 12;
    e.photo_id = "p1";
    const auto frame = sse_frame(e);
    CHECK(frame.rfind("id: 12\nevent: transition\ndata: {", 0) == 0);
    CHECK(frame.substr(frame.size() - 2) == "\n\n");
    const auto data = json::parse(frame.substr(frame.find("data: ") + 6));
    CHECK(data["photo_id"] == "p1");
}

TEST_CASE("manual ticking is refused on realtime sessions") {
    LiveServer s;
    auto c = s.client();
    const auto handle = post(c, "/sessions", {{"seed", 3}, {"wall_tick_ms", 60000}}, 200);
    post(c, "/sessions/" + handle["session_id"].get<std::string>() + "/tick", json::object(), 409);
}

TEST_CASE("media files are served read-only from the media root") {
    const auto root = std::filesystem::temp_directory_path() / "reminisce_media_test";
    std::filesystem::create_directories(root / "2020");
    std::ofstream(root / "2020" / "p001.jpg", std::ios::binary) << "jpegbytes";
    std::ofstream(root.parent_path() / "reminisce_outside.txt") << "secret";
    {
        LiveServer live(root.string());
        auto c = live.client();
        auto res = c.Get("/media/2020/p001.jpg");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->body == "jpegbytes");
        res = c.Get("/media/missing.jpg");
        REQUIRE(res);
        CHECK(res->status == 404);
        res = c.Get("/media/../reminisce_outside.txt");
        REQUIRE(res);
        CHECK(res->status != 200);
        res = c.Post("/media/2020/new.jpg", "x", "image/jpeg");
        REQUIRE(res);
        CHECK(res->status >= 400);
        CHECK_FALSE(std::filesystem::exists(root / "2020" / "new.jpg"));
    }
    std::filesystem::remove_all(root);
    std::filesystem::remove(root.parent_path() / "reminisce_outside.txt");

    SessionService service;
    httplib::Server server;
    CHECK_THROWS_AS(service.mount(server, "/nonexistent/media/root"), std::runtime_error);
}

}
