#include "reminisce/lifelog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "reminisce/rng.hpp"

namespace reminisce {

using nlohmann::json;

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::person: return "person";
        case AttributeKind::object: return "object";
        case AttributeKind::location: return "location";
        case AttributeKind::time: return "time";
    }
    return "unknown";
}

AttributeKind parse_kind(std::string_view text) {
    for (auto kind : kAllKinds) {
        if (to_string(kind) == text) return kind;
    }
    if (text == "p") return AttributeKind::person;
    if (text == "o") return AttributeKind::object;
    if (text == "l") return AttributeKind::location;
    if (text == "t") return AttributeKind::time;
    throw std::invalid_argument("unknown attribute kind '" + std::string(text) + "'");
}

std::string to_string(const AttributeKey& key) {
    return std::string(to_string(key.kind)) + ":" + key.value;
}

AttributeKey parse_attribute_key(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("attribute key must look like kind:value, got '" + std::string(text) + "'");
    }
    return {parse_kind(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

ManifestError::ManifestError(std::size_t line, const std::string& message)
    : std::runtime_error("manifest line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '"') {
            if (quoted && i + 1 < text.size() && text[i + 1] == '"') {
                current.push_back('"');
                ++i;
            } else {
                quoted = !quoted;
            }
        } else if (c == sep && !quoted) {
            out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(std::move(current));
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::set<std::string> split_tags(std::string_view field) {
    std::set<std::string> tags;
    for (auto& part : split(field, ';')) {
        auto tag = trim(part);
        if (!tag.empty()) tags.insert(std::move(tag));
    }
    return tags;
}

void check_timestamp(std::size_t line, std::int64_t ts) {
    if (ts <= 0) throw ManifestError(line, "timestamp must be strictly positive");
}

PhotoRecord parse_json_row(const std::string& text, std::size_t line) {
    json row;
    try {
        row = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ManifestError(line, std::string("malformed JSON: ") + e.what());
    }
    if (!row.is_object()) throw ManifestError(line, "row is not a JSON object");

    PhotoRecord record;
    try {
        if (!row.contains("photo_id") || !row["photo_id"].is_string()) {
            throw ManifestError(line, "missing string field 'photo_id'");
        }
        record.photo_id = row["photo_id"].get<std::string>();
        if (record.photo_id.empty()) throw ManifestError(line, "empty photo_id");
        record.media_path = row.value("media_path", std::string{});
        if (auto it = row.find("persons"); it != row.end() && !it->is_null()) {
            for (const auto& p : *it) record.persons.insert(p.get<std::string>());
        }
        if (auto it = row.find("objects"); it != row.end() && !it->is_null()) {
            for (const auto& o : *it) record.objects.insert(o.get<std::string>());
        }
        if (auto it = row.find("gps"); it != row.end() && !it->is_null()) {
            if (!it->is_array() || it->size() != 2) throw ManifestError(line, "gps must be [lat, lon] or null");
            record.gps = GeoPoint{(*it)[0].get<double>(), (*it)[1].get<double>()};
        }
        if (auto it = row.find("timestamp"); it != row.end() && !it->is_null()) {
            record.timestamp = it->get<std::int64_t>();
            check_timestamp(line, *record.timestamp);
        }
    } catch (const json::exception& e) {
        throw ManifestError(line, std::string("bad field type: ") + e.what());
    }
    return record;
}

PhotoRecord parse_csv_row(const std::string& text, std::size_t line) {
    const auto fields = split(text, ',');
    if (fields.size() != 7) {
        throw ManifestError(line, "expected 7 columns, found " + std::to_string(fields.size()));
    }
    PhotoRecord record;
    record.photo_id = trim(fields[0]);
    if (record.photo_id.empty()) throw ManifestError(line, "empty photo_id");
    record.media_path = trim(fields[1]);
    record.persons = split_tags(fields[2]);
    record.objects = split_tags(fields[3]);
    const auto lat = trim(fields[4]);
    const auto lon = trim(fields[5]);
    try {
        if (!lat.empty() || !lon.empty()) {
            if (lat.empty() || lon.empty()) throw ManifestError(line, "lat and lon must both be present");
            std::size_t used = 0;
            const double la = std::stod(lat, &used);
            if (used != lat.size()) throw ManifestError(line, "bad latitude");
            const double lo = std::stod(lon, &used);
            if (used != lon.size()) throw ManifestError(line, "bad longitude");
            record.gps = GeoPoint{la, lo};
        }
        const auto ts = trim(fields[6]);
        if (!ts.empty()) {
            std::size_t used = 0;
            record.timestamp = std::stoll(ts, &used);
            if (used != ts.size()) throw ManifestError(line, "bad timestamp");
            check_timestamp(line, *record.timestamp);
        }
    } catch (const std::logic_error&) {
        throw ManifestError(line, "unparseable numeric field");
    }
    return record;
}

}  // namespace

ManifestParseResult parse_manifest(std::istream& source, ManifestFormat format) {
    ManifestParseResult result;
    std::set<PhotoId> seen;
    std::string text;
    std::size_t line = 0;
    bool header_pending = format == ManifestFormat::csv;
    while (std::getline(source, text)) {
        ++line;
        if (trim(text).empty()) continue;
        if (header_pending) {
            header_pending = false;
            if (text.rfind("photo_id", 0) == 0) continue;
        }
        auto record = format == ManifestFormat::json_lines ? parse_json_row(text, line) : parse_csv_row(text, line);
        if (!seen.insert(record.photo_id).second) {
            throw ManifestError(line, "duplicate photo_id '" + record.photo_id + "'");
        }
        if (!record.has_usable_attributes()) result.unusable_rows.push_back(line);
        result.records.push_back(std::move(record));
    }
    return result;
}

ManifestParseResult load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return parse_manifest(in, csv ? ManifestFormat::csv : ManifestFormat::json_lines);
}

void write_manifest_jsonl(std::ostream& out, const std::vector<PhotoRecord>& records) {
    for (const auto& r : records) {
        json row;
        row["photo_id"] = r.photo_id;
        row["media_path"] = r.media_path;
        row["persons"] = r.persons;
        row["objects"] = r.objects;
        row["gps"] = r.gps ? json::array({r.gps->lat, r.gps->lon}) : json(nullptr);
        row["timestamp"] = r.timestamp ? json(*r.timestamp) : json(nullptr);
        out << row.dump() << '\n';
    }
}

namespace {

std::string time_bucket(std::int64_t ts, TimeGranularity granularity) {
    using namespace std::chrono;
    const sys_days day = floor<days>(sys_seconds{seconds{ts}});
    const year_month_day ymd{day};
    char buf[32];
    const int y = static_cast<int>(ymd.year());
    const unsigned m = static_cast<unsigned>(ymd.month());
    const unsigned d = static_cast<unsigned>(ymd.day());
    switch (granularity) {
        case TimeGranularity::year: std::snprintf(buf, sizeof buf, "%04d", y); break;
        case TimeGranularity::month: std::snprintf(buf, sizeof buf, "%04d-%02u", y, m); break;
        case TimeGranularity::day: std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d); break;
    }
    return buf;
}

int cell_decimals(double cell) {
    int decimals = 0;
    double scaled = cell;
    while (decimals < 9 && std::abs(scaled - std::round(scaled)) > 1e-9) {
        scaled *= 10.0;
        ++decimals;
    }
    return decimals;
}

std::string location_bucket(const GeoPoint& gps, double cell) {
    // Small epsilon keeps values such as 34.7 in their own cell despite 34.7/0.1 < 347.
    const double lat_cell = std::floor(gps.lat / cell + 1e-9) * cell;
    const double lon_cell = std::floor(gps.lon / cell + 1e-9) * cell;
    const int decimals = cell_decimals(cell);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f,%.*f", decimals, lat_cell + 0.0, decimals, lon_cell + 0.0);
    return buf;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::set<AttributeKey> bucketize(const PhotoRecord& record, const BucketPolicy& policy) {
    std::set<AttributeKey> keys;
    for (const auto& p : record.persons) keys.insert({AttributeKind::person, p});
    for (const auto& o : record.objects) keys.insert({AttributeKind::object, o});
    if (record.gps) keys.insert({AttributeKind::location, location_bucket(*record.gps, policy.location_cell_degrees)});
    if (record.timestamp) keys.insert({AttributeKind::time, time_bucket(*record.timestamp, policy.time_granularity)});
    return keys;
}

LifelogNetwork LifelogNetwork::build(const std::vector<PhotoRecord>& records, const BucketPolicy& policy) {
    if (records.empty()) throw std::invalid_argument("cannot build a lifelog network from zero records");
    if (!(policy.location_cell_degrees > 0.0)) throw std::invalid_argument("location cell size must be positive");

    LifelogNetwork net;
    net.policy_ = policy;
    for (const auto& r : records) {
        if (!net.photos_.emplace(r.photo_id, r).second) {
            throw std::invalid_argument("duplicate photo_id '" + r.photo_id + "'");
        }
    }
    for (const auto& [id, record] : net.photos_) {
        auto keys = bucketize(record, policy);
        for (const auto& k : keys) net.edges_[k].insert(id);
        net.attribute_index_.emplace(id, std::move(keys));
    }

    std::map<PhotoId, std::size_t> position;
    for (const auto& [id, _] : net.photos_) position.emplace(id, position.size());
    UnionFind uf(net.photos_.size());
    for (const auto& [key, members] : net.edges_) {
        const auto first = position.at(*members.begin());
        for (const auto& m : members) uf.unite(first, position.at(m));
    }
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t i = 0; i < position.size(); ++i) ++sizes[uf.find(i)];
    for (const auto& [_, n] : sizes) net.report_.component_sizes.push_back(n);
    std::sort(net.report_.component_sizes.rbegin(), net.report_.component_sizes.rend());
    net.report_.component_count = sizes.size();
    for (const auto& [id, pos] : position) {
        if (sizes.at(uf.find(pos)) == 1) net.report_.isolated.push_back(id);
    }
    return net;
}

const PhotoRecord& LifelogNetwork::photo(const PhotoId& id) const {
    auto it = photos_.find(id);
    if (it == photos_.end()) throw std::out_of_range("unknown photo '" + id + "'");
    return it->second;
}

const std::set<AttributeKey>& LifelogNetwork::keys_of(const PhotoId& id) const {
    auto it = attribute_index_.find(id);
    if (it == attribute_index_.end()) throw std::out_of_range("unknown photo '" + id + "'");
    return it->second;
}

std::size_t LifelogNetwork::fan(const AttributeKey& key) const {
    auto it = edges_.find(key);
    return it == edges_.end() ? 0 : it->second.size();
}

std::vector<AttributeKind> LifelogNetwork::available_kinds(const PhotoId& id) const {
    std::vector<AttributeKind> kinds;
    const auto& keys = keys_of(id);
    for (auto kind : kAllKinds) {
        const bool shared = std::any_of(keys.begin(), keys.end(),
                                        [&](const AttributeKey& k) { return k.kind == kind && fan(k) >= 2; });
        if (shared) kinds.push_back(kind);
    }
    return kinds;
}

std::vector<PhotoId> LifelogNetwork::neighbours(const PhotoId& id, AttributeKind kind) const {
    std::set<PhotoId> out;
    for (const auto& key : keys_of(id)) {
        if (key.kind != kind) continue;
        const auto& members = edges_.at(key);
        out.insert(members.begin(), members.end());
    }
    return {out.begin(), out.end()};
}

std::string LifelogNetwork::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [id, keys] : attribute_index_) {
        feed(id);
        feed(photos_.at(id).media_path);
        for (const auto& k : keys) feed(to_string(k));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<PhotoRecord> generate_synthetic_lifelog(std::size_t count, std::uint64_t seed) {
    static const std::vector<std::string> kFamily{"mom", "dad", "sister", "grandma"};
    static const std::vector<std::string> kObjects{
        "beach", "cake", "car", "cat", "dog", "flower", "food", "mountain", "river", "temple",
        "train", "tree", "building", "bicycle", "boat", "bridge", "castle", "garden", "lake", "park",
        "snow", "sunset", "table", "tower", "umbrella", "ball", "book", "guitar", "kimono", "lantern"};
    constexpr std::size_t kPlaces = 24;
    constexpr std::size_t kEventSize = 5;

    Rng rng(seed);
    std::vector<GeoPoint> places;
    for (std::size_t i = 0; i < kPlaces; ++i) {
        // Cell centres of a 0.1 degree grid around central Japan.
        const double lat = 33.0 + 0.1 * static_cast<double>(rng.index(40)) + 0.05;
        const double lon = 135.0 + 0.1 * static_cast<double>(rng.index(50)) + 0.05;
        places.push_back({lat, lon});
    }

    const std::int64_t start = 1325376000;  // 2012-01-01
    const std::int64_t span_days = 365 * 10;
    std::vector<PhotoRecord> out;
    out.reserve(count);
    while (out.size() < count) {
        const std::int64_t day = start + static_cast<std::int64_t>(rng.index(span_days)) * 86400;
        const auto& place = places[rng.index(kPlaces)];
        const std::string family = kFamily[rng.index(kFamily.size())];
        const std::string friend_name = "friend" + std::to_string(rng.index(40));
        for (std::size_t k = 0; k < kEventSize && out.size() < count; ++k) {
            PhotoRecord r;
            char id[32];
            std::snprintf(id, sizeof id, "p%03zu", out.size());
            r.photo_id = id;
            r.media_path = std::string("photos/") + id + ".jpg";
            if (k == 0) r.persons.insert("mom");
            if (rng.uniform() < 0.6) r.persons.insert(family);
            if (rng.uniform() < 0.5) r.persons.insert(friend_name);
            const std::size_t n_objects = 1 + rng.index(2);
            for (std::size_t j = 0; j < n_objects; ++j) r.objects.insert(kObjects[rng.index(kObjects.size())]);
            r.gps = GeoPoint{place.lat + (rng.uniform() - 0.5) * 0.06, place.lon + (rng.uniform() - 0.5) * 0.06};
            r.timestamp = day + static_cast<std::int64_t>(rng.index(6 * 3600)) + 9 * 3600;
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace reminisce
