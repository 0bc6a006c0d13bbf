#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reminisce {

using PhotoId = std::string;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

// Raw metadata of one lifelog photo as it arrives in a manifest.
struct PhotoRecord {
    PhotoId photo_id;
    std::string media_path;
    std::set<std::string> persons;
    std::set<std::string> objects;
    std::optional<GeoPoint> gps;
    std::optional<std::int64_t> timestamp;  // seconds since epoch, > 0 when present

    bool has_usable_attributes() const {
        return !persons.empty() || !objects.empty() || gps.has_value() || timestamp.has_value();
    }
};

// Who / What / Where / When. Order matters: it fixes iteration and tie order.
enum class AttributeKind : std::uint8_t { person = 0, object = 1, location = 2, time = 3 };

inline constexpr std::array<AttributeKind, 4> kAllKinds{
    AttributeKind::person, AttributeKind::object, AttributeKind::location, AttributeKind::time};

std::string_view to_string(AttributeKind kind);
AttributeKind parse_kind(std::string_view text);  // throws std::invalid_argument

struct AttributeKey {
    AttributeKind kind = AttributeKind::person;
    std::string value;

    auto operator<=>(const AttributeKey&) const = default;
    bool operator==(const AttributeKey&) const = default;
};

std::string to_string(const AttributeKey& key);    // "person:mom"
AttributeKey parse_attribute_key(std::string_view text);

enum class TimeGranularity { year, month, day };

struct BucketPolicy {
    TimeGranularity time_granularity = TimeGranularity::month;
    double location_cell_degrees = 0.1;
};

enum class ManifestFormat { json_lines, csv };

class ManifestError : public std::runtime_error {
public:
    ManifestError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ManifestParseResult {
    std::vector<PhotoRecord> records;
    // 1-based line numbers of rows that carried no usable attribute.
    std::vector<std::size_t> unusable_rows;
};

ManifestParseResult parse_manifest(std::istream& source, ManifestFormat format);
ManifestParseResult load_manifest(const std::string& path);  // format from extension
void write_manifest_jsonl(std::ostream& out, const std::vector<PhotoRecord>& records);

std::set<AttributeKey> bucketize(const PhotoRecord& record, const BucketPolicy& policy = {});

struct ConnectivityReport {
    std::size_t component_count = 0;
    std::vector<std::size_t> component_sizes;  // descending
    std::vector<PhotoId> isolated;             // photos sharing no key with any other photo
};

// Attribute-linked photo graph. Immutable after construction.
class LifelogNetwork {
public:
    static LifelogNetwork build(const std::vector<PhotoRecord>& records, const BucketPolicy& policy = {});

    const std::map<PhotoId, PhotoRecord>& photos() const { return photos_; }
    const std::map<AttributeKey, std::set<PhotoId>>& edges() const { return edges_; }
    const std::map<PhotoId, std::set<AttributeKey>>& attribute_index() const { return attribute_index_; }
    const ConnectivityReport& report() const { return report_; }
    const BucketPolicy& policy() const { return policy_; }

    std::size_t size() const { return photos_.size(); }
    bool contains(const PhotoId& id) const { return photos_.count(id) != 0; }
    const PhotoRecord& photo(const PhotoId& id) const;
    const std::set<AttributeKey>& keys_of(const PhotoId& id) const;
    std::size_t fan(const AttributeKey& key) const;

    // Kinds for which `id` has at least one key shared with another photo.
    std::vector<AttributeKind> available_kinds(const PhotoId& id) const;

    // Photos (including `id` itself) sharing any key of `kind` with `id`.
    std::vector<PhotoId> neighbours(const PhotoId& id, AttributeKind kind) const;

    // FNV-1a over the canonical key index; stable across record order.
    std::string content_hash() const;

private:
    std::map<PhotoId, PhotoRecord> photos_;
    std::map<AttributeKey, std::set<PhotoId>> edges_;
    std::map<PhotoId, std::set<AttributeKey>> attribute_index_;
    ConnectivityReport report_;
    BucketPolicy policy_;
};

// Connected lifelog of `count` photos grouped into events (trips, outings).
// Consecutive events share a person, so the graph is always one component.
std::vector<PhotoRecord> generate_synthetic_lifelog(std::size_t count, std::uint64_t seed);

}  // namespace reminisce
