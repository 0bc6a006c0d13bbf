#pragma once

#include <memory>
#include <string>
#include <vector>

#include "reminisce/lifelog.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(REMINISCE_DATA_DIR) + "/" + name; }

inline reminisce::PhotoRecord photo(std::string id, std::vector<std::string> persons = {},
                                    std::vector<std::string> objects = {}) {
    reminisce::PhotoRecord r;
    r.photo_id = id;
    r.media_path = id + ".jpg";
    r.persons.insert(persons.begin(), persons.end());
    r.objects.insert(objects.begin(), objects.end());
    return r;
}

inline std::shared_ptr<const reminisce::LifelogNetwork> bundled_lifelog() {
    static const auto network = std::make_shared<const reminisce::LifelogNetwork>(
        reminisce::LifelogNetwork::build(reminisce::load_manifest(data_path("lifelog_200.jsonl")).records));
    return network;
}

inline std::shared_ptr<const reminisce::LifelogNetwork> network_of(const std::vector<reminisce::PhotoRecord>& records) {
    return std::make_shared<const reminisce::LifelogNetwork>(reminisce::LifelogNetwork::build(records));
}

}  // namespace fixtures
