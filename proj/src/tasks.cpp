#include "reminisce/tasks.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace reminisce {

using nlohmann::json;

std::string_view to_string(Task task) {
    switch (task) {
        case Task::four_condition: return "four_condition";
        case Task::activation_flag: return "activation_flag";
        case Task::reward_flag: return "reward_flag";
        case Task::tmd_direction: return "tmd_direction";
        case Task::mood_rating_direction: return "mood_rating_direction";
    }
    return "unknown";
}

Task parse_task(std::string_view text) {
    for (auto t : {Task::four_condition, Task::activation_flag, Task::reward_flag, Task::tmd_direction,
                   Task::mood_rating_direction}) {
        if (to_string(t) == text) return t;
    }
    throw std::invalid_argument("unknown task '" + std::string(text) + "'");
}

std::string_view to_string(EvalMode mode) {
    return mode == EvalMode::pooled ? "pooled" : "per_participant";
}

EvalMode parse_mode(std::string_view text) {
    if (text == "pooled") return EvalMode::pooled;
    if (text == "per_participant") return EvalMode::per_participant;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

const std::vector<std::string>& task_labels(Task task) {
    static const std::vector<std::string> kConditions{"A0R0", "A0R1", "A1R0", "A1R1"};
    static const std::vector<std::string> kFlag{"on", "off"};
    static const std::vector<std::string> kDirection{"up", "down"};
    switch (task) {
        case Task::four_condition: return kConditions;
        case Task::activation_flag:
        case Task::reward_flag: return kFlag;
        case Task::tmd_direction:
        case Task::mood_rating_direction: return kDirection;
    }
    return kFlag;
}

std::string_view excluded_label(Task task) {
    return task == Task::tmd_direction || task == Task::mood_rating_direction ? "no_change" : "";
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else {
                quoted = !quoted;
            }
        } else if (c == ',' && !quoted) {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string feature_column(std::size_t d) {
    if (d == kProsodicDim) return "sentiment";
    char buf[8];
    std::snprintf(buf, sizeof buf, "f%03zu", d + 1);
    return buf;
}

}  // namespace

FeatureTable read_feature_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("feature CSV is empty");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "segment_id" || header[1] != "participant_id") {
        throw std::invalid_argument("feature CSV header must start with segment_id,participant_id");
    }
    FeatureTable table;
    std::size_t col = 2;
    for (; col < header.size() && header[col].rfind("label_", 0) == 0; ++col) table.label_columns.push_back(header[col].substr(6));
    if (header.size() - col != kFeatureDim) {
        throw std::invalid_argument("feature CSV must carry " + std::to_string(kFeatureDim) + " feature columns, found " +
                                    std::to_string(header.size() - col));
    }
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        if (header[col + d] != feature_column(d)) {
            throw std::invalid_argument("unexpected feature column '" + header[col + d] + "', expected '" + feature_column(d) + "'");
        }
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw std::invalid_argument("feature CSV line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        FeatureRow row;
        row.segment_id = cells[0];
        row.participant_id = cells[1];
        for (std::size_t l = 0; l < table.label_columns.size(); ++l) {
            if (!cells[2 + l].empty()) row.labels[table.label_columns[l]] = cells[2 + l];
        }
        row.values.reserve(kFeatureDim);
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
            const auto& cell = cells[col + d];
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) {
                throw std::invalid_argument("feature CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
            row.values.push_back(v);
        }
        validate_feature_vector({row.values, "", row.participant_id, row.segment_id});
        table.rows.push_back(std::move(row));
    }
    return table;
}

FeatureTable load_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature CSV '" + path + "'");
    return read_feature_csv(in);
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
    out << "segment_id,participant_id";
    for (const auto& l : table.label_columns) out << ",label_" << l;
    for (std::size_t d = 0; d < kFeatureDim; ++d) out << ',' << feature_column(d);
    out << '\n';
    char buf[32];
    for (const auto& row : table.rows) {
        out << row.segment_id << ',' << row.participant_id;
        for (const auto& l : table.label_columns) {
            auto it = row.labels.find(l);
            out << ',' << (it == row.labels.end() ? "" : it->second);
        }
        for (double v : row.values) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

Dataset dataset_for_task(const FeatureTable& table, Task task) {
    const std::string column(to_string(task));
    if (std::find(table.label_columns.begin(), table.label_columns.end(), column) == table.label_columns.end()) {
        throw std::invalid_argument("feature CSV has no label column 'label_" + column + "' for task " + column);
    }
    const auto& allowed = task_labels(task);
    const auto excluded = excluded_label(task);
    std::vector<FeatureVector> vectors;
    for (const auto& row : table.rows) {
        auto it = row.labels.find(column);
        if (it == row.labels.end()) continue;
        if (!excluded.empty() && it->second == excluded) continue;
        if (std::find(allowed.begin(), allowed.end(), it->second) == allowed.end()) {
            throw std::invalid_argument("unknown label '" + it->second + "' for task " + column);
        }
        vectors.push_back({row.values, it->second, row.participant_id, row.segment_id});
    }
    if (vectors.empty()) throw std::invalid_argument("no usable segments for task " + column);
    return Dataset::from_vectors(std::move(vectors), allowed);
}

TaskReport run_task(Task task, const Dataset& data, EvalMode mode, const GridSearchSpace& space, std::size_t k,
                    std::uint64_t seed) {
    const auto& allowed = task_labels(task);
    for (const auto& v : data.vectors) {
        if (std::find(allowed.begin(), allowed.end(), v.label) == allowed.end()) {
            throw std::invalid_argument("unknown label '" + v.label + "' for task " + std::string(to_string(task)));
        }
    }
    if (data.empty()) throw std::invalid_argument("no usable segments for task " + std::string(to_string(task)));

    TaskReport report;
    report.task = task;
    report.mode = mode;
    report.samples = data.size();
    if (mode == EvalMode::pooled) {
        report.pooled = grid_search(data, space, k, seed);
        return report;
    }

    std::map<std::string, std::vector<std::size_t>> by_participant;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& pid = data.vectors[i].participant_id;
        if (pid.empty()) throw std::invalid_argument("per-participant mode needs participant ids on every segment");
        by_participant[pid].push_back(i);
    }
    for (const auto& [pid, rows] : by_participant) {
        Dataset sub = Dataset::from_vectors(data.subset(rows).vectors, allowed);
        if (sub.label_set.size() < 2) {
            report.notes.push_back("participant " + pid + " skipped: only one class present");
            continue;
        }
        try {
            auto gs = grid_search(sub, space, k, seed);
            report.participants.push_back({pid, gs.best_result.accuracy, gs.best_result.f_measure, gs.best});
        } catch (const std::exception& e) {
            report.notes.push_back("participant " + pid + " skipped: " + e.what());
        }
    }
    if (!report.participants.empty()) {
        ParticipantRow mean{"Mean", 0.0, 0.0, {}};
        for (const auto& r : report.participants) {
            mean.accuracy += r.accuracy;
            mean.f_measure += r.f_measure;
        }
        mean.accuracy /= static_cast<double>(report.participants.size());
        mean.f_measure /= static_cast<double>(report.participants.size());
        report.mean = mean;
    }
    return report;
}

json to_json(const ConfusionMatrix& cm) {
    return {{"labels", cm.labels()}, {"rows", "predicted"}, {"columns", "true"}, {"counts", cm.counts()}};
}

json to_json(const SvmConfig& config) {
    json j{{"kernel", to_string(config.kernel)}, {"C", config.C}};
    if (config.kernel == KernelType::rbf) j["gamma"] = config.gamma;
    return j;
}

json to_json(const TaskReport& report) {
    json j{{"task", to_string(report.task)}, {"mode", to_string(report.mode)}, {"samples", report.samples}, {"notes", report.notes}};
    if (report.pooled) {
        const auto& gs = *report.pooled;
        j["accuracy"] = gs.best_result.accuracy;
        j["f_measure"] = gs.best_result.f_measure;
        j["confusion"] = to_json(gs.best_result.confusion);
        j["best_config"] = to_json(gs.best);
        json cells = json::array();
        for (const auto& c : gs.cells) {
            json cell = to_json(c.config);
            if (c.result) {
                cell["accuracy"] = c.result->accuracy;
                cell["f_measure"] = c.result->f_measure;
            } else {
                cell["error"] = c.error;
            }
            cells.push_back(cell);
        }
        j["grid"] = cells;
    } else {
        json rows = json::array();
        for (const auto& r : report.participants) {
            rows.push_back({{"participant_id", r.participant_id},
                            {"accuracy", r.accuracy},
                            {"f_measure", r.f_measure},
                            {"best_config", to_json(r.best_config)}});
        }
        j["participants"] = rows;
        if (report.mean) j["mean"] = {{"accuracy", report.mean->accuracy}, {"f_measure", report.mean->f_measure}};
    }
    return j;
}

}  // namespace reminisce
