#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reminisce/dataset.hpp"
#include "reminisce/validation.hpp"

namespace reminisce {

enum class Task { four_condition, activation_flag, reward_flag, tmd_direction, mood_rating_direction };
enum class EvalMode { pooled, per_participant };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);
std::string_view to_string(EvalMode mode);
EvalMode parse_mode(std::string_view text);

// Accepted labels per task, in canonical (positive-first) order.
const std::vector<std::string>& task_labels(Task task);
// Label marking segments the task drops ("no_change" for direction tasks), or empty.
std::string_view excluded_label(Task task);

struct FeatureRow {
    std::string segment_id;
    std::string participant_id;
    std::map<std::string, std::string> labels;  // column suffix -> label; empty cells omitted
    std::vector<double> values;                 // kFeatureDim entries
};

struct FeatureTable {
    std::vector<std::string> label_columns;  // suffixes after "label_"
    std::vector<FeatureRow> rows;
};

// Header: segment_id,participant_id,label_<task>...,f001..f088,sentiment
FeatureTable read_feature_csv(std::istream& in);
FeatureTable load_feature_csv(const std::string& path);
void write_feature_csv(std::ostream& out, const FeatureTable& table);

// Rows labelled for `task`, excluded labels dropped. Throws std::invalid_argument
// when the label column is missing, a label is unknown, or nothing remains.
Dataset dataset_for_task(const FeatureTable& table, Task task);

struct ParticipantRow {
    std::string participant_id;
    double accuracy = 0.0;
    double f_measure = 0.0;
    SvmConfig best_config;
};

struct TaskReport {
    Task task = Task::four_condition;
    EvalMode mode = EvalMode::pooled;
    std::size_t samples = 0;
    // Pooled mode.
    std::optional<GridSearchResult> pooled;
    // Per-participant mode.
    std::vector<ParticipantRow> participants;
    std::optional<ParticipantRow> mean;  // participant_id "Mean"
    std::vector<std::string> notes;
};

TaskReport run_task(Task task, const Dataset& data, EvalMode mode, const GridSearchSpace& space = GridSearchSpace::defaults(),
                    std::size_t k = 5, std::uint64_t seed = 0);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const SvmConfig& config);
nlohmann::json to_json(const TaskReport& report);

}  // namespace reminisce
