#pragma once

#include <map>
#include <string>
#include <vector>

#include "matching.hpp"

namespace nightsense {

// Classification targets derived from companion counts, plus the
// sex-composition target over friend events.
enum class Task {
    family_two,
    partner_two,
    friends_two,
    people_two,
    family_three,
    friends_three,
    people_three,
    sex_composition
};

const std::vector<std::string>& task_names();
Task task_from_name(const std::string& name);
const std::string& task_name(Task t);
bool is_three_class(Task t);
int class_count(Task t);

struct LabelOptions {
    int grouping_threshold = 1; // 1..10, three-class tasks only
    bool people_include_others = true;
};

// Category count feeding the task: friends = male + female friends; people =
// partner + family + friends (+ others when configured).
int category_count(const EventRow& row, Task t, const LabelOptions& opts);

// Two-class: 1 iff count >= 1. Three-class: 0 / 1 (count <= g) / 2 (> g).
// Sex composition: 0 same, 1 opposite, 2 mixed, -1 undefined (no friends).
int derive_label(const EventRow& row, Task t, const LabelOptions& opts);

struct LabeledDataset {
    EventDataset events;      // rows with an undefined label already dropped
    std::vector<int> labels;  // parallel to events.rows
    Task task = Task::friends_two;
    std::map<int, std::size_t> histogram;
};

LabeledDataset label_dataset(const EventDataset& ds, Task t, const LabelOptions& opts);

void write_labeled_csv(const std::string& path, const LabeledDataset& ds);
LabeledDataset read_labeled_csv(const std::string& path);

} // namespace nightsense
