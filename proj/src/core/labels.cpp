#include "labels.hpp"

#include "common.hpp"
#include "csvio.hpp"

namespace nightsense {

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = {
        "family_two",   "partner_two",   "friends_two",  "people_two",
        "family_three", "friends_three", "people_three", "sex_composition"};
    return names;
}

Task task_from_name(const std::string& name) {
    const auto& names = task_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<Task>(i);
    }
    throw input_error("unknown task '" + name + "'");
}

const std::string& task_name(Task t) {
    return task_names()[static_cast<std::size_t>(t)];
}

bool is_three_class(Task t) {
    return t == Task::family_three || t == Task::friends_three || t == Task::people_three ||
           t == Task::sex_composition;
}

int class_count(Task t) {
    return is_three_class(t) ? 3 : 2;
}

int category_count(const EventRow& row, Task t, const LabelOptions& opts) {
    const int friends = row.male_friends + row.female_friends;
    switch (t) {
        case Task::family_two:
        case Task::family_three:
            return row.family;
        case Task::partner_two:
            return row.partner;
        case Task::friends_two:
        case Task::friends_three:
            return friends;
        case Task::people_two:
        case Task::people_three:
            return row.partner + row.family + friends + (opts.people_include_others ? row.others : 0);
        case Task::sex_composition:
            return friends;
    }
    throw internal_error("unreachable task");
}

int derive_label(const EventRow& row, Task t, const LabelOptions& opts) {
    if (t == Task::sex_composition) {
        const bool men = row.male_friends >= 1;
        const bool women = row.female_friends >= 1;
        if (!men && !women) return -1;
        if (men && women) return 2;
        const bool friends_are_women = women;
        const bool participant_is_woman = row.sex == "woman";
        return friends_are_women == participant_is_woman ? 0 : 1;
    }
    const int count = category_count(row, t, opts);
    if (!is_three_class(t)) return count >= 1 ? 1 : 0;
    const int g = opts.grouping_threshold;
    if (g < 1 || g > 10) throw input_error("grouping threshold must be in 1..10");
    if (count == 0) return 0;
    return count <= g ? 1 : 2;
}

LabeledDataset label_dataset(const EventDataset& ds, Task t, const LabelOptions& opts) {
    LabeledDataset out;
    out.task = t;
    for (const auto& row : ds.rows) {
        const int label = derive_label(row, t, opts);
        if (label < 0) continue;
        out.events.rows.push_back(row);
        out.labels.push_back(label);
        ++out.histogram[label];
    }
    return out;
}

void write_labeled_csv(const std::string& path, const LabeledDataset& ds) {
    CsvTable t = events_to_table(ds.events);
    t.header.push_back("task");
    t.header.push_back("label");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        t.rows[i].push_back(task_name(ds.task));
        t.rows[i].push_back(format_int(ds.labels[i]));
    }
    write_csv(path, t);
}

LabeledDataset read_labeled_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header.size() < 2 || t.header[t.header.size() - 2] != "task" || t.header.back() != "label") {
        throw input_error(path + ": expected trailing 'task' and 'label' columns");
    }
    LabeledDataset out;
    std::string task;
    std::vector<int> labels;
    for (auto& row : t.rows) {
        const std::string this_task = row[row.size() - 2];
        if (task.empty()) {
            task = this_task;
        } else if (task != this_task) {
            throw input_error(path + ": mixed task values '" + task + "' and '" + this_task + "'");
        }
        labels.push_back(static_cast<int>(parse_int_cell(row.back(), path)));
        row.pop_back();
        row.pop_back();
    }
    if (task.empty()) throw input_error(path + ": no labeled rows");
    out.task = task_from_name(task);
    t.header.pop_back();
    t.header.pop_back();
    out.events = events_from_table(t, path);
    out.labels = std::move(labels);
    const int k = class_count(out.task);
    for (int label : out.labels) {
        if (label < 0 || label >= k) {
            throw input_error(path + ": label " + std::to_string(label) + " outside 0.." +
                              std::to_string(k - 1));
        }
        ++out.histogram[label];
    }
    return out;
}

} // namespace nightsense
