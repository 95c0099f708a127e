#include <doctest.h>

#include "core/common.hpp"
#include "core/labels.hpp"
#include "core/matching.hpp"
#include "helpers.hpp"

using namespace nightsense;

namespace {

EventRow row_with(int partner, int family, int male_friends, int female_friends, int others,
                  const std::string& sex = "woman") {
    EventRow r;
    r.report_id = "r";
    r.participant_id = "p1";
    r.ts = 0;
    r.night_days = 0;
    r.slot_lo = 10;
    r.slot_hi = 15;
    r.sex = sex;
    r.age = 22;
    r.partner = partner;
    r.family = family;
    r.male_friends = male_friends;
    r.female_friends = female_friends;
    r.others = others;
    r.features.assign(event_feature_columns().size(), 1.5);
    return r;
}

} // namespace

TEST_CASE("task names round trip and classify as two or three class") {
    const auto& names = task_names();
    REQUIRE(names.size() == 8);
    for (const auto& n : names) {
        CHECK(task_name(task_from_name(n)) == n);
    }
    CHECK(class_count(Task::friends_two) == 2);
    CHECK(class_count(Task::partner_two) == 2);
    CHECK(class_count(Task::friends_three) == 3);
    CHECK(class_count(Task::sex_composition) == 3);
    CHECK_THROWS_AS(task_from_name("bogus"), input_error);
}

TEST_CASE("two class tasks flag presence of the target company") {
    LabelOptions opts;
    CHECK(derive_label(row_with(0, 0, 0, 0, 0), Task::family_two, opts) == 0);
    CHECK(derive_label(row_with(0, 2, 0, 0, 0), Task::family_two, opts) == 1);
    CHECK(derive_label(row_with(1, 0, 0, 0, 0), Task::partner_two, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 0, 0, 0), Task::partner_two, opts) == 0);
    CHECK(derive_label(row_with(0, 0, 1, 0, 0), Task::friends_two, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 0, 3, 0), Task::friends_two, opts) == 1);
    CHECK(derive_label(row_with(0, 2, 0, 0, 0), Task::friends_two, opts) == 0);
}

TEST_CASE("people tasks optionally fold unknown company into the count") {
    LabelOptions opts;
    EventRow only_others = row_with(0, 0, 0, 0, 4);
    CHECK(derive_label(only_others, Task::people_two, opts) == 1);
    opts.people_include_others = false;
    CHECK(derive_label(only_others, Task::people_two, opts) == 0);
    CHECK(derive_label(row_with(1, 1, 1, 1, 1), Task::people_two, opts) == 1);
}

TEST_CASE("three class tasks split on the grouping threshold") {
    LabelOptions opts;
    opts.grouping_threshold = 1;
    CHECK(derive_label(row_with(0, 0, 0, 0, 0), Task::friends_three, opts) == 0);
    CHECK(derive_label(row_with(0, 0, 1, 0, 0), Task::friends_three, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 1, 1, 0), Task::friends_three, opts) == 2);
    opts.grouping_threshold = 3;
    CHECK(derive_label(row_with(0, 0, 2, 1, 0), Task::friends_three, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 2, 2, 0), Task::friends_three, opts) == 2);
    CHECK(derive_label(row_with(0, 5, 0, 0, 0), Task::family_three, opts) == 2);
    CHECK(derive_label(row_with(0, 3, 0, 0, 0), Task::family_three, opts) == 1);
    opts.grouping_threshold = 0;
    CHECK_THROWS_AS(derive_label(row_with(0, 0, 1, 0, 0), Task::friends_three, opts),
                    input_error);
    opts.grouping_threshold = 11;
    CHECK_THROWS_AS(derive_label(row_with(0, 0, 1, 0, 0), Task::friends_three, opts),
                    input_error);
}

TEST_CASE("labels never increase as the grouping threshold grows") {
    for (int men = 0; men <= 6; ++men) {
        for (int women = 0; women <= 5; ++women) {
            const EventRow r = row_with(0, 0, men, women, 0);
            int prev = 3;
            for (int g = 1; g <= 10; ++g) {
                LabelOptions opts;
                opts.grouping_threshold = g;
                const int label = derive_label(r, Task::friends_three, opts);
                CHECK(label <= prev);
                prev = label;
            }
        }
    }
}

TEST_CASE("friend sex composition is relative to the reporter") {
    LabelOptions opts;
    CHECK(derive_label(row_with(0, 0, 0, 2, 0, "woman"), Task::sex_composition, opts) == 0);
    CHECK(derive_label(row_with(0, 0, 2, 0, 0, "woman"), Task::sex_composition, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 2, 0, 0, "man"), Task::sex_composition, opts) == 0);
    CHECK(derive_label(row_with(0, 0, 0, 2, 0, "man"), Task::sex_composition, opts) == 1);
    CHECK(derive_label(row_with(0, 0, 1, 1, 0, "man"), Task::sex_composition, opts) == 2);
    CHECK(derive_label(row_with(0, 3, 0, 0, 0, "man"), Task::sex_composition, opts) == -1);
}

TEST_CASE("labeling a dataset drops undefined rows and tallies a histogram") {
    EventDataset ds;
    ds.rows.push_back(row_with(0, 0, 0, 0, 0));   // no friends: undefined
    ds.rows.push_back(row_with(0, 0, 2, 0, 0));   // opposite for a woman
    ds.rows.push_back(row_with(0, 0, 0, 1, 0));   // same for a woman
    ds.rows.push_back(row_with(0, 0, 1, 1, 0));   // mixed
    const LabeledDataset labeled = label_dataset(ds, Task::sex_composition, LabelOptions{});
    CHECK(labeled.events.rows.size() == 3);
    CHECK(labeled.labels == std::vector<int>{1, 0, 2});
    CHECK(labeled.histogram.at(0) == 1);
    CHECK(labeled.histogram.at(1) == 1);
    CHECK(labeled.histogram.at(2) == 1);
}

TEST_CASE("labeled csv round trips and rejects malformed files") {
    EventDataset ds;
    ds.rows.push_back(row_with(0, 0, 2, 0, 0));
    ds.rows.push_back(row_with(0, 0, 0, 0, 0));
    const LabeledDataset labeled = label_dataset(ds, Task::friends_two, LabelOptions{});
    TempDir dir("labels_roundtrip");
    const std::string path = dir.str("labeled.csv");
    write_labeled_csv(path, labeled);
    const LabeledDataset back = read_labeled_csv(path);
    CHECK(back.task == Task::friends_two);
    CHECK(back.labels == labeled.labels);
    CHECK(back.histogram == labeled.histogram);
    CHECK(back.events.rows.size() == labeled.events.rows.size());
    CHECK(back.events.rows[0].male_friends == 2);

    std::string text = read_text_file(path);
    const auto pos = text.rfind(",1\n");
    REQUIRE(pos != std::string::npos);
    std::string bad = text.substr(0, pos) + ",7\n" + text.substr(pos + 3);
    write_text_file(dir.str("bad_label.csv"), bad);
    CHECK_THROWS_AS(read_labeled_csv(dir.str("bad_label.csv")), input_error);

    bad = text;
    const auto tpos = bad.rfind("friends_two");
    bad.replace(tpos, std::string("friends_two").size(), "friends_six");
    write_text_file(dir.str("bad_task.csv"), bad);
    CHECK_THROWS_AS(read_labeled_csv(dir.str("bad_task.csv")), input_error);
}
