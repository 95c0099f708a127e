#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/csvio.hpp"
#include "core/ingest.hpp"
#include "core/labels.hpp"
#include "core/matching.hpp"
#include "core/slots.hpp"
#include "core/synth.hpp"
#include "core/timeutil.hpp"
#include "helpers.hpp"

using namespace nightsense;

namespace {

const std::vector<std::string> kGeneratedFiles = {
    "participants.csv", "reports.csv", "truth.csv", "acc.csv", "app.csv", "loc.csv",
    "scr.csv",          "bat.csv",     "blu.csv",   "wif.csv", "pro.csv", "synth_spec.json"};

CohortSpec small_spec() {
    CohortSpec spec;
    spec.seed = 99;
    spec.participants = 5;
    spec.nights_per_participant = 2;
    spec.reports_per_night_lo = 1;
    spec.reports_per_night_hi = 2;
    spec.missing_rate = 0.05;
    spec.inject_unavailable = 2;
    spec.inject_edge = 2;
    spec.inject_out_of_region = 2;
    spec.effects.push_back({"friends_two", "ACC", 1.0});
    return spec;
}

MatchOptions region_options(const CohortSpec& spec) {
    MatchOptions opts;
    opts.use_region = true;
    opts.min_lat = spec.min_lat;
    opts.max_lat = spec.max_lat;
    opts.min_lon = spec.min_lon;
    opts.max_lon = spec.max_lon;
    return opts;
}

} // namespace

TEST_CASE("the same recipe always writes identical bytes") {
    const CohortSpec spec = small_spec();
    TempDir a("synth_bytes_a"), b("synth_bytes_b");
    generate_cohort(spec, a.str(""));
    generate_cohort(spec, b.str(""));
    for (const auto& name : kGeneratedFiles) {
        CHECK(read_text_file(a.str(name)) == read_text_file(b.str(name)));
    }

    CohortSpec reseeded = spec;
    reseeded.seed = 100;
    TempDir c("synth_bytes_c");
    generate_cohort(reseeded, c.str(""));
    CHECK(read_text_file(a.str("reports.csv")) != read_text_file(c.str("reports.csv")));
}

TEST_CASE("the recipe json round trips") {
    const CohortSpec spec = small_spec();
    const std::string once = cohort_spec_json(spec);
    const CohortSpec back = parse_cohort_spec(once);
    CHECK(cohort_spec_json(back) == once);
    CHECK(back.participants == 5);
    CHECK(back.inject_edge == 2);
    CHECK(back.effects.size() == 1);
    CHECK(back.effects[0].group == "ACC");
}

TEST_CASE("bad recipes are rejected with input errors") {
    CHECK_THROWS_AS(parse_cohort_spec("{\"participants\": 0}"), input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"p_woman\": 1.5}"), input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"reports_per_night\": [2, 1]}"), input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"social_mix\": {\"enemies\": 1.0}}"), input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"social_mix\": {\"alone\": 0.0}}"), input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"effects\": [{\"task\": \"nope\", \"group\": \"ACC\", \"d\": 1}]}"),
                    input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"effects\": [{\"task\": \"friends_two\", \"group\": \"ZZZ\", \"d\": 1}]}"),
                    input_error);
    CHECK_THROWS_AS(
        parse_cohort_spec("{\"region\": {\"min_lat\": 47.0, \"max_lat\": 46.0, \"min_lon\": 5.0, \"max_lon\": 6.0}}"),
        input_error);
    CHECK_THROWS_AS(parse_cohort_spec("{\"nights_per_participant\": 0, \"reports_per_night\": [1, 2]}"),
                    input_error);
    CHECK_THROWS_AS(parse_cohort_spec("not json"), input_error);
}

TEST_CASE("generated reports stay inside the night and within company bounds") {
    const CohortSpec spec = small_spec();
    TempDir dir("synth_props");
    generate_cohort(spec, dir.str(""));

    IngestReport report;
    const Cohort cohort = ingest_dir(dir.str(""), &report);
    CHECK(report.malformed == 0);
    CHECK(cohort.participants.size() == 5);
    REQUIRE(cohort.reports.size() >= 10 + 6);
    REQUIRE(cohort.reports.size() <= 20 + 6);

    for (const auto& r : cohort.reports) {
        std::int64_t night = 0;
        REQUIRE(night_of_timestamp(r.ts, night));
        const int slot = slot_index(r.ts, night);
        CHECK(r.partner >= 0);
        CHECK(r.partner <= 1);
        for (int count : {r.family, r.male_friends, r.female_friends, r.others}) {
            CHECK(count >= 0);
            CHECK(count <= 11);
        }
        if (r.report_id[0] == 'r') {
            // Normal reports always leave room for the default window.
            CHECK(slot >= 2);
            CHECK(slot <= 44);
        }
    }
}

TEST_CASE("a pinned report count plus injections replays to an exact tally") {
    CohortSpec spec;
    spec.seed = 4242;
    spec.participants = 8;
    spec.nights_per_participant = 2;
    spec.reports_exact = 25;
    spec.inject_unavailable = 5;
    spec.inject_edge = 4;
    spec.inject_out_of_region = 3;
    TempDir dir("synth_tally");
    generate_cohort(spec, dir.str(""));

    const Cohort cohort = ingest_dir(dir.str(""));
    CHECK(cohort.reports.size() == 25 + 12);
    const auto slots = aggregate_cohort(cohort, 2);
    ExclusionTally tally;
    const EventDataset ds = build_dataset(cohort, slots, region_options(spec), &tally);
    CHECK(tally.input == 37);
    CHECK(tally.retained == 25);
    CHECK(tally.unavailable_sensor_data == 5);
    CHECK(tally.edge_time == 4);
    CHECK(tally.out_of_region == 3);

    // truth.csv predicts the outcome per report.
    const CsvTable truth = read_csv(dir.str("truth.csv"));
    std::map<std::string, std::string> expected;
    for (const auto& row : truth.rows) {
        expected[row[truth.col("report_id")]] = row[truth.col("expected")];
    }
    std::set<std::string> retained_ids;
    for (const auto& row : ds.rows) retained_ids.insert(row.report_id);
    for (const auto& [id, outcome] : expected) {
        CHECK((outcome == "retained") == (retained_ids.count(id) == 1));
    }
}

TEST_CASE("truth labels recompute from the raw reports") {
    const CohortSpec spec = small_spec();
    TempDir dir("synth_truth");
    generate_cohort(spec, dir.str(""));

    const Cohort cohort = ingest_dir(dir.str(""));
    std::map<std::string, const SelfReport*> by_id;
    for (const auto& r : cohort.reports) by_id[r.report_id] = &r;
    std::map<std::string, std::string> sex_of;
    for (const auto& p : cohort.participants) sex_of[p.id] = p.sex;

    const CsvTable truth = read_csv(dir.str("truth.csv"));
    REQUIRE(truth.rows.size() == cohort.reports.size());
    for (const auto& row : truth.rows) {
        const SelfReport* r = by_id.at(row[truth.col("report_id")]);
        EventRow stub;
        stub.sex = sex_of.at(r->participant_id);
        stub.partner = r->partner;
        stub.family = r->family;
        stub.male_friends = r->male_friends;
        stub.female_friends = r->female_friends;
        stub.others = r->others;
        for (const auto& task : task_names()) {
            const int want = derive_label(stub, task_from_name(task), LabelOptions{});
            CHECK(parse_int_cell(row[truth.col(task)], "truth.csv") == want);
        }
        std::int64_t night = 0;
        REQUIRE(night_of_timestamp(r->ts, night));
        CHECK(row[truth.col("night_date")] == format_date(night));
    }
}

TEST_CASE("an exact report count is honored without injections") {
    CohortSpec spec;
    spec.seed = 1;
    spec.participants = 3;
    spec.nights_per_participant = 2;
    spec.reports_exact = 7;
    TempDir dir("synth_exact");
    generate_cohort(spec, dir.str(""));
    const Cohort cohort = ingest_dir(dir.str(""));
    CHECK(cohort.reports.size() == 7);

    // Sensors cover every night even when a night drew no report.
    CohortSpec sparse = spec;
    sparse.reports_exact = 1;
    TempDir dir2("synth_sparse");
    generate_cohort(sparse, dir2.str(""));
    const Cohort c2 = ingest_dir(dir2.str(""));
    CHECK(c2.reports.size() == 1);
    CHECK(c2.acc.size() > 100);
    for (const auto& p : c2.participants) {
        CHECK(nights_for_participant(c2, p.id).size() == 2);
    }
}

TEST_CASE("per-sex mixes steer the drawn company") {
    CohortSpec spec;
    spec.seed = 31;
    spec.participants = 30;
    spec.nights_per_participant = 2;
    spec.reports_per_night_lo = 2;
    spec.reports_per_night_hi = 2;
    spec.social_mix_man = {{"alone", 1.0}};
    spec.social_mix_woman = {{"friends_large", 1.0}};
    TempDir dir("synth_mix");
    generate_cohort(spec, dir.str(""));

    const Cohort cohort = ingest_dir(dir.str(""));
    std::map<std::string, std::string> sex_of;
    for (const auto& p : cohort.participants) sex_of[p.id] = p.sex;
    bool saw_man = false, saw_woman = false;
    for (const auto& r : cohort.reports) {
        const int company = r.partner + r.family + r.male_friends + r.female_friends + r.others;
        if (sex_of.at(r.participant_id) == "man") {
            CHECK(company == 0);
            saw_man = true;
        } else {
            CHECK(r.male_friends + r.female_friends >= 2);
            saw_woman = true;
        }
    }
    CHECK(saw_man);
    CHECK(saw_woman);
}
