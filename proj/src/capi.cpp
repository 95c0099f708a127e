#include "nightsense.h"

#include <exception>
#include <string>

#include "core/common.hpp"
#include "core/csvio.hpp"
#include "core/evaluate.hpp"
#include "core/ingest.hpp"
#include "core/labels.hpp"
#include "core/matching.hpp"
#include "core/report.hpp"
#include "core/slots.hpp"
#include "core/stats.hpp"
#include "core/synth.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ns_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return NS_OK;
    } catch (const nightsense::input_error& e) {
        g_last_error = e.what();
        return NS_ERR_INPUT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return NS_ERR_INTERNAL;
    }
}

ns_status require(const char* value, const char* what) {
    if (value) return NS_OK;
    g_last_error = std::string(what) + " must not be NULL";
    return NS_ERR_INPUT;
}

nightsense::EvalOptions to_eval_options(const ns_eval_options* options) {
    nightsense::EvalOptions eo;
    if (!options) return eo;
    if (options->model) eo.model = nightsense::model_from_name(options->model);
    if (options->group) eo.group = options->group;
    if (options->k > 0) eo.k = options->k;
    if (options->iterations > 0) eo.iterations = options->iterations;
    eo.seed = options->seed;
    eo.threads = options->threads == 0 ? 0 : options->threads;
    if (options->n_trees > 0) eo.n_trees = options->n_trees;
    if (options->smote_k > 0) eo.smote_k = options->smote_k;
    return eo;
}

} // namespace

extern "C" {

struct ns_cohort {
    nightsense::Cohort cohort;
};

#ifndef NS_VERSION_STRING
#define NS_VERSION_STRING "0.0.0"
#endif

const char* ns_version(void) { return NS_VERSION_STRING; }

const char* ns_last_error(void) { return g_last_error.c_str(); }

ns_status ns_cohort_open(const char* data_dir, ns_cohort** out) {
    if (ns_status s = require(data_dir, "data_dir"); s != NS_OK) return s;
    if (!out) {
        g_last_error = "out must not be NULL";
        return NS_ERR_INPUT;
    }
    *out = nullptr;
    return guarded([&] {
        auto handle = new ns_cohort{nightsense::ingest_dir(data_dir)};
        *out = handle;
    });
}

void ns_cohort_close(ns_cohort* cohort) { delete cohort; }

ns_status ns_cohort_counts(const ns_cohort* cohort, size_t* participants, size_t* reports) {
    if (!cohort) {
        g_last_error = "cohort must not be NULL";
        return NS_ERR_INPUT;
    }
    return guarded([&] {
        if (participants) *participants = cohort->cohort.participants.size();
        if (reports) *reports = cohort->cohort.reports.size();
    });
}

ns_status ns_cohort_write_bundle(const ns_cohort* cohort, const char* bundle_dir) {
    if (!cohort) {
        g_last_error = "cohort must not be NULL";
        return NS_ERR_INPUT;
    }
    if (ns_status s = require(bundle_dir, "bundle_dir"); s != NS_OK) return s;
    return guarded([&] { nightsense::write_bundle(bundle_dir, cohort->cohort); });
}

ns_status ns_synth(const char* spec_json_path, const char* out_dir) {
    if (ns_status s = require(spec_json_path, "spec_json_path"); s != NS_OK) return s;
    if (ns_status s = require(out_dir, "out_dir"); s != NS_OK) return s;
    return guarded([&] {
        const auto spec =
            nightsense::parse_cohort_spec(nightsense::read_text_file(spec_json_path));
        nightsense::generate_cohort(spec, out_dir);
    });
}

ns_status ns_extract(const char* data_dir, const char* slots_csv, unsigned threads) {
    if (ns_status s = require(data_dir, "data_dir"); s != NS_OK) return s;
    if (ns_status s = require(slots_csv, "slots_csv"); s != NS_OK) return s;
    return guarded([&] {
        const auto cohort = nightsense::ingest_dir(data_dir);
        const auto slots = nightsense::aggregate_cohort(cohort, threads);
        nightsense::write_slots_csv(slots_csv, slots);
    });
}

ns_status ns_match(const char* data_dir, const char* slots_csv,
                   const ns_match_options* options, const char* events_csv,
                   const char* tally_json) {
    if (ns_status s = require(data_dir, "data_dir"); s != NS_OK) return s;
    if (ns_status s = require(slots_csv, "slots_csv"); s != NS_OK) return s;
    if (ns_status s = require(events_csv, "events_csv"); s != NS_OK) return s;
    return guarded([&] {
        nightsense::MatchOptions mo;
        if (options) {
            if (options->window_slots > 0) mo.window_slots = options->window_slots;
            mo.use_region = options->use_region != 0;
            mo.min_lat = options->min_lat;
            mo.max_lat = options->max_lat;
            mo.min_lon = options->min_lon;
            mo.max_lon = options->max_lon;
        }
        const auto cohort = nightsense::ingest_dir(data_dir);
        const auto slots = nightsense::read_slots_csv(slots_csv);
        nightsense::ExclusionTally tally;
        const auto events = nightsense::build_dataset(cohort, slots, mo, &tally);
        nightsense::write_events_csv(events_csv, events);
        if (tally_json)
            nightsense::write_text_file(tally_json, nightsense::tally_json(tally));
    });
}

ns_status ns_label(const char* events_csv, const char* task, int grouping_threshold,
                   int people_include_others, const char* labeled_csv) {
    if (ns_status s = require(events_csv, "events_csv"); s != NS_OK) return s;
    if (ns_status s = require(task, "task"); s != NS_OK) return s;
    if (ns_status s = require(labeled_csv, "labeled_csv"); s != NS_OK) return s;
    return guarded([&] {
        nightsense::LabelOptions lo;
        if (grouping_threshold > 0) lo.grouping_threshold = grouping_threshold;
        lo.people_include_others = people_include_others != 0;
        const auto events = nightsense::read_events_csv(events_csv);
        const auto ds =
            nightsense::label_dataset(events, nightsense::task_from_name(task), lo);
        nightsense::write_labeled_csv(labeled_csv, ds);
    });
}

ns_status ns_stats(const char* labeled_csv, const char* contrast, const char* metric,
                   size_t top, const char* ranked_csv) {
    if (ns_status s = require(labeled_csv, "labeled_csv"); s != NS_OK) return s;
    if (ns_status s = require(ranked_csv, "ranked_csv"); s != NS_OK) return s;
    return guarded([&] {
        const auto ds = nightsense::read_labeled_csv(labeled_csv);
        const auto table = nightsense::rank_features(
            ds, nightsense::contrast_from_name(contrast ? contrast : "alone-vs-group"),
            nightsense::metric_from_name(metric ? metric : "d"), top == 0 ? 30 : top);
        nightsense::write_ranked_csv(ranked_csv, table);
    });
}

ns_status ns_evaluate(const char* labeled_csv, const ns_eval_options* options,
                      const char* result_json_path) {
    if (ns_status s = require(labeled_csv, "labeled_csv"); s != NS_OK) return s;
    if (ns_status s = require(result_json_path, "result_json_path"); s != NS_OK) return s;
    return guarded([&] {
        const auto ds = nightsense::read_labeled_csv(labeled_csv);
        const auto result = nightsense::evaluate_lkpo(ds, to_eval_options(options));
        nightsense::write_text_file(result_json_path, nightsense::evaluation_json(result));
    });
}

ns_status ns_importance(const char* labeled_csv, const ns_eval_options* options, size_t top,
                        const char* importance_csv) {
    if (ns_status s = require(labeled_csv, "labeled_csv"); s != NS_OK) return s;
    if (ns_status s = require(importance_csv, "importance_csv"); s != NS_OK) return s;
    return guarded([&] {
        auto eo = to_eval_options(options);
        eo.model = nightsense::ModelKind::forest;
        const auto ds = nightsense::read_labeled_csv(labeled_csv);
        const auto result = nightsense::evaluate_lkpo(ds, eo);
        const auto entries = nightsense::importance_report(result, top == 0 ? 30 : top);
        nightsense::CsvTable table;
        table.header = {"rank", "column", "group", "importance"};
        for (size_t i = 0; i < entries.size(); ++i)
            table.rows.push_back({std::to_string(i + 1), entries[i].column, entries[i].group,
                                  nightsense::format_double(entries[i].importance)});
        nightsense::write_csv(importance_csv, table);
    });
}

ns_status ns_sweep(const char* events_csv, const char* task, const ns_eval_options* options,
                   const char* sweep_json_path) {
    if (ns_status s = require(events_csv, "events_csv"); s != NS_OK) return s;
    if (ns_status s = require(task, "task"); s != NS_OK) return s;
    if (ns_status s = require(sweep_json_path, "sweep_json_path"); s != NS_OK) return s;
    return guarded([&] {
        const auto events = nightsense::read_events_csv(events_csv);
        const auto t = nightsense::task_from_name(task);
        const auto points = nightsense::threshold_sweep(events, t, nightsense::LabelOptions{},
                                                        to_eval_options(options));
        nightsense::write_text_file(sweep_json_path, nightsense::sweep_json(points, t));
    });
}

ns_status ns_describe(const char* labeled_csv, const char* group_by, const char* table_csv) {
    if (ns_status s = require(labeled_csv, "labeled_csv"); s != NS_OK) return s;
    if (ns_status s = require(group_by, "group_by"); s != NS_OK) return s;
    if (ns_status s = require(table_csv, "table_csv"); s != NS_OK) return s;
    return guarded([&] {
        const auto ds = nightsense::read_labeled_csv(labeled_csv);
        nightsense::write_csv(table_csv, nightsense::describe_table(ds, group_by));
    });
}

ns_status ns_run(const char* config_json_path, const char* out_dir) {
    if (ns_status s = require(config_json_path, "config_json_path"); s != NS_OK) return s;
    if (ns_status s = require(out_dir, "out_dir"); s != NS_OK) return s;
    return guarded([&] {
        const auto cfg =
            nightsense::parse_experiment_config(nightsense::read_text_file(config_json_path));
        nightsense::run_experiment(cfg, out_dir);
    });
}

ns_status ns_verify(const char* bundle_dir) {
    if (ns_status s = require(bundle_dir, "bundle_dir"); s != NS_OK) return s;
    return guarded([&] {
        const auto problems = nightsense::verify_experiment(bundle_dir);
        if (!problems.empty()) {
            std::string msg;
            for (const auto& p : problems) {
                if (!msg.empty()) msg += "\n";
                msg += p;
            }
            throw nightsense::input_error(msg);
        }
    });
}

} // extern "C"
