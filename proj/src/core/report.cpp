#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "checksum.hpp"
#include "common.hpp"
#include "ingest.hpp"
#include "matching.hpp"
#include "slots.hpp"
#include "stats.hpp"
#include "timeutil.hpp"

namespace nightsense {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string pct_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

CsvTable describe_table(const LabeledDataset& ds, const std::string& group_by) {
    if (group_by != "sex" && group_by != "age" && group_by != "task")
        throw input_error("describe: group_by must be one of sex, age, task");
    std::map<std::string, std::map<int, std::size_t>> cells;
    for (std::size_t i = 0; i < ds.events.rows.size(); ++i) {
        const EventRow& row = ds.events.rows[i];
        std::string key;
        if (group_by == "sex") key = row.sex;
        else if (group_by == "age") key = std::to_string(row.age);
        else key = task_name(ds.task);
        ++cells[key][ds.labels[i]];
    }
    CsvTable out;
    out.header = {"group_by", "group", "class", "count", "pct"};
    for (const auto& [key, hist] : cells) {
        std::size_t total = 0;
        for (const auto& [label, count] : hist) total += count;
        for (const auto& [label, count] : hist)
            out.rows.push_back({group_by, key, std::to_string(label), std::to_string(count),
                                pct_text(100.0 * static_cast<double>(count) /
                                         static_cast<double>(total))});
    }
    return out;
}

std::string result_cell(double mean_accuracy, double std_accuracy, double auc) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.1f (%.1f), %.1f", mean_accuracy, std_accuracy,
                  auc * 100.0);
    return buf;
}

std::string markdown_table(const CsvTable& t) {
    std::string out = "|";
    for (const auto& h : t.header) out += " " + h + " |";
    out += "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : t.rows) {
        out += "|";
        for (const auto& cell : row) out += " " + cell + " |";
        out += "\n";
    }
    return out;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw input_error(std::string("experiment config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw input_error("experiment config: top level must be an object");
    ExperimentConfig cfg;
    try {
        if (j.contains("data_dir")) cfg.data_dir = j["data_dir"].get<std::string>();
        if (j.contains("tasks")) cfg.tasks = j["tasks"].get<std::vector<std::string>>();
        if (j.contains("models")) cfg.models = j["models"].get<std::vector<std::string>>();
        if (j.contains("groups")) cfg.groups = j["groups"].get<std::vector<std::string>>();
        if (j.contains("k")) cfg.k = j["k"].get<int>();
        if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("window_slots")) cfg.window_slots = j["window_slots"].get<int>();
        if (j.contains("grouping_threshold"))
            cfg.grouping_threshold = j["grouping_threshold"].get<int>();
        if (j.contains("people_include_others"))
            cfg.people_include_others = j["people_include_others"].get<bool>();
        if (j.contains("n_trees")) cfg.n_trees = j["n_trees"].get<int>();
        if (j.contains("smote_k")) cfg.smote_k = j["smote_k"].get<int>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
        if (j.contains("stats_top")) cfg.stats_top = j["stats_top"].get<std::size_t>();
        if (j.contains("rank_metric")) cfg.rank_metric = j["rank_metric"].get<std::string>();
        if (j.contains("rank_contrast")) cfg.rank_contrast = j["rank_contrast"].get<std::string>();
        if (j.contains("region") && !j["region"].is_null()) {
            const auto& r = j["region"];
            cfg.use_region = true;
            cfg.min_lat = r.at("min_lat").get<double>();
            cfg.max_lat = r.at("max_lat").get<double>();
            cfg.min_lon = r.at("min_lon").get<double>();
            cfg.max_lon = r.at("max_lon").get<double>();
        }
    } catch (const json::exception& e) {
        throw input_error(std::string("experiment config: ") + e.what());
    }
    if (cfg.tasks.empty()) throw input_error("experiment config: tasks must be non-empty");
    for (const auto& t : cfg.tasks) task_from_name(t);
    for (const auto& m : cfg.models) model_from_name(m);
    for (const auto& g : cfg.groups) slice_features(g);
    if (cfg.models.empty()) throw input_error("experiment config: models must be non-empty");
    if (cfg.groups.empty()) throw input_error("experiment config: groups must be non-empty");
    if (cfg.k < 1) throw input_error("experiment config: k must be >= 1");
    if (cfg.iterations < 1) throw input_error("experiment config: iterations must be >= 1");
    if (cfg.window_slots < 1 || cfg.window_slots > kSlotsPerNight)
        throw input_error("experiment config: window_slots outside 1..48");
    if (cfg.grouping_threshold < 1 || cfg.grouping_threshold > 10)
        throw input_error("experiment config: grouping_threshold outside 1..10");
    if (cfg.n_trees < 1) throw input_error("experiment config: n_trees must be >= 1");
    if (cfg.smote_k < 1) throw input_error("experiment config: smote_k must be >= 1");
    if (cfg.use_region && (cfg.min_lat >= cfg.max_lat || cfg.min_lon >= cfg.max_lon))
        throw input_error("experiment config: region box is empty");
    metric_from_name(cfg.rank_metric);
    contrast_from_name(cfg.rank_contrast);
    return cfg;
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
    json j;
    j["data_dir"] = cfg.data_dir;
    j["tasks"] = cfg.tasks;
    j["models"] = cfg.models;
    j["groups"] = cfg.groups;
    j["k"] = cfg.k;
    j["iterations"] = cfg.iterations;
    j["seed"] = cfg.seed;
    j["window_slots"] = cfg.window_slots;
    j["grouping_threshold"] = cfg.grouping_threshold;
    j["people_include_others"] = cfg.people_include_others;
    j["n_trees"] = cfg.n_trees;
    j["smote_k"] = cfg.smote_k;
    j["threads"] = cfg.threads;
    j["stats_top"] = cfg.stats_top;
    j["rank_metric"] = cfg.rank_metric;
    j["rank_contrast"] = cfg.rank_contrast;
    if (cfg.use_region)
        j["region"] = {{"min_lat", cfg.min_lat},
                       {"max_lat", cfg.max_lat},
                       {"min_lon", cfg.min_lon},
                       {"max_lon", cfg.max_lon}};
    else
        j["region"] = nullptr;
    return j.dump(2) + "\n";
}

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::map<std::string, std::string> checksums;
    auto note = [&](const std::string& name) {
        checksums[name] = checksum_file(out_dir + "/" + name);
    };
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file(out_dir + "/" + name, content);
        note(name);
    };
    auto stage = [](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const input_error& e) {
            throw input_error(std::string(name) + ": " + e.what());
        } catch (const internal_error& e) {
            throw internal_error(std::string(name) + ": " + e.what());
        }
    };

    Cohort cohort;
    stage("ingest", [&] { cohort = ingest_dir(cfg.data_dir); });

    std::vector<SlotFeatures> slots;
    stage("extract", [&] {
        slots = aggregate_cohort(cohort, cfg.threads);
        write_slots_csv(out_dir + "/slots.csv", slots);
        note("slots.csv");
    });

    EventDataset events;
    stage("match", [&] {
        MatchOptions mo;
        mo.window_slots = cfg.window_slots;
        mo.use_region = cfg.use_region;
        mo.min_lat = cfg.min_lat;
        mo.max_lat = cfg.max_lat;
        mo.min_lon = cfg.min_lon;
        mo.max_lon = cfg.max_lon;
        ExclusionTally tally;
        events = build_dataset(cohort, slots, mo, &tally);
        write_events_csv(out_dir + "/events.csv", events);
        note("events.csv");
        emit("tally.json", tally_json(tally));
    });

    LabelOptions lo;
    lo.grouping_threshold = cfg.grouping_threshold;
    lo.people_include_others = cfg.people_include_others;

    CsvTable results;
    results.header = {"task", "group"};
    for (const auto& m : cfg.models) results.header.push_back(m);

    for (const auto& task_str : cfg.tasks) {
        const Task task = task_from_name(task_str);
        LabeledDataset ds;
        stage("label", [&] {
            ds = label_dataset(events, task, lo);
            write_labeled_csv(out_dir + "/labeled_" + task_str + ".csv", ds);
            note("labeled_" + task_str + ".csv");
            write_csv(out_dir + "/describe_" + task_str + ".csv", describe_table(ds, "sex"));
            note("describe_" + task_str + ".csv");
        });
        stage("stats", [&] {
            const auto ranked = rank_features(ds, contrast_from_name(cfg.rank_contrast),
                                              metric_from_name(cfg.rank_metric), cfg.stats_top);
            write_ranked_csv(out_dir + "/ranked_" + task_str + ".csv", ranked);
            note("ranked_" + task_str + ".csv");
        });
        for (const auto& group : cfg.groups) {
            std::vector<std::string> cells;
            for (const auto& model_str : cfg.models) {
                stage("evaluate", [&] {
                    EvalOptions eo;
                    eo.model = model_from_name(model_str);
                    eo.group = group;
                    eo.k = cfg.k;
                    eo.iterations = cfg.iterations;
                    eo.seed = cfg.seed;
                    eo.threads = cfg.threads;
                    eo.smote_k = cfg.smote_k;
                    eo.n_trees = cfg.n_trees;
                    const EvaluationResult res = evaluate_lkpo(ds, eo);
                    emit("eval_" + task_str + "_" + model_str + "_" + group + ".json",
                         evaluation_json(res));
                    cells.push_back(
                        result_cell(res.mean_accuracy, res.std_accuracy, res.mean_auc));
                    if (eo.model == ModelKind::forest) {
                        CsvTable imp;
                        imp.header = {"rank", "column", "group", "importance"};
                        const auto entries = importance_report(res, 30);
                        for (std::size_t i = 0; i < entries.size(); ++i)
                            imp.rows.push_back({std::to_string(i + 1), entries[i].column,
                                                entries[i].group,
                                                format_double(entries[i].importance)});
                        write_csv(out_dir + "/importance_" + task_str + "_" + group + ".csv", imp);
                        note("importance_" + task_str + "_" + group + ".csv");
                    }
                });
            }
            std::vector<std::string> row = {task_str, group};
            row.insert(row.end(), cells.begin(), cells.end());
            results.rows.push_back(row);
        }
    }

    stage("report", [&] {
        write_csv(out_dir + "/results_table.csv", results);
        note("results_table.csv");
        emit("results_table.md", markdown_table(results));
        json manifest;
        manifest["format"] = "nightsense-run-v1";
        manifest["seed"] = cfg.seed;
        json config = json::parse(experiment_config_json(cfg));
        config.erase("threads");
        manifest["config"] = config;
        manifest["files"] = checksums;
        write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    });
}

std::vector<std::string> verify_experiment(const std::string& out_dir) {
    std::vector<std::string> problems;
    json manifest;
    try {
        manifest = json::parse(read_text_file(out_dir + "/manifest.json"));
    } catch (const json::exception& e) {
        throw input_error(std::string("verify: manifest.json is invalid: ") + e.what());
    }
    if (!manifest.contains("files") || !manifest["files"].is_object())
        throw input_error("verify: manifest.json lacks a files map");
    std::set<std::string> listed;
    for (auto it = manifest["files"].begin(); it != manifest["files"].end(); ++it) {
        const std::string name = it.key();
        listed.insert(name);
        const std::string path = out_dir + "/" + name;
        if (!fs::exists(path)) {
            problems.push_back("missing file: " + name);
            continue;
        }
        const std::string actual = checksum_file(path);
        if (actual != it.value().get<std::string>())
            problems.push_back("checksum mismatch: " + name);
    }
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json" || listed.count(name)) continue;
        problems.push_back("unlisted file: " + name);
    }
    std::sort(problems.begin(), problems.end());
    return problems;
}

} // namespace nightsense
