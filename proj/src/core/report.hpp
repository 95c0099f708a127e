#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csvio.hpp"
#include "evaluate.hpp"
#include "labels.hpp"

namespace nightsense {

// Count table over a labeled dataset: one row per (group value, class) with
// the class share in percent of its group.
CsvTable describe_table(const LabeledDataset& ds, const std::string& group_by);

// Accuracy summary cell, "mean (std), auc" with AUC scaled to percent.
std::string result_cell(double mean_accuracy, double std_accuracy, double auc);

std::string markdown_table(const CsvTable& t);

struct ExperimentConfig {
    std::string data_dir;
    std::vector<std::string> tasks = {"friends_two"};
    std::vector<std::string> models = {"forest", "baseline"};
    std::vector<std::string> groups = {"ALL"};
    int k = 20;
    int iterations = 10;
    std::uint64_t seed = 0;
    int window_slots = 6;
    int grouping_threshold = 1;
    bool people_include_others = true;
    int n_trees = 100;
    int smote_k = 5;
    unsigned threads = 0; // 0 picks hardware width
    bool use_region = false;
    double min_lat = 0, max_lat = 0, min_lon = 0, max_lon = 0;
    std::size_t stats_top = 30;
    std::string rank_metric = "d";
    std::string rank_contrast = "alone-vs-group";
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_json(const ExperimentConfig& cfg);

// Full pipeline over one data directory: slot aggregation, event matching,
// labeling, feature screening, evaluation, rendered tables, and a manifest
// listing every written file with its checksum plus the seed and the config
// echo. Reruns with the same inputs produce byte-identical bundles. Stage
// failures carry a stage-name prefix.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Recomputes the checksum of every file listed in out_dir/manifest.json and
// flags missing, modified, or unlisted files. Empty result = intact.
std::vector<std::string> verify_experiment(const std::string& out_dir);

} // namespace nightsense
