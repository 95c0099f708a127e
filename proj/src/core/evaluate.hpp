#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "labels.hpp"

namespace nightsense {

// Feature-group ablation slices over the event columns. ConSen covers the
// embedded sensors (ACC, BAT, BLU, PRO, LOC, WIF), IntSen the interaction
// ones (APP, SCR).
const std::vector<std::string>& feature_group_names();
std::vector<std::size_t> slice_features(const std::string& group);

enum class ModelKind { forest, nbayes, baseline };
ModelKind model_from_name(const std::string& name);
const std::string& model_name(ModelKind m);

struct EvalOptions {
    ModelKind model = ModelKind::forest;
    std::string group = "ALL";
    int k = 20;          // participants held out per iteration
    int iterations = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    int smote_k = 5;
    int n_trees = 100;
    int mtry = 0; // 0 = floor(sqrt(F))
    int max_retries = 100;
};

struct IterationResult {
    int iteration = 0;
    double accuracy = 0;
    double balanced_accuracy = 0;
    double auc = 0;
    int retries = 0;
    std::vector<std::string> test_participants;  // sorted
    std::vector<std::string> train_participants; // sorted
    std::map<int, std::size_t> train_histogram;  // before balancing
    std::map<int, std::size_t> test_histogram;
    std::vector<double> importances; // per sliced column (forest only)
};

struct EvaluationResult {
    Task task = Task::friends_two;
    EvalOptions options;
    std::vector<std::size_t> columns; // sliced event-feature column indices
    std::vector<IterationResult> iterations;
    double mean_accuracy = 0;
    double std_accuracy = 0; // population std over iterations
    double mean_balanced_accuracy = 0;
    double mean_auc = 0;
};

// Leave-k-participants-out over seeded independent resamples: per iteration,
// k participants form the test fold; the train fold is standardized and
// mean-imputed on its own statistics, SMOTE-balanced, then fitted. Folds
// failing the class requirements are resampled (bounded retries).
EvaluationResult evaluate_lkpo(const LabeledDataset& ds, const EvalOptions& opts);

std::string evaluation_json(const EvaluationResult& result);

struct ImportanceEntry {
    std::string column;
    std::string group;
    double importance = 0; // mean over iterations
};

// Mean forest importances across iterations, descending (ties by column
// order); requires a forest evaluation.
std::vector<ImportanceEntry> importance_report(const EvaluationResult& result, std::size_t top_n);
std::map<std::string, double> importance_by_group(const EvaluationResult& result);

struct SweepPoint {
    int g = 0;
    bool defined = false;
    std::string note;
    std::map<int, std::size_t> histogram;
    double mean_accuracy = 0;
    double std_accuracy = 0;
    double mean_auc = 0;
};

// Re-labels a three-class task per grouping threshold g = 1..10 and reruns
// the evaluation; thresholds yielding degenerate labelings are reported as
// undefined rather than failing the sweep.
std::vector<SweepPoint> threshold_sweep(const EventDataset& events, Task task,
                                        const LabelOptions& base_labels, const EvalOptions& opts);

std::string sweep_json(const std::vector<SweepPoint>& points, Task task);

} // namespace nightsense
