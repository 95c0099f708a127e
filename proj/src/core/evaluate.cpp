#include "evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "catalog.hpp"
#include "common.hpp"
#include "forest.hpp"
#include "metrics.hpp"
#include "nbayes.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "smote.hpp"

namespace nightsense {

const std::vector<std::string>& feature_group_names() {
    static const std::vector<std::string> names = {"ACC", "APP", "BAT",    "BLU",    "PRO", "LOC",
                                                   "SCR", "WIF", "ConSen", "IntSen", "ALL"};
    return names;
}

std::vector<std::size_t> slice_features(const std::string& group) {
    std::vector<SensorGroup> groups;
    if (group == "ConSen") {
        groups = {SensorGroup::ACC, SensorGroup::BAT, SensorGroup::BLU,
                  SensorGroup::PRO, SensorGroup::LOC, SensorGroup::WIF};
    } else if (group == "IntSen") {
        groups = {SensorGroup::APP, SensorGroup::SCR};
    } else if (group == "ALL") {
        groups = {SensorGroup::ACC, SensorGroup::APP, SensorGroup::BAT, SensorGroup::BLU,
                  SensorGroup::PRO, SensorGroup::LOC, SensorGroup::SCR, SensorGroup::WIF};
    } else {
        groups = {group_from_code(group)};
    }
    const auto& catalog = base_catalog();
    std::vector<std::size_t> cols;
    for (std::size_t b = 0; b < catalog.size(); ++b) {
        if (std::find(groups.begin(), groups.end(), catalog[b].group) == groups.end()) continue;
        cols.push_back(3 * b + 0);
        cols.push_back(3 * b + 1);
        cols.push_back(3 * b + 2);
    }
    return cols;
}

ModelKind model_from_name(const std::string& name) {
    if (name == "forest") return ModelKind::forest;
    if (name == "nbayes") return ModelKind::nbayes;
    if (name == "baseline") return ModelKind::baseline;
    throw input_error("unknown model '" + name + "' (want forest, nbayes, or baseline)");
}

const std::string& model_name(ModelKind m) {
    static const std::vector<std::string> names = {"forest", "nbayes", "baseline"};
    return names[static_cast<std::size_t>(m)];
}

namespace {

// Fold assembly: rows of the selected participants become the test split.
struct Fold {
    std::vector<std::size_t> train_rows, test_rows;
    std::vector<std::string> test_pids, train_pids;
};

bool try_fold(const LabeledDataset& ds, const std::vector<std::string>& pids, int k, int n_classes,
              Rng& rng, Fold* fold) {
    const auto drawn = rng.sample_without_replacement(pids.size(), static_cast<std::size_t>(k));
    std::set<std::string> test_set;
    for (std::size_t j : drawn) test_set.insert(pids[j]);

    Fold f;
    std::vector<std::size_t> train_class(static_cast<std::size_t>(n_classes), 0);
    std::set<int> test_classes;
    for (std::size_t i = 0; i < ds.events.rows.size(); ++i) {
        if (test_set.count(ds.events.rows[i].participant_id)) {
            f.test_rows.push_back(i);
            test_classes.insert(ds.labels[i]);
        } else {
            f.train_rows.push_back(i);
            ++train_class[static_cast<std::size_t>(ds.labels[i])];
        }
    }
    if (f.test_rows.empty() || f.train_rows.empty()) return false;
    if (test_classes.size() < 2) return false;
    for (std::size_t c = 0; c < train_class.size(); ++c) {
        if (ds.histogram.count(static_cast<int>(c)) && train_class[c] < 2) return false;
    }
    f.test_pids.assign(test_set.begin(), test_set.end());
    std::set<std::string> train_set;
    for (std::size_t i : f.train_rows) train_set.insert(ds.events.rows[i].participant_id);
    f.train_pids.assign(train_set.begin(), train_set.end());
    *fold = std::move(f);
    return true;
}

} // namespace

EvaluationResult evaluate_lkpo(const LabeledDataset& ds, const EvalOptions& opts) {
    if (opts.k < 1) throw input_error("k must be >= 1");
    if (opts.iterations < 1) throw input_error("iterations must be >= 1");
    if (ds.events.rows.empty()) throw input_error("labeled dataset is empty");

    std::set<std::string> pid_set;
    for (const auto& r : ds.events.rows) pid_set.insert(r.participant_id);
    const std::vector<std::string> pids(pid_set.begin(), pid_set.end());
    if (pids.size() < static_cast<std::size_t>(opts.k) + 1) {
        throw input_error("need at least k+1 = " + std::to_string(opts.k + 1) +
                          " participants, have " + std::to_string(pids.size()));
    }
    const int n_classes = class_count(ds.task);
    const auto columns = slice_features(opts.group);
    if (columns.empty()) throw internal_error("empty feature slice");

    EvaluationResult result;
    result.task = ds.task;
    result.options = opts;
    result.columns = columns;
    result.iterations.resize(static_cast<std::size_t>(opts.iterations));

    parallel_for(result.iterations.size(), opts.threads, [&](std::size_t it) {
        IterationResult out;
        out.iteration = static_cast<int>(it);

        Rng fold_rng(derive_seed(opts.seed, "fold", it));
        Fold fold;
        bool ok = false;
        for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
            if (try_fold(ds, pids, opts.k, n_classes, fold_rng, &fold)) {
                out.retries = attempt;
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw input_error("iteration " + std::to_string(it) + ": no valid fold after " +
                              std::to_string(opts.max_retries) + " resamples");
        }

        // Standardization and imputation constants come from the train split
        // only; a missing or constant-column value standardizes to 0.
        const std::size_t nf = columns.size();
        std::vector<double> mu(nf, 0.0), sigma(nf, 0.0);
        for (std::size_t j = 0; j < nf; ++j) {
            double sum = 0;
            std::size_t count = 0;
            for (std::size_t i : fold.train_rows) {
                const double v = ds.events.rows[i].features[columns[j]];
                if (is_missing(v)) continue;
                sum += v;
                ++count;
            }
            if (count == 0) continue;
            mu[j] = sum / static_cast<double>(count);
            double ss = 0;
            for (std::size_t i : fold.train_rows) {
                const double v = ds.events.rows[i].features[columns[j]];
                if (is_missing(v)) continue;
                ss += (v - mu[j]) * (v - mu[j]);
            }
            sigma[j] = std::sqrt(ss / static_cast<double>(count));
        }
        const auto standardize = [&](std::size_t row) {
            std::vector<double> x(nf, 0.0);
            for (std::size_t j = 0; j < nf; ++j) {
                const double v = ds.events.rows[row].features[columns[j]];
                if (is_missing(v) || sigma[j] == 0.0) continue;
                x[j] = (v - mu[j]) / sigma[j];
            }
            return x;
        };

        std::vector<std::vector<double>> X_train;
        std::vector<int> y_train;
        X_train.reserve(fold.train_rows.size());
        for (std::size_t i : fold.train_rows) {
            X_train.push_back(standardize(i));
            y_train.push_back(ds.labels[i]);
            ++out.train_histogram[ds.labels[i]];
        }
        std::vector<std::vector<double>> X_test;
        std::vector<int> y_test;
        X_test.reserve(fold.test_rows.size());
        for (std::size_t i : fold.test_rows) {
            X_test.push_back(standardize(i));
            y_test.push_back(ds.labels[i]);
            ++out.test_histogram[ds.labels[i]];
        }

        Rng smote_rng(derive_seed(opts.seed, "smote", it));
        smote_balance(X_train, y_train, opts.smote_k, smote_rng);

        std::vector<int> predicted(y_test.size());
        std::vector<std::vector<double>> proba(y_test.size());
        if (opts.model == ModelKind::forest) {
            ForestParams fp;
            fp.n_trees = opts.n_trees;
            fp.mtry = opts.mtry;
            fp.seed = derive_seed(opts.seed, "forest", it);
            fp.threads = 1;
            Forest forest;
            forest.train(X_train, y_train, n_classes, fp);
            for (std::size_t i = 0; i < X_test.size(); ++i) {
                proba[i] = forest.predict_proba(X_test[i]);
                predicted[i] = static_cast<int>(
                    std::max_element(proba[i].begin(), proba[i].end()) - proba[i].begin());
            }
            out.importances = forest.importances();
        } else if (opts.model == ModelKind::nbayes) {
            NaiveBayes nb;
            nb.train(X_train, y_train, n_classes);
            for (std::size_t i = 0; i < X_test.size(); ++i) {
                proba[i] = nb.predict_proba(X_test[i]);
                predicted[i] = static_cast<int>(
                    std::max_element(proba[i].begin(), proba[i].end()) - proba[i].begin());
            }
        } else {
            Rng guess_rng(derive_seed(opts.seed, "baseline", it));
            for (std::size_t i = 0; i < X_test.size(); ++i) {
                std::vector<double> scores(static_cast<std::size_t>(n_classes));
                double sum = 0;
                for (double& s : scores) {
                    s = guess_rng.uniform01();
                    sum += s;
                }
                for (double& s : scores) s /= sum;
                proba[i] = std::move(scores);
                predicted[i] = static_cast<int>(
                    std::max_element(proba[i].begin(), proba[i].end()) - proba[i].begin());
            }
        }

        out.accuracy = accuracy_pct(y_test, predicted);
        out.balanced_accuracy = balanced_accuracy_pct(y_test, predicted);
        out.auc = roc_auc_macro(y_test, proba, n_classes);
        out.test_participants = fold.test_pids;
        out.train_participants = fold.train_pids;
        result.iterations[it] = std::move(out);
    });

    double acc_sum = 0, bal_sum = 0, auc_sum = 0;
    for (const auto& it : result.iterations) {
        acc_sum += it.accuracy;
        bal_sum += it.balanced_accuracy;
        auc_sum += it.auc;
    }
    const double n = static_cast<double>(result.iterations.size());
    result.mean_accuracy = acc_sum / n;
    result.mean_balanced_accuracy = bal_sum / n;
    result.mean_auc = auc_sum / n;
    double ss = 0;
    for (const auto& it : result.iterations) {
        ss += (it.accuracy - result.mean_accuracy) * (it.accuracy - result.mean_accuracy);
    }
    result.std_accuracy = std::sqrt(ss / n);
    return result;
}

std::string evaluation_json(const EvaluationResult& result) {
    nlohmann::json j;
    j["task"] = task_name(result.task);
    j["config"]["model"] = model_name(result.options.model);
    j["config"]["group"] = result.options.group;
    j["config"]["k"] = result.options.k;
    j["config"]["iterations"] = result.options.iterations;
    j["config"]["seed"] = result.options.seed;
    j["config"]["smote_k"] = result.options.smote_k;
    j["config"]["n_trees"] = result.options.n_trees;
    j["config"]["mtry"] = result.options.mtry;
    j["config"]["columns"] = result.columns.size();

    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : result.iterations) {
        nlohmann::json ji;
        ji["iteration"] = it.iteration;
        ji["accuracy"] = it.accuracy;
        ji["balanced_accuracy"] = it.balanced_accuracy;
        ji["auc"] = it.auc;
        ji["retries"] = it.retries;
        ji["test_participants"] = it.test_participants;
        ji["train_participants"] = it.train_participants;
        nlohmann::json th = nlohmann::json::object(), eh = nlohmann::json::object();
        for (const auto& [c, count] : it.train_histogram) th[std::to_string(c)] = count;
        for (const auto& [c, count] : it.test_histogram) eh[std::to_string(c)] = count;
        ji["train_histogram"] = th;
        ji["test_histogram"] = eh;
        iters.push_back(std::move(ji));
    }
    j["iterations"] = std::move(iters);
    j["summary"]["mean_accuracy"] = result.mean_accuracy;
    j["summary"]["std_accuracy"] = result.std_accuracy;
    j["summary"]["mean_balanced_accuracy"] = result.mean_balanced_accuracy;
    j["summary"]["mean_auc"] = result.mean_auc;

    if (result.options.model == ModelKind::forest) {
        nlohmann::json imp = nlohmann::json::object();
        for (const auto& entry : importance_report(result, result.columns.size())) {
            imp[entry.column] = entry.importance;
        }
        j["mean_importances"] = std::move(imp);
    }
    return j.dump(2) + "\n";
}

std::vector<ImportanceEntry> importance_report(const EvaluationResult& result, std::size_t top_n) {
    if (result.options.model != ModelKind::forest) {
        throw input_error("importance report needs a forest evaluation");
    }
    const auto& cols = event_feature_columns();
    const auto& catalog = base_catalog();
    std::vector<double> mean(result.columns.size(), 0.0);
    std::size_t used = 0;
    for (const auto& it : result.iterations) {
        if (it.importances.size() != mean.size()) continue;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += it.importances[j];
        ++used;
    }
    if (used == 0) throw internal_error("no iteration carried importances");
    double total = 0;
    for (double v : mean) total += v;
    if (total > 0) {
        for (double& v : mean) v /= total;
    }

    std::vector<ImportanceEntry> entries(mean.size());
    for (std::size_t j = 0; j < mean.size(); ++j) {
        const std::size_t col = result.columns[j];
        entries[j].column = cols[col];
        entries[j].group = group_code(catalog[col / 3].group);
        entries[j].importance = mean[j];
    }
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.importance > b.importance;
    });
    if (entries.size() > top_n) entries.resize(top_n);
    return entries;
}

std::map<std::string, double> importance_by_group(const EvaluationResult& result) {
    std::map<std::string, double> sums;
    for (const auto& entry : importance_report(result, result.columns.size())) {
        sums[entry.group] += entry.importance;
    }
    return sums;
}

std::vector<SweepPoint> threshold_sweep(const EventDataset& events, Task task,
                                        const LabelOptions& base_labels, const EvalOptions& opts) {
    if (!is_three_class(task) || task == Task::sex_composition) {
        throw input_error("threshold sweep needs a three-class companion-count task");
    }
    std::vector<SweepPoint> points;
    for (int g = 1; g <= 10; ++g) {
        SweepPoint pt;
        pt.g = g;
        LabelOptions lo = base_labels;
        lo.grouping_threshold = g;
        const LabeledDataset labeled = label_dataset(events, task, lo);
        pt.histogram = {};
        for (const auto& [c, count] : labeled.histogram) pt.histogram[c] = count;
        bool all_classes = labeled.histogram.size() == 3;
        if (!all_classes) {
            pt.note = "labeling leaves an empty class";
            points.push_back(std::move(pt));
            continue;
        }
        try {
            const EvaluationResult r = evaluate_lkpo(labeled, opts);
            pt.defined = true;
            pt.mean_accuracy = r.mean_accuracy;
            pt.std_accuracy = r.std_accuracy;
            pt.mean_auc = r.mean_auc;
        } catch (const input_error& e) {
            pt.note = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

std::string sweep_json(const std::vector<SweepPoint>& points, Task task) {
    nlohmann::json j;
    j["task"] = task_name(task);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : points) {
        nlohmann::json jp;
        jp["g"] = pt.g;
        jp["defined"] = pt.defined;
        if (pt.defined) {
            jp["mean_accuracy"] = pt.mean_accuracy;
            jp["std_accuracy"] = pt.std_accuracy;
            jp["mean_auc"] = pt.mean_auc;
        } else {
            jp["note"] = pt.note;
        }
        nlohmann::json h = nlohmann::json::object();
        for (const auto& [c, count] : pt.histogram) h[std::to_string(c)] = count;
        jp["histogram"] = h;
        arr.push_back(std::move(jp));
    }
    j["points"] = std::move(arr);
    return j.dump(2) + "\n";
}

} // namespace nightsense
