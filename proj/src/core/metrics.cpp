#include "metrics.hpp"

#include <algorithm>
#include <map>

#include "common.hpp"

namespace nightsense {

double accuracy_pct(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.empty() || truth.size() != predicted.size()) {
        throw internal_error("accuracy: mismatched or empty inputs");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
}

double balanced_accuracy_pct(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.empty() || truth.size() != predicted.size()) {
        throw internal_error("balanced accuracy: mismatched or empty inputs");
    }
    std::map<int, std::pair<std::size_t, std::size_t>> per_class; // total, correct
    for (std::size_t i = 0; i < truth.size(); ++i) {
        auto& [total, correct] = per_class[truth[i]];
        ++total;
        if (truth[i] == predicted[i]) ++correct;
    }
    double sum = 0;
    for (const auto& [label, tc] : per_class) {
        sum += static_cast<double>(tc.second) / static_cast<double>(tc.first);
    }
    return 100.0 * sum / static_cast<double>(per_class.size());
}

double roc_auc_binary(const std::vector<int>& labels, const std::vector<double>& scores) {
    if (labels.size() != scores.size()) throw internal_error("auc: mismatched inputs");
    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels) {
        if (l == 1) {
            ++n_pos;
        } else if (l == 0) {
            ++n_neg;
        } else {
            throw input_error("binary auc needs 0/1 labels");
        }
    }
    if (n_pos == 0 || n_neg == 0) throw input_error("binary auc needs both classes present");

    // Rank-sum form: AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos n_neg) with
    // average ranks over tied scores.
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
        }
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double roc_auc_macro(const std::vector<int>& truth, const std::vector<std::vector<double>>& proba,
                     int n_classes, int* skipped) {
    if (truth.empty() || truth.size() != proba.size()) {
        throw internal_error("macro auc: mismatched or empty inputs");
    }
    double sum = 0;
    int used = 0, missing = 0;
    for (int c = 0; c < n_classes; ++c) {
        bool present = false;
        for (int l : truth) {
            if (l == c) {
                present = true;
                break;
            }
        }
        if (!present) {
            ++missing;
            continue;
        }
        std::vector<int> binary(truth.size());
        std::vector<double> scores(truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            binary[i] = truth[i] == c ? 1 : 0;
            scores[i] = proba[i][static_cast<std::size_t>(c)];
        }
        bool both = false;
        for (int b : binary) {
            if (b == 0) {
                both = true;
                break;
            }
        }
        if (!both) {
            ++missing; // single-class truth, one-vs-rest undefined
            continue;
        }
        sum += roc_auc_binary(binary, scores);
        ++used;
    }
    if (skipped) *skipped = missing;
    if (used == 0) throw input_error("macro auc: no class with both positives and negatives");
    return sum / static_cast<double>(used);
}

} // namespace nightsense
