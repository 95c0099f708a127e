#include "nbayes.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace nightsense {

void NaiveBayes::train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                       int n_classes) {
    if (X.empty()) throw input_error("naive bayes: empty training set");
    if (X.size() != y.size()) throw internal_error("naive bayes: rows and labels differ in length");
    if (n_classes < 2) throw input_error("naive bayes: need at least 2 classes");
    n_classes_ = n_classes;
    const std::size_t n = X.size();
    const std::size_t f = X[0].size();

    std::vector<double> class_n(static_cast<std::size_t>(n_classes), 0.0);
    mean_.assign(static_cast<std::size_t>(n_classes), std::vector<double>(f, 0.0));
    var_.assign(static_cast<std::size_t>(n_classes), std::vector<double>(f, 0.0));

    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        class_n[c] += 1.0;
        for (std::size_t j = 0; j < f; ++j) mean_[c][j] += X[i][j];
    }
    for (std::size_t c = 0; c < mean_.size(); ++c) {
        if (class_n[c] == 0.0) throw input_error("naive bayes: class without training rows");
        for (std::size_t j = 0; j < f; ++j) mean_[c][j] /= class_n[c];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < f; ++j) {
            const double d = X[i][j] - mean_[c][j];
            var_[c][j] += d * d;
        }
    }

    // Global per-feature variance fixes the floor's scale.
    double max_var = 0.0;
    std::vector<double> gmean(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) gmean[j] += X[i][j];
    }
    for (std::size_t j = 0; j < f; ++j) gmean[j] /= static_cast<double>(n);
    for (std::size_t j = 0; j < f; ++j) {
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = X[i][j] - gmean[j];
            ss += d * d;
        }
        max_var = std::max(max_var, ss / static_cast<double>(n));
    }
    double floor = 1e-9 * max_var;
    if (floor <= 0.0) floor = 1e-12;

    log_prior_.assign(static_cast<std::size_t>(n_classes), 0.0);
    for (std::size_t c = 0; c < var_.size(); ++c) {
        for (std::size_t j = 0; j < f; ++j) {
            var_[c][j] = std::max(var_[c][j] / class_n[c], floor);
        }
        log_prior_[c] = std::log(class_n[c] / static_cast<double>(n));
    }
}

std::vector<double> NaiveBayes::predict_proba(const std::vector<double>& x) const {
    if (mean_.empty()) throw internal_error("naive bayes: predict before train");
    std::vector<double> logp(log_prior_);
    for (std::size_t c = 0; c < mean_.size(); ++c) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - mean_[c][j];
            logp[c] += -0.5 * std::log(2.0 * 3.14159265358979323846 * var_[c][j]) -
                       d * d / (2.0 * var_[c][j]);
        }
    }
    const double mx = *std::max_element(logp.begin(), logp.end());
    double sum = 0;
    std::vector<double> proba(logp.size());
    for (std::size_t c = 0; c < logp.size(); ++c) {
        proba[c] = std::exp(logp[c] - mx);
        sum += proba[c];
    }
    for (double& p : proba) p /= sum;
    return proba;
}

int NaiveBayes::predict(const std::vector<double>& x) const {
    const auto proba = predict_proba(x);
    return static_cast<int>(std::max_element(proba.begin(), proba.end()) - proba.begin());
}

} // namespace nightsense
