#pragma once

#include <vector>

namespace nightsense {

// Gaussian naive Bayes with per-class feature means/variances and a variance
// floor of 1e-9 times the largest feature variance in the training set.
class NaiveBayes {
public:
    void train(const std::vector<std::vector<double>>& X, const std::vector<int>& y, int n_classes);

    std::vector<double> predict_proba(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;

    int n_classes() const { return n_classes_; }

private:
    int n_classes_ = 0;
    std::vector<double> log_prior_;
    std::vector<std::vector<double>> mean_; // [class][feature]
    std::vector<std::vector<double>> var_;
};

} // namespace nightsense
