#pragma once

#include <vector>

namespace nightsense {

// Percent correct, 0..100.
double accuracy_pct(const std::vector<int>& truth, const std::vector<int>& predicted);

// Mean per-class recall over classes present in truth, 0..100.
double balanced_accuracy_pct(const std::vector<int>& truth, const std::vector<int>& predicted);

// Binary ROC AUC by score ranking; ties contribute half (equivalent to
// trapezoidal area with tied scores merged). labels hold 0/1.
double roc_auc_binary(const std::vector<int>& labels, const std::vector<double>& scores);

// Unweighted mean of one-vs-rest AUCs over classes present in truth; classes
// absent from truth are skipped (counted in *skipped when given). For two
// classes with complementary scores this equals the binary AUC.
double roc_auc_macro(const std::vector<int>& truth, const std::vector<std::vector<double>>& proba,
                     int n_classes, int* skipped = nullptr);

} // namespace nightsense
