#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "labels.hpp"

namespace nightsense {

struct CorrelationResult {
    double r = 0;
    double p = 1;
    std::size_t n = 0;
};

struct EffectSizeResult {
    double t = 0;
    double p = 1;
    double d = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::size_t n1 = 0, n2 = 0;
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided p-value for an observed t against t(df).
double two_sided_p(double t, double df);

// Product-moment correlation with p from t = r sqrt((n-2)/(1-r^2)).
// Requires n >= 3 and both vectors non-constant.
CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y);

// Identical to pearson with b as reals; b must be 0/1 with both classes.
CorrelationResult point_biserial(const std::vector<double>& b, const std::vector<double>& y);

// Pooled-variance two-sample Student t (Welch optional); n1, n2 >= 2.
void t_test(const std::vector<double>& a, const std::vector<double>& b, double* t, double* p,
            bool welch = false);

// d = (mean_a - mean_b)/s_pooled with CI = d +/- 1.96*SE,
// SE = sqrt((n1+n2)/(n1 n2) + d^2/(2(n1+n2))).
EffectSizeResult cohens_d(const std::vector<double>& a, const std::vector<double>& b);

// Class pair compared by t/d rankings; metric r correlates against the full
// label vector instead.
struct Contrast {
    std::string name;
    std::vector<int> a, b;
};

const std::vector<std::string>& contrast_names();
Contrast contrast_from_name(const std::string& name);

enum class RankMetric { t, d, r };
RankMetric metric_from_name(const std::string& name);

struct RankedFeature {
    std::string column; // event feature column, e.g. avg_accMsmaMean
    std::string group;  // sensor group code
    double value = 0;   // ranking metric value
    double t = 0;
    double p = 1;
    double d = 0;
    double ci_low = 0, ci_high = 0;
    std::size_t n1 = 0, n2 = 0;
    std::string stars;  // ** p<=1e-2, *** p<=1e-3, **** p<=1e-4
    std::string d_flag; // "*" when the d confidence interval includes zero
};

// Missing values are dropped per feature (pairwise deletion); features with
// degenerate samples are skipped. Descending |value|, catalog-order ties.
std::vector<RankedFeature> rank_features(const LabeledDataset& ds, const Contrast& contrast,
                                         RankMetric metric, std::size_t k);

std::string p_stars(double p);
void write_ranked_csv(const std::string& path, const std::vector<RankedFeature>& table);

} // namespace nightsense
