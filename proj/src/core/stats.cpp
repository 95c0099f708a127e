#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "catalog.hpp"
#include "common.hpp"
#include "csvio.hpp"

namespace nightsense {

namespace {

constexpr double kBetaTol = 1e-10;
constexpr int kBetaMaxIter = 500;

// Lentz's algorithm for the continued fraction of I_x(a, b).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kBetaTol) return h;
    }
    throw internal_error("incomplete beta continued fraction did not converge");
}

double sample_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw input_error("incomplete beta needs x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (df <= 0) throw input_error("degrees of freedom must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * reg_incomplete_beta(0.5 * df, 0.5, x);
    return t > 0 ? 1.0 - tail : tail;
}

double two_sided_p(double t, double df) {
    if (df <= 0) throw input_error("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return reg_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

CorrelationResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw input_error("correlation inputs differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw input_error("correlation needs at least 3 pairs");
    const double mx = sample_mean(x), my = sample_mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw input_error("correlation undefined for a constant vector");
    CorrelationResult res;
    res.n = n;
    res.r = sxy / std::sqrt(sxx * syy);
    res.r = std::clamp(res.r, -1.0, 1.0);
    const double df = static_cast<double>(n - 2);
    if (std::fabs(res.r) >= 1.0) {
        res.p = 0.0;
    } else {
        const double t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
        res.p = two_sided_p(t, df);
    }
    return res;
}

CorrelationResult point_biserial(const std::vector<double>& b, const std::vector<double>& y) {
    bool has0 = false, has1 = false;
    for (double v : b) {
        if (v == 0.0) {
            has0 = true;
        } else if (v == 1.0) {
            has1 = true;
        } else {
            throw input_error("point-biserial needs a 0/1 vector");
        }
    }
    if (!has0 || !has1) throw input_error("point-biserial needs both classes present");
    return pearson(b, y);
}

void t_test(const std::vector<double>& a, const std::vector<double>& b, double* t, double* p,
            bool welch) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 < 2 || n2 < 2) throw input_error("t-test needs at least 2 values per sample");
    const double m1 = sample_mean(a), m2 = sample_mean(b);
    const double v1 = sample_var(a, m1), v2 = sample_var(b, m2);
    double stat, df;
    if (welch) {
        const double se2 = v1 / n1 + v2 / n2;
        if (se2 == 0.0) throw input_error("t-test degenerate: zero variance in both samples");
        stat = (m1 - m2) / std::sqrt(se2);
        df = se2 * se2 /
             (v1 * v1 / (static_cast<double>(n1) * n1 * (n1 - 1)) +
              v2 * v2 / (static_cast<double>(n2) * n2 * (n2 - 1)));
    } else {
        const double pooled =
            ((n1 - 1) * v1 + (n2 - 1) * v2) / static_cast<double>(n1 + n2 - 2);
        if (pooled == 0.0) throw input_error("t-test degenerate: zero pooled variance");
        stat = (m1 - m2) / (std::sqrt(pooled) * std::sqrt(1.0 / n1 + 1.0 / n2));
        df = static_cast<double>(n1 + n2 - 2);
    }
    if (t) *t = stat;
    if (p) *p = two_sided_p(stat, df);
}

EffectSizeResult cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    EffectSizeResult res;
    res.n1 = a.size();
    res.n2 = b.size();
    t_test(a, b, &res.t, &res.p);
    const double m1 = sample_mean(a), m2 = sample_mean(b);
    const double v1 = sample_var(a, m1), v2 = sample_var(b, m2);
    const double pooled =
        ((res.n1 - 1) * v1 + (res.n2 - 1) * v2) / static_cast<double>(res.n1 + res.n2 - 2);
    res.d = (m1 - m2) / std::sqrt(pooled);
    const double n1 = static_cast<double>(res.n1), n2 = static_cast<double>(res.n2);
    const double se = std::sqrt((n1 + n2) / (n1 * n2) + res.d * res.d / (2.0 * (n1 + n2)));
    res.ci_low = res.d - 1.96 * se;
    res.ci_high = res.d + 1.96 * se;
    return res;
}

const std::vector<std::string>& contrast_names() {
    static const std::vector<std::string> names = {"alone-vs-group", "alone-vs-sgroup",
                                                   "sgroup-vs-lgroup", "alone-vs-lgroup"};
    return names;
}

Contrast contrast_from_name(const std::string& name) {
    if (name == "alone-vs-group") return {name, {0}, {1, 2}};
    if (name == "alone-vs-sgroup") return {name, {0}, {1}};
    if (name == "sgroup-vs-lgroup") return {name, {1}, {2}};
    if (name == "alone-vs-lgroup") return {name, {0}, {2}};
    throw input_error("unknown contrast '" + name + "'");
}

RankMetric metric_from_name(const std::string& name) {
    if (name == "t") return RankMetric::t;
    if (name == "d") return RankMetric::d;
    if (name == "r") return RankMetric::r;
    throw input_error("unknown metric '" + name + "' (want t, d, or r)");
}

std::string p_stars(double p) {
    if (p <= 1e-4) return "****";
    if (p <= 1e-3) return "***";
    if (p <= 1e-2) return "**";
    return "";
}

std::vector<RankedFeature> rank_features(const LabeledDataset& ds, const Contrast& contrast,
                                         RankMetric metric, std::size_t k) {
    const auto& cols = event_feature_columns();
    const auto& catalog = base_catalog();
    std::vector<RankedFeature> table;

    for (std::size_t c = 0; c < cols.size(); ++c) {
        RankedFeature rf;
        rf.column = cols[c];
        rf.group = group_code(catalog[c / 3].group);
        try {
            if (metric == RankMetric::r) {
                std::vector<double> values, labels;
                for (std::size_t i = 0; i < ds.events.rows.size(); ++i) {
                    const double v = ds.events.rows[i].features[c];
                    if (is_missing(v)) continue;
                    values.push_back(v);
                    labels.push_back(static_cast<double>(ds.labels[i]));
                }
                const CorrelationResult cr = pearson(labels, values);
                rf.value = cr.r;
                rf.p = cr.p;
                rf.n1 = cr.n;
                rf.n2 = cr.n;
            } else {
                std::vector<double> a, b;
                for (std::size_t i = 0; i < ds.events.rows.size(); ++i) {
                    const double v = ds.events.rows[i].features[c];
                    if (is_missing(v)) continue;
                    const int label = ds.labels[i];
                    if (std::find(contrast.a.begin(), contrast.a.end(), label) != contrast.a.end()) {
                        a.push_back(v);
                    } else if (std::find(contrast.b.begin(), contrast.b.end(), label) !=
                               contrast.b.end()) {
                        b.push_back(v);
                    }
                }
                const EffectSizeResult es = cohens_d(a, b);
                rf.t = es.t;
                rf.p = es.p;
                rf.d = es.d;
                rf.ci_low = es.ci_low;
                rf.ci_high = es.ci_high;
                rf.n1 = es.n1;
                rf.n2 = es.n2;
                rf.value = metric == RankMetric::t ? es.t : es.d;
            }
        } catch (const input_error&) {
            continue; // degenerate column under this contrast
        }
        rf.stars = p_stars(rf.p);
        if (metric != RankMetric::r && rf.ci_low <= 0.0 && rf.ci_high >= 0.0) rf.d_flag = "*";
        table.push_back(std::move(rf));
    }

    std::stable_sort(table.begin(), table.end(), [](const RankedFeature& a, const RankedFeature& b) {
        return std::fabs(a.value) > std::fabs(b.value);
    });
    if (table.size() > k) table.resize(k);
    return table;
}

void write_ranked_csv(const std::string& path, const std::vector<RankedFeature>& table) {
    CsvTable t;
    t.header = {"rank",   "column",  "group", "value", "t",  "p",     "d",
                "ci_low", "ci_high", "n1",    "n2",    "stars", "d_flag"};
    for (std::size_t i = 0; i < table.size(); ++i) {
        const RankedFeature& rf = table[i];
        t.rows.push_back({format_int(static_cast<std::int64_t>(i + 1)), rf.column, rf.group,
                          format_double(rf.value), format_double(rf.t), format_double(rf.p),
                          format_double(rf.d), format_double(rf.ci_low), format_double(rf.ci_high),
                          format_int(static_cast<std::int64_t>(rf.n1)),
                          format_int(static_cast<std::int64_t>(rf.n2)), rf.stars, rf.d_flag});
    }
    write_csv(path, t);
}

} // namespace nightsense
