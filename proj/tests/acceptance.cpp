#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/catalog.hpp"
#include "core/common.hpp"
#include "core/csvio.hpp"
#include "core/evaluate.hpp"
#include "core/ingest.hpp"
#include "core/labels.hpp"
#include "core/matching.hpp"
#include "core/metrics.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/slots.hpp"
#include "core/smote.hpp"
#include "core/stats.hpp"
#include "core/synth.hpp"
#include "core/timeutil.hpp"

using namespace nightsense;
namespace fs = std::filesystem;

namespace {

const std::string kScratch = "acceptance_scratch";

std::string scratch(const std::string& name) { return kScratch + "/" + name; }

#define REQUIRE_TRUE(cond, message)        \
    do {                                   \
        if (!(cond)) {                     \
            detail = (message);            \
            return false;                  \
        }                                  \
    } while (0)

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- shared

struct SharedState {
    std::string signal_data_dir;
    EventDataset signal_events;
    LabeledDataset signal_labeled;
    std::optional<EvaluationResult> forest_result;
};

SharedState g_shared;

// ------------------------------------------------------- c3 helper math

long double mean_ld(const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += x;
    return s / static_cast<long double>(v.size());
}

long double var_ld(const std::vector<double>& v) {
    const long double m = mean_ld(v);
    long double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<long double>(v.size() - 1);
}

long double ref_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const long double mx = mean_ld(x), my = mean_ld(y);
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / sqrtl(sxx * syy);
}

long double ref_pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
    const long double n1 = a.size(), n2 = b.size();
    const long double pooled = ((n1 - 1) * var_ld(a) + (n2 - 1) * var_ld(b)) / (n1 + n2 - 2);
    return (mean_ld(a) - mean_ld(b)) / (sqrtl(pooled) * sqrtl(1.0L / n1 + 1.0L / n2));
}

long double ref_cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    const long double n1 = a.size(), n2 = b.size();
    const long double pooled = ((n1 - 1) * var_ld(a) + (n2 - 1) * var_ld(b)) / (n1 + n2 - 2);
    return (mean_ld(a) - mean_ld(b)) / sqrtl(pooled);
}

double t_pdf(double x, double df) {
    const double pi = std::acos(-1.0);
    const double ln = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                      0.5 * std::log(df * pi) -
                      (df + 1.0) / 2.0 * std::log1p(x * x / df);
    return std::exp(ln);
}

double integrated_t_cdf(double t, double df) {
    if (t == 0.0) return 0.5;
    const int n = 40000;
    const double b = std::fabs(t);
    const double h = b / n;
    double s = t_pdf(0.0, df) + t_pdf(b, df);
    for (int i = 1; i < n; ++i) s += t_pdf(i * h, df) * (i % 2 == 1 ? 4.0 : 2.0);
    s *= h / 3.0;
    return t > 0 ? 0.5 + s : 0.5 - s;
}

// ------------------------------------------------------- c4 helper math

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::vector<std::size_t> brute_knn(const std::vector<std::vector<double>>& rows, std::size_t i,
                                   std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j == i) continue;
        d.emplace_back(sq_dist(rows[i], rows[j]), j);
    }
    std::stable_sort(d.begin(), d.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (d.size() > k) d.resize(k);
    std::vector<std::size_t> out;
    for (const auto& [dist, j] : d) out.push_back(j);
    return out;
}

bool on_segment(const std::vector<double>& s, const std::vector<double>& p,
                const std::vector<double>& n) {
    std::size_t pivot = 0;
    double span = 0;
    for (std::size_t f = 0; f < s.size(); ++f) {
        const double diff = std::fabs(n[f] - p[f]);
        if (diff > span) {
            span = diff;
            pivot = f;
        }
    }
    if (span < 1e-15) {
        for (std::size_t f = 0; f < s.size(); ++f) {
            if (std::fabs(s[f] - p[f]) > 1e-9) return false;
        }
        return true;
    }
    const double u = (s[pivot] - p[pivot]) / (n[pivot] - p[pivot]);
    if (u < -1e-12 || u > 1.0 + 1e-12) return false;
    for (std::size_t f = 0; f < s.size(); ++f) {
        if (std::fabs(s[f] - (p[f] + u * (n[f] - p[f]))) > 1e-9) return false;
    }
    return true;
}

// ------------------------------------------------------- c5 helper data

LabeledDataset balanced_dataset(std::size_t participants, std::size_t per_class, int n_classes,
                                std::uint64_t seed, Task task) {
    LabeledDataset ds;
    ds.task = task;
    Rng rng(seed);
    const std::size_t base = 3 * catalog_index("scrOnPct");
    for (std::size_t p = 0; p < participants; ++p) {
        for (std::size_t e = 0; e < per_class; ++e) {
            for (int c = 0; c < n_classes; ++c) {
                EventRow row;
                row.report_id =
                    "r" + std::to_string(p) + "_" + std::to_string(e) + "_" + std::to_string(c);
                row.participant_id = "p" + std::to_string(p);
                row.sex = "woman";
                row.features.assign(event_feature_columns().size(), 0.0);
                for (std::size_t j = 0; j < 3; ++j) row.features[base + j] = rng.normal(0.0, 1.0);
                ds.events.rows.push_back(std::move(row));
                ds.labels.push_back(c);
                ++ds.histogram[c];
            }
        }
    }
    return ds;
}

// ---------------------------------------------------------- criteria

bool c01_slot_window(std::string& detail) {
    const std::int64_t friday = days_from_civil(2014, 9, 12);
    const std::int64_t ts = friday * kMsPerDay + 22 * kMsPerHour + 8 * kMsPerMinute;
    std::int64_t night = 0;
    REQUIRE_TRUE(night_of_timestamp(ts, night), "22:08 must fall inside a weekend night");
    REQUIRE_TRUE(night == friday, "22:08 must key to its own evening date");
    const int slot = slot_index(ts, night);
    REQUIRE_TRUE(slot == 12, fmt("expected slot 12 for 22:08, got %d", slot));
    int lo = -1, hi = -1;
    REQUIRE_TRUE(match_window(slot, 6, &lo, &hi), "six-slot window must fit");
    REQUIRE_TRUE(lo == 10 && hi == 15, fmt("expected slots 10..15, got %d..%d", lo, hi));
    REQUIRE_TRUE(slot_start_clock(lo) == "21:40", "window must start 21:40");
    REQUIRE_TRUE(slot_end_clock(hi) == "22:39", "window must end 22:39");
    detail = "22:08 -> slots 10..15 covering 21:40-22:39";
    return true;
}

bool c02_exclusion_bookkeeping(std::string& detail) {
    CohortSpec spec;
    spec.seed = 20140905;
    spec.participants = 60;
    spec.nights_per_participant = 4;
    spec.reports_exact = 941;
    spec.inject_unavailable = 152;
    spec.inject_edge = 102;
    spec.inject_out_of_region = 59;
    const std::string dir = scratch("tally_cohort");
    fs::create_directories(dir);
    generate_cohort(spec, dir);

    const Cohort cohort = ingest_dir(dir);
    REQUIRE_TRUE(cohort.reports.size() == 1254,
                 fmt("expected 1254 reports, ingested %zu", cohort.reports.size()));
    const auto slots = aggregate_cohort(cohort, 0);
    MatchOptions mo;
    mo.use_region = true;
    mo.min_lat = spec.min_lat;
    mo.max_lat = spec.max_lat;
    mo.min_lon = spec.min_lon;
    mo.max_lon = spec.max_lon;
    ExclusionTally tally;
    build_dataset(cohort, slots, mo, &tally);
    REQUIRE_TRUE(tally.input == 1254, fmt("tally input %zu != 1254", tally.input));
    REQUIRE_TRUE(tally.unavailable_sensor_data == 152,
                 fmt("unavailable %zu != 152", tally.unavailable_sensor_data));
    REQUIRE_TRUE(tally.edge_time == 102, fmt("edge %zu != 102", tally.edge_time));
    REQUIRE_TRUE(tally.out_of_region == 59, fmt("region %zu != 59", tally.out_of_region));
    REQUIRE_TRUE(tally.retained == 941, fmt("retained %zu != 941", tally.retained));
    detail = "1254 -> retained 941, unavailable 152, edge 102, region 59";
    return true;
}

bool c03_stat_oracles(std::string& detail) {
    Rng rng(31415926);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(3, 50));
        std::vector<double> x(n), y(n), b(n);
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal(0.0, 2.0);
            y[i] = 0.3 * x[i] + rng.normal(0.0, 1.0);
            b[i] = i % 2 == 0 ? 0.0 : 1.0;
            (b[i] == 0.0 ? has0 : has1) = true;
        }
        const CorrelationResult pc = pearson(x, y);
        const double err = std::fabs(pc.r - static_cast<double>(ref_pearson(x, y)));
        REQUIRE_TRUE(err < 1e-9, fmt("correlation off by %.3e", err));
        if (has0 && has1 && n >= 3) {
            const CorrelationResult pb = point_biserial(b, y);
            const CorrelationResult same = pearson(b, y);
            REQUIRE_TRUE(pb.r == same.r && pb.p == same.p,
                         "binary correlation must equal the product-moment value bitwise");
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n1 = static_cast<std::size_t>(rng.uniform_int(2, 50));
        const std::size_t n2 = static_cast<std::size_t>(rng.uniform_int(2, 50));
        std::vector<double> a(n1), b2(n2);
        for (auto& v : a) v = rng.normal(0.0, 1.0);
        for (auto& v : b2) v = rng.normal(0.6, 1.4);
        double t = 0, p = 1;
        t_test(a, b2, &t, &p);
        const double terr = std::fabs(t - static_cast<double>(ref_pooled_t(a, b2)));
        REQUIRE_TRUE(terr < 1e-9, fmt("t statistic off by %.3e", terr));
        const EffectSizeResult es = cohens_d(a, b2);
        const double derr = std::fabs(es.d - static_cast<double>(ref_cohens_d(a, b2)));
        REQUIRE_TRUE(derr < 1e-9, fmt("effect size off by %.3e", derr));
    }
    double worst = 0;
    for (double df : {1.0, 2.0, 5.0, 10.0, 30.0}) {
        for (double t : {-4.0, -1.5, -0.3, 0.0, 0.5, 2.0, 4.0}) {
            worst = std::max(worst, std::fabs(student_t_cdf(t, df) - integrated_t_cdf(t, df)));
        }
    }
    REQUIRE_TRUE(worst < 1e-6, fmt("cumulative t off by %.3e vs quadrature", worst));
    detail = fmt("100 vectors within 1e-9; cdf within %.1e of quadrature", worst);
    return true;
}

bool c04_balancing(std::string& detail) {
    Rng data_rng(474747);
    const std::size_t F = 10;
    std::vector<std::vector<double>> minority, majority;
    for (int i = 0; i < 47; ++i) {
        std::vector<double> row(F);
        for (auto& v : row) v = data_rng.normal(0.0, 1.0);
        minority.push_back(row);
    }
    for (int i = 0; i < 894; ++i) {
        std::vector<double> row(F);
        for (auto& v : row) v = data_rng.normal(1.5, 1.2);
        majority.push_back(row);
    }
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (const auto& r : minority) {
        X.push_back(r);
        y.push_back(0);
    }
    for (const auto& r : majority) {
        X.push_back(r);
        y.push_back(1);
    }
    Rng rng(8);
    smote_balance(X, y, 5, rng);
    std::map<int, std::size_t> hist;
    for (int v : y) ++hist[v];
    REQUIRE_TRUE(hist[0] == 94 && hist[1] == 94,
                 fmt("expected 94/94, got %zu/%zu", hist[0], hist[1]));
    for (std::size_t i = 0; i < 47; ++i) {
        REQUIRE_TRUE(X[i] == minority[i], "original minority rows must be preserved in order");
    }
    for (std::size_t i = 47; i < 94; ++i) {
        bool explained = false;
        for (std::size_t p = 0; p < minority.size() && !explained; ++p) {
            for (std::size_t nb : brute_knn(minority, p, 5)) {
                if (on_segment(X[i], minority[p], minority[nb])) {
                    explained = true;
                    break;
                }
            }
        }
        REQUIRE_TRUE(explained,
                     fmt("synthetic row %zu is not on any parent-to-neighbor segment", i));
    }
    detail = "47/894 -> 94/94; all 47 synthetics sit on parent-neighbor segments";
    return true;
}

bool c05_metric_floors(std::string& detail) {
    std::vector<int> labels;
    std::vector<double> scores;
    for (int i = 0; i < 100; ++i) {
        labels.push_back(i % 2);
        scores.push_back(i % 2 == 0 ? 0.001 * i : 0.5 + 0.001 * i);
    }
    REQUIRE_TRUE(roc_auc_binary(labels, scores) == 1.0, "a perfect ranking must score exactly 1");

    Rng rng(991);
    labels.clear();
    scores.clear();
    for (int i = 0; i < 2000; ++i) {
        labels.push_back(i % 2);
        scores.push_back(rng.uniform01());
    }
    const double random_auc = roc_auc_binary(labels, scores);
    REQUIRE_TRUE(random_auc >= 0.45 && random_auc <= 0.55,
                 fmt("random ranking area %.4f outside [0.45, 0.55]", random_auc));

    EvalOptions opts;
    opts.model = ModelKind::baseline;
    opts.group = "SCR";
    opts.k = 20;
    opts.iterations = 10;
    opts.seed = 1205;
    const LabeledDataset two = balanced_dataset(30, 75, 2, 51, Task::friends_two);
    const EvaluationResult r2 = evaluate_lkpo(two, opts);
    REQUIRE_TRUE(std::fabs(r2.mean_accuracy - 50.0) <= 1.0,
                 fmt("two-class guess accuracy %.2f outside 50 +/- 1", r2.mean_accuracy));

    const LabeledDataset three = balanced_dataset(30, 50, 3, 52, Task::friends_three);
    opts.seed = 1206;
    const EvaluationResult r3 = evaluate_lkpo(three, opts);
    REQUIRE_TRUE(std::fabs(r3.mean_accuracy - 100.0 / 3.0) <= 1.0,
                 fmt("three-class guess accuracy %.2f outside 33.3 +/- 1", r3.mean_accuracy));
    detail = fmt("chance %.2f / %.2f; perfect auc 1.0; random auc %.3f", r2.mean_accuracy,
                 r3.mean_accuracy, random_auc);
    return true;
}

bool c06_signal_recovery(std::string& detail) {
    CohortSpec spec;
    spec.seed = 606;
    spec.participants = 50;
    spec.nights_per_participant = 4;
    spec.reports_per_night_lo = 1;
    spec.reports_per_night_hi = 2;
    spec.effects.push_back({"friends_two", "ACC", 1.0});
    const std::string dir = scratch("signal_cohort");
    fs::create_directories(dir);
    generate_cohort(spec, dir);
    g_shared.signal_data_dir = dir;

    const Cohort cohort = ingest_dir(dir);
    const auto slots = aggregate_cohort(cohort, 0);
    g_shared.signal_events = build_dataset(cohort, slots, MatchOptions{}, nullptr);
    g_shared.signal_labeled = label_dataset(g_shared.signal_events, Task::friends_two,
                                            LabelOptions{});
    REQUIRE_TRUE(g_shared.signal_labeled.histogram.size() == 2,
                 "both classes must appear in the labeled events");

    EvalOptions opts;
    opts.model = ModelKind::forest;
    opts.group = "ALL";
    opts.k = 20;
    opts.iterations = 10;
    opts.seed = 4242;
    opts.threads = 0;
    const EvaluationResult result = evaluate_lkpo(g_shared.signal_labeled, opts);
    g_shared.forest_result = result;
    REQUIRE_TRUE(result.mean_accuracy >= 85.0,
                 fmt("accuracy %.2f below the 85 floor", result.mean_accuracy));
    REQUIRE_TRUE(result.mean_auc >= 0.90, fmt("auc %.3f below the 0.90 floor", result.mean_auc));

    LabeledDataset shuffled = g_shared.signal_labeled;
    Rng shuffle_rng(777);
    shuffle_rng.shuffle(shuffled.labels);
    EvalOptions control = opts;
    control.seed = 4243;
    const EvaluationResult chance = evaluate_lkpo(shuffled, control);
    REQUIRE_TRUE(chance.mean_accuracy >= 45.0 && chance.mean_accuracy <= 55.0,
                 fmt("shuffled control %.2f outside 50 +/- 5", chance.mean_accuracy));

    const auto top = importance_report(result, 5);
    REQUIRE_TRUE(!top.empty() && top[0].group == "ACC",
                 fmt("top importance column %s is from %s, expected ACC",
                     top.empty() ? "?" : top[0].column.c_str(),
                     top.empty() ? "?" : top[0].group.c_str()));
    const auto by_group = importance_by_group(result);
    std::string best_group;
    double best = -1;
    for (const auto& [group, weight] : by_group) {
        if (weight > best) {
            best = weight;
            best_group = group;
        }
    }
    REQUIRE_TRUE(best_group == "ACC",
                 fmt("importance mass concentrates on %s, expected ACC", best_group.c_str()));
    detail = fmt("accuracy %.1f, auc %.3f, shuffled %.1f, top importance %s (ACC)",
                 result.mean_accuracy, result.mean_auc, chance.mean_accuracy,
                 top[0].column.c_str());
    return true;
}

bool c07_fold_hygiene(std::string& detail) {
    REQUIRE_TRUE(g_shared.forest_result.has_value(), "prerequisite evaluation (C6) missing");
    const std::string path = scratch("fold_log.json");
    write_text_file(path, evaluation_json(*g_shared.forest_result));
    const nlohmann::json log = nlohmann::json::parse(read_text_file(path));
    std::size_t checked = 0;
    for (const auto& it : log.at("iterations")) {
        std::set<std::string> train;
        for (const auto& pid : it.at("train_participants")) {
            train.insert(pid.get<std::string>());
        }
        for (const auto& pid : it.at("test_participants")) {
            REQUIRE_TRUE(train.count(pid.get<std::string>()) == 0,
                         "participant " + pid.get<std::string>() + " appears in both folds");
            ++checked;
        }
    }
    REQUIRE_TRUE(checked == 200, fmt("expected 10x20 held-out entries, saw %zu", checked));
    detail = "10 folds x 20 held-out participants, no train/test overlap";
    return true;
}

bool c08_reproducible_bundles(std::string& detail) {
    REQUIRE_TRUE(!g_shared.signal_data_dir.empty(), "prerequisite cohort (C6) missing");
    ExperimentConfig cfg;
    cfg.data_dir = g_shared.signal_data_dir;
    cfg.tasks = {"friends_two"};
    cfg.models = {"forest", "baseline"};
    cfg.groups = {"ALL"};
    cfg.k = 20;
    cfg.iterations = 10;
    cfg.seed = 7;
    cfg.threads = 1;
    const std::string dir_a = scratch("bundle_a");
    run_experiment(cfg, dir_a);

    ExperimentConfig cfg_b = cfg;
    cfg_b.threads = 0;
    const std::string dir_b = scratch("bundle_b");
    run_experiment(cfg_b, dir_b);

    REQUIRE_TRUE(verify_experiment(dir_a).empty(), "first bundle fails verification");
    REQUIRE_TRUE(verify_experiment(dir_b).empty(), "second bundle fails verification");
    const std::string manifest_a = read_text_file(dir_a + "/manifest.json");
    const std::string manifest_b = read_text_file(dir_b + "/manifest.json");
    REQUIRE_TRUE(manifest_a == manifest_b,
                 "manifests differ between worker counts for the same seed");
    const nlohmann::json manifest = nlohmann::json::parse(manifest_a);
    std::size_t files = 0;
    for (auto it = manifest.at("files").begin(); it != manifest.at("files").end(); ++it) {
        const std::string name = it.key();
        REQUIRE_TRUE(read_text_file(dir_a + "/" + name) == read_text_file(dir_b + "/" + name),
                     "file " + name + " differs between runs");
        ++files;
    }
    detail = fmt("two seed-7 runs, 1 vs hardware workers: %zu files byte-identical", files);
    return true;
}

bool c09_threshold_sweep(std::string& detail) {
    REQUIRE_TRUE(!g_shared.signal_events.rows.empty(), "prerequisite events (C6) missing");
    EvalOptions opts;
    opts.model = ModelKind::baseline;
    opts.group = "ALL";
    opts.k = 20;
    opts.iterations = 10;
    opts.seed = 909;
    const auto points =
        threshold_sweep(g_shared.signal_events, Task::friends_three, LabelOptions{}, opts);
    REQUIRE_TRUE(points.size() == 10, fmt("expected 10 sweep points, got %zu", points.size()));
    REQUIRE_TRUE(points[0].defined, "g=1 must evaluate");

    const LabeledDataset direct =
        label_dataset(g_shared.signal_events, Task::friends_three, LabelOptions{});
    const EvaluationResult ref = evaluate_lkpo(direct, opts);
    REQUIRE_TRUE(points[0].mean_accuracy == ref.mean_accuracy &&
                     points[0].std_accuracy == ref.std_accuracy &&
                     points[0].mean_auc == ref.mean_auc,
                 "g=1 sweep point differs from the default labeling run");

    std::size_t defined = 0;
    for (const auto& pt : points) {
        if (pt.defined) ++defined;
        else REQUIRE_TRUE(!pt.note.empty(), fmt("undefined g=%d must carry a note", pt.g));
    }
    for (const auto& row : g_shared.signal_events.rows) {
        int prev = 3;
        for (int g = 1; g <= 10; ++g) {
            LabelOptions lo;
            lo.grouping_threshold = g;
            const int label = derive_label(row, Task::friends_three, lo);
            REQUIRE_TRUE(label <= prev, fmt("label rose from %d to %d at g=%d", prev, label, g));
            prev = label;
        }
    }
    detail = fmt("10 points, %zu evaluable, g=1 matches the default run exactly", defined);
    return true;
}

bool c10_slice_counts(std::string& detail) {
    const std::map<std::string, std::size_t> expected = {
        {"ACC", 150}, {"APP", 105}, {"BAT", 36},     {"BLU", 27},    {"PRO", 18},
        {"LOC", 39},  {"SCR", 3},   {"WIF", 36},     {"ConSen", 306}, {"IntSen", 108}};
    for (const auto& [group, count] : expected) {
        const auto cols = slice_features(group);
        REQUIRE_TRUE(cols.size() == count,
                     fmt("%s slice has %zu columns, expected %zu", group.c_str(), cols.size(),
                         count));
        const std::set<std::size_t> unique(cols.begin(), cols.end());
        REQUIRE_TRUE(unique.size() == cols.size(), group + " slice repeats a column");
    }
    REQUIRE_TRUE(slice_features("ALL").size() == 414, "ALL slice must hold 414 columns");
    detail = "slices exact; note: a quoted interaction total of 96 conflicts with the catalog "
             "arithmetic (35 app bins + 1 screen feature, 3 stats each = 108); 108 is used";
    return true;
}

struct Criterion {
    const char* name;
    double budget_seconds; // 0 disables the time check
    std::function<bool(std::string&)> fn;
};

} // namespace

int main() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);

    const std::vector<Criterion> criteria = {
        {"report window placement", 1.0, c01_slot_window},
        {"exclusion bookkeeping replay", 60.0, c02_exclusion_bookkeeping},
        {"screening statistics oracles", 60.0, c03_stat_oracles},
        {"minority balancing geometry", 60.0, c04_balancing},
        {"metric floors and chance levels", 60.0, c05_metric_floors},
        {"injected signal recovery", 300.0, c06_signal_recovery},
        {"fold hygiene from logs", 0.0, c07_fold_hygiene},
        {"reproducible bundles", 600.0, c08_reproducible_bundles},
        {"grouping threshold sweep", 600.0, c09_threshold_sweep},
        {"feature slice arithmetic", 0.0, c10_slice_counts},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.budget_seconds > 0 && elapsed > c.budget_seconds) {
            ok = false;
            detail = fmt("finished but took %.1fs, budget %.0fs", elapsed, c.budget_seconds);
        }
        std::printf("C%02zu %s %-32s (%6.2fs) %s\n", i + 1, ok ? "PASS" : "FAIL", c.name,
                    elapsed, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures;
}
