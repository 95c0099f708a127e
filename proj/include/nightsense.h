#ifndef NIGHTSENSE_H
#define NIGHTSENSE_H

/* C interface to the nightsense pipeline: synthetic cohort generation,
 * sensor ingestion, slot aggregation, event matching, labeling, feature
 * screening, model evaluation, and reproducible experiment bundles.
 *
 * Every call returns ns_status; on failure ns_last_error() describes the
 * problem for the calling thread. Handles are opaque and must be released
 * with their close function. All file parameters are paths. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ns_status {
    NS_OK = 0,
    NS_ERR_INPUT = 1,
    NS_ERR_INTERNAL = 2
} ns_status;

const char* ns_version(void);

/* Message of the last failing call on this thread; empty when none. */
const char* ns_last_error(void);

/* ------------------------------------------------------------------ */
/* Cohort handle                                                        */

typedef struct ns_cohort ns_cohort;

/* Parses a raw data directory (participants.csv, reports.csv and the eight
 * optional sensor files). */
ns_status ns_cohort_open(const char* data_dir, ns_cohort** out);
void ns_cohort_close(ns_cohort* cohort);

ns_status ns_cohort_counts(const ns_cohort* cohort, size_t* participants, size_t* reports);

/* Writes the normalized bundle (sorted CSVs plus a checksum manifest). */
ns_status ns_cohort_write_bundle(const ns_cohort* cohort, const char* bundle_dir);

/* ------------------------------------------------------------------ */
/* Pipeline stages (file to file)                                       */

/* Generates a synthetic cohort with ground truth from a JSON spec file. */
ns_status ns_synth(const char* spec_json_path, const char* out_dir);

/* Raw data directory -> per-slot feature rows. threads = 0 picks the
 * hardware width. */
ns_status ns_extract(const char* data_dir, const char* slots_csv, unsigned threads);

typedef struct ns_match_options {
    int window_slots; /* 0 = default 6 */
    int use_region;
    double min_lat, max_lat, min_lon, max_lon;
} ns_match_options;

/* Matches self-reports against slot features; writes the event dataset and,
 * when tally_json is non-NULL, the exclusion tally. options may be NULL. */
ns_status ns_match(const char* data_dir, const char* slots_csv,
                   const ns_match_options* options, const char* events_csv,
                   const char* tally_json);

/* Derives task labels for an event dataset. grouping_threshold applies to
 * three-class tasks (1..10). */
ns_status ns_label(const char* events_csv, const char* task, int grouping_threshold,
                   int people_include_others, const char* labeled_csv);

/* Screens event features by a ranking metric (t, d, or r) over a class
 * contrast; writes the top rows. */
ns_status ns_stats(const char* labeled_csv, const char* contrast, const char* metric,
                   size_t top, const char* ranked_csv);

typedef struct ns_eval_options {
    const char* model; /* forest | nbayes | baseline; NULL = forest */
    const char* group; /* feature group; NULL = ALL */
    int k;             /* participants held out; 0 = default 20 */
    int iterations;    /* 0 = default 10 */
    uint64_t seed;
    unsigned threads;  /* 0 = hardware width */
    int n_trees;       /* 0 = default 100 */
    int smote_k;       /* 0 = default 5 */
} ns_eval_options;

/* Leave-k-participants-out evaluation of a labeled dataset; writes the
 * result JSON (per-iteration folds plus the summary). options may be NULL. */
ns_status ns_evaluate(const char* labeled_csv, const ns_eval_options* options,
                      const char* result_json_path);

/* Forest feature importances averaged over the evaluation iterations. */
ns_status ns_importance(const char* labeled_csv, const ns_eval_options* options, size_t top,
                        const char* importance_csv);

/* Grouping-threshold sweep g = 1..10 for a three-class task. */
ns_status ns_sweep(const char* events_csv, const char* task, const ns_eval_options* options,
                   const char* sweep_json_path);

/* Count table of a labeled dataset grouped by sex, age, or task. */
ns_status ns_describe(const char* labeled_csv, const char* group_by, const char* table_csv);

/* Full pipeline from a JSON experiment config into a bundle directory with
 * a checksum manifest; byte-identical per config and seed. */
ns_status ns_run(const char* config_json_path, const char* out_dir);

/* Rechecks a bundle against its manifest. NS_OK = intact; NS_ERR_INPUT with
 * the problem list in ns_last_error() when tampered. */
ns_status ns_verify(const char* bundle_dir);

#ifdef __cplusplus
}
#endif

#endif /* NIGHTSENSE_H */
