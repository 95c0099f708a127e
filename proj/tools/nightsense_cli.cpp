#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nightsense.h>

namespace {

int finish(ns_status status) {
    if (status != NS_OK) std::fprintf(stderr, "error: %s\n", ns_last_error());
    return static_cast<int>(status);
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    return out.good();
}

// Applies command-line overrides to a JSON file by writing a patched sibling;
// returns the path to pass on, or an empty string on failure.
std::string patch_json(const std::string& path, const nlohmann::json& patch,
                       const std::string& sibling_suffix) {
    if (patch.empty()) return path;
    std::string text;
    if (!read_file(path, text)) {
        std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
        return "";
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s: %s\n", path.c_str(), e.what());
        return "";
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) j[it.key()] = it.value();
    const std::string patched = path + sibling_suffix;
    if (!write_file(patched, j.dump(2) + "\n")) {
        std::fprintf(stderr, "error: cannot write %s\n", patched.c_str());
        return "";
    }
    return patched;
}

struct EvalFlags {
    std::string model = "forest";
    std::string group = "ALL";
    int k = 20;
    int iterations = 10;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    int n_trees = 100;
    int smote_k = 5;

    void attach(CLI::App* cmd, bool with_model = true) {
        if (with_model)
            cmd->add_option("--model", model, "Model: forest, nbayes, or baseline");
        cmd->add_option("--group", group, "Feature group slice (ALL, ConSen, IntSen, ACC, ...)");
        cmd->add_option("--k", k, "Participants held out per iteration");
        cmd->add_option("--iterations", iterations, "Number of seeded iterations");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
        cmd->add_option("--trees", n_trees, "Forest size");
        cmd->add_option("--smote-k", smote_k, "SMOTE neighbor count");
    }

    ns_eval_options to_options() const {
        ns_eval_options o{};
        o.model = model.c_str();
        o.group = group.c_str();
        o.k = k;
        o.iterations = iterations;
        o.seed = seed;
        o.threads = threads;
        o.n_trees = n_trees;
        o.smote_k = smote_k;
        return o;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nightsense: weekend-night smartphone sensing pipeline"};
    app.require_subcommand(1);
    std::uint64_t global_seed = 0;
    bool global_seed_set = false;
    std::string global_config;
    app.add_option("--seed", global_seed, "Master seed (forwarded to the subcommand)")
        ->each([&](const std::string&) { global_seed_set = true; });
    app.add_option("--config", global_config, "Experiment config JSON (run subcommand)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort with ground truth");
    std::string synth_spec, synth_out;
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    synth->add_option("--spec", synth_spec, "Cohort spec JSON file")->required();
    synth->add_option("--out", synth_out, "Output data directory")->required();
    synth->add_option("--seed", synth_seed, "Override the seed in the --spec file")
        ->each([&](const std::string&) { synth_seed_set = true; });

    auto* ingest = app.add_subcommand("ingest", "Parse raw data and write a normalized bundle");
    std::string ingest_data, ingest_out;
    ingest->add_option("--data", ingest_data, "Raw data directory")->required();
    ingest->add_option("--out", ingest_out, "Bundle output directory")->required();

    auto* extract = app.add_subcommand("extract", "Aggregate raw records into per-slot features");
    std::string extract_data, extract_out;
    unsigned extract_threads = 0;
    extract->add_option("--data", extract_data, "Raw data directory")->required();
    extract->add_option("--out", extract_out, "Slot feature CSV path")->required();
    extract->add_option("--threads", extract_threads, "Worker threads (0 = hardware)");

    auto* match = app.add_subcommand("match", "Match self-reports to slot windows");
    std::string match_data, match_slots, match_out, match_tally;
    int match_window = 6;
    std::vector<double> match_region;
    match->add_option("--data", match_data, "Raw data directory")->required();
    match->add_option("--slots", match_slots, "Slot feature CSV path")->required();
    match->add_option("--out", match_out, "Event dataset CSV path")->required();
    match->add_option("--tally", match_tally, "Exclusion tally JSON path");
    match->add_option("--window", match_window, "Window length in slots");
    match
        ->add_option("--region", match_region,
                     "Geo-fence: min-lat max-lat min-lon max-lon (enables the region rule)")
        ->expected(4);

    auto* label = app.add_subcommand("label", "Derive task labels for an event dataset");
    std::string label_events, label_task, label_out;
    int label_g = 1;
    bool label_no_others = false;
    label->add_option("--events", label_events, "Event dataset CSV")->required();
    label->add_option("--task", label_task, "Task name")->required();
    label->add_option("--out", label_out, "Labeled dataset CSV path")->required();
    label->add_option("-g,--grouping-threshold", label_g, "Small/large group cut (1..10)");
    label->add_flag("--exclude-others", label_no_others,
                    "Drop the others count from people aggregation");

    auto* stats = app.add_subcommand("stats", "Rank event features by a screening metric");
    std::string stats_labeled, stats_out, stats_contrast = "alone-vs-group", stats_metric = "d";
    std::size_t stats_top = 30;
    stats->add_option("--labeled", stats_labeled, "Labeled dataset CSV")->required();
    stats->add_option("--out", stats_out, "Ranked table CSV path")->required();
    stats->add_option("--contrast", stats_contrast, "Class contrast for t/d metrics");
    stats->add_option("--metric", stats_metric, "Ranking metric: t, d, or r");
    stats->add_option("--top", stats_top, "Rows to keep");

    auto* evaluate = app.add_subcommand("evaluate", "Leave-k-participants-out evaluation");
    std::string eval_labeled, eval_out;
    EvalFlags eval_flags;
    evaluate->add_option("--labeled", eval_labeled, "Labeled dataset CSV")->required();
    evaluate->add_option("--out", eval_out, "Result JSON path")->required();
    eval_flags.attach(evaluate);

    auto* importance = app.add_subcommand("importance", "Mean forest feature importances");
    std::string imp_labeled, imp_out;
    std::size_t imp_top = 30;
    EvalFlags imp_flags;
    importance->add_option("--labeled", imp_labeled, "Labeled dataset CSV")->required();
    importance->add_option("--out", imp_out, "Importance CSV path")->required();
    importance->add_option("--top", imp_top, "Rows to keep");
    imp_flags.attach(importance, false);

    auto* sweep = app.add_subcommand("sweep", "Grouping-threshold sweep g = 1..10");
    std::string sweep_events, sweep_task, sweep_out;
    EvalFlags sweep_flags;
    sweep->add_option("--events", sweep_events, "Event dataset CSV")->required();
    sweep->add_option("--task", sweep_task, "Three-class task name")->required();
    sweep->add_option("--out", sweep_out, "Sweep JSON path")->required();
    sweep_flags.attach(sweep);

    auto* describe = app.add_subcommand("describe", "Count table of a labeled dataset");
    std::string desc_labeled, desc_by = "sex", desc_out;
    describe->add_option("--labeled", desc_labeled, "Labeled dataset CSV")->required();
    describe->add_option("--by", desc_by, "Grouping: sex, age, or task");
    describe->add_option("--out", desc_out, "Count table CSV path")->required();

    auto* run = app.add_subcommand("run", "Full pipeline into a reproducible bundle");
    std::string run_config, run_out, run_data;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    unsigned run_threads = 0;
    bool run_threads_set = false;
    run->add_option("--config", run_config, "Experiment config JSON file");
    run->add_option("--out", run_out, "Bundle output directory")->required();
    run->add_option("--data", run_data, "Override the config data_dir");
    run->add_option("--seed", run_seed, "Override the config seed")
        ->each([&](const std::string&) { run_seed_set = true; });
    run->add_option("--threads", run_threads, "Override the config threads")
        ->each([&](const std::string&) { run_threads_set = true; });

    auto* verify = app.add_subcommand("verify", "Check a bundle against its manifest");
    std::string verify_dir;
    verify->add_option("--bundle", verify_dir, "Bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (synth->parsed()) {
        nlohmann::json patch;
        if (synth_seed_set) patch["seed"] = synth_seed;
        else if (global_seed_set) patch["seed"] = global_seed;
        const std::string spec = patch_json(synth_spec, patch, ".patched");
        if (spec.empty()) return 1;
        return finish(ns_synth(spec.c_str(), synth_out.c_str()));
    }
    if (ingest->parsed()) {
        ns_cohort* cohort = nullptr;
        ns_status s = ns_cohort_open(ingest_data.c_str(), &cohort);
        if (s != NS_OK) return finish(s);
        size_t participants = 0, reports = 0;
        s = ns_cohort_counts(cohort, &participants, &reports);
        if (s == NS_OK) s = ns_cohort_write_bundle(cohort, ingest_out.c_str());
        ns_cohort_close(cohort);
        if (s == NS_OK)
            std::printf("ingested %zu participants, %zu reports -> %s\n", participants, reports,
                        ingest_out.c_str());
        return finish(s);
    }
    if (extract->parsed())
        return finish(ns_extract(extract_data.c_str(), extract_out.c_str(), extract_threads));
    if (match->parsed()) {
        ns_match_options mo{};
        mo.window_slots = match_window;
        if (!match_region.empty()) {
            mo.use_region = 1;
            mo.min_lat = match_region[0];
            mo.max_lat = match_region[1];
            mo.min_lon = match_region[2];
            mo.max_lon = match_region[3];
        }
        return finish(ns_match(match_data.c_str(), match_slots.c_str(), &mo, match_out.c_str(),
                               match_tally.empty() ? nullptr : match_tally.c_str()));
    }
    if (label->parsed())
        return finish(ns_label(label_events.c_str(), label_task.c_str(), label_g,
                               label_no_others ? 0 : 1, label_out.c_str()));
    if (stats->parsed())
        return finish(ns_stats(stats_labeled.c_str(), stats_contrast.c_str(),
                               stats_metric.c_str(), stats_top, stats_out.c_str()));
    if (evaluate->parsed()) {
        if (global_seed_set && eval_flags.seed == 0) eval_flags.seed = global_seed;
        const ns_eval_options o = eval_flags.to_options();
        return finish(ns_evaluate(eval_labeled.c_str(), &o, eval_out.c_str()));
    }
    if (importance->parsed()) {
        if (global_seed_set && imp_flags.seed == 0) imp_flags.seed = global_seed;
        const ns_eval_options o = imp_flags.to_options();
        return finish(ns_importance(imp_labeled.c_str(), &o, imp_top, imp_out.c_str()));
    }
    if (sweep->parsed()) {
        if (global_seed_set && sweep_flags.seed == 0) sweep_flags.seed = global_seed;
        const ns_eval_options o = sweep_flags.to_options();
        return finish(
            ns_sweep(sweep_events.c_str(), sweep_task.c_str(), &o, sweep_out.c_str()));
    }
    if (describe->parsed())
        return finish(ns_describe(desc_labeled.c_str(), desc_by.c_str(), desc_out.c_str()));
    if (run->parsed()) {
        std::string config = run_config.empty() ? global_config : run_config;
        if (config.empty()) {
            std::fprintf(stderr, "error: run needs --config (or the global --config)\n");
            return 1;
        }
        nlohmann::json patch;
        if (run_seed_set) patch["seed"] = run_seed;
        else if (global_seed_set) patch["seed"] = global_seed;
        if (run_threads_set) patch["threads"] = run_threads;
        if (!run_data.empty()) patch["data_dir"] = run_data;
        config = patch_json(config, patch, ".patched");
        if (config.empty()) return 1;
        return finish(ns_run(config.c_str(), run_out.c_str()));
    }
    if (verify->parsed()) {
        const ns_status s = ns_verify(verify_dir.c_str());
        if (s == NS_OK) std::printf("bundle intact\n");
        return finish(s);
    }
    return 0;
}
