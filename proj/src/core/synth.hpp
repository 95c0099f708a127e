#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nightsense {

// Declarative recipe for a synthetic cohort with known ground truth. Effects
// tie a task's label to a sensor group's signal level so downstream stages
// have something real to recover; injections fabricate reports that must hit
// a specific exclusion rule.
struct EffectSpec {
    std::string task;  // labels-module task name
    std::string group; // sensor group code
    double d = 0;      // >= 0; 0 disables the effect
};

struct CohortSpec {
    std::uint64_t seed = 0;
    int participants = 20;
    double p_woman = 0.5;
    int nights_per_participant = 4;
    int reports_per_night_lo = 1;
    int reports_per_night_hi = 2;
    long reports_exact = -1; // >= 0 pins the total count of normal reports
    std::map<std::string, double> social_mix = {{"alone", 0.3},
                                                {"partner", 0.15},
                                                {"family", 0.15},
                                                {"friends_small", 0.2},
                                                {"friends_large", 0.2}};
    std::map<std::string, double> social_mix_man;   // optional per-sex override
    std::map<std::string, double> social_mix_woman;
    double p_friend_same_sex = 0.6;
    std::vector<EffectSpec> effects;
    double missing_rate = 0.0;                   // per-record drop probability
    std::map<std::string, double> missing_rates; // per-modality override
    std::size_t inject_unavailable = 0;
    std::size_t inject_edge = 0;
    std::size_t inject_out_of_region = 0;
    double min_lat = 46.0, max_lat = 47.5, min_lon = 5.8, max_lon = 10.5;
};

CohortSpec parse_cohort_spec(const std::string& json_text);
std::string cohort_spec_json(const CohortSpec& spec);

// Writes raw files in the ingest schema plus truth.csv (per-report expected
// exclusion and task labels) and synth_spec.json. Byte-identical per spec.
void generate_cohort(const CohortSpec& spec, const std::string& out_dir);

} // namespace nightsense
