#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csvio.hpp"
#include "records.hpp"
#include "slots.hpp"

namespace nightsense {

// One matched drinking event: report context plus avg/min/max of every base
// feature over the matched window (kMissing where absent).
struct EventRow {
    std::string report_id;
    std::string participant_id;
    std::int64_t ts = 0;
    std::int64_t night_days = 0;
    int slot_lo = 0, slot_hi = 0;
    std::string sex;
    int age = 0;
    int partner = 0, family = 0, male_friends = 0, female_friends = 0, others = 0;
    std::vector<double> features; // 3 x base catalog, avg/min/max per feature
};

struct EventDataset {
    std::vector<EventRow> rows;
};

struct ExclusionTally {
    std::size_t input = 0;
    std::size_t retained = 0;
    std::size_t unavailable_sensor_data = 0;
    std::size_t edge_time = 0;
    std::size_t out_of_region = 0;
};

struct MatchOptions {
    int window_slots = 6;
    bool use_region = false; // geo-fence over window LOC fixes
    double min_lat = 0, max_lat = 0, min_lon = 0, max_lon = 0;
};

// Column names of EventRow::features: avg_/min_/max_ per base feature id,
// catalog order.
const std::vector<std::string>& event_feature_columns();

// Window [s-2, s+3] around the report's slot for the default 6-slot window;
// returns false when the window leaves 0..47 (edge exclusion).
bool match_window(int slot, int window_slots, int* lo, int* hi);

// Matches every report against the aggregated slots, applying the exclusion
// rules: edge_time (report outside a night span or window clipped), then
// unavailable_sensor_data (some modality absent across the whole window),
// then out_of_region (any window LOC fix beyond the configured box).
EventDataset build_dataset(const Cohort& cohort, const std::vector<SlotFeatures>& slots,
                           const MatchOptions& opts, ExclusionTally* tally);

void write_events_csv(const std::string& path, const EventDataset& ds);
EventDataset read_events_csv(const std::string& path);
std::string tally_json(const ExclusionTally& t);

// CSV-shaped conversions shared with the labeled-dataset format.
CsvTable events_to_table(const EventDataset& ds);
EventDataset events_from_table(const CsvTable& t, const std::string& origin);

} // namespace nightsense
