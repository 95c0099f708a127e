#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "records.hpp"

namespace nightsense {

// Feature values for one ten-minute slot of a participant-night; values is
// indexed by the base catalog, missing entries hold kMissing.
struct SlotFeatures {
    std::string participant_id;
    std::int64_t night_days = 0; // evening calendar date, days since epoch
    int slot = 0;
    std::vector<double> values;
};

// Distinct nights (evening dates) on which the participant has any sensor
// record or self-report inside a night span, ascending.
std::vector<std::int64_t> nights_for_participant(const Cohort& cohort, const std::string& pid);

// All 48 slots of one participant-night, catalog order, kMissing for absent.
std::vector<SlotFeatures> aggregate_night(const Cohort& cohort, const std::string& pid,
                                          std::int64_t night_days);

// Every (participant, night) pair in the cohort, 48 rows each, participants
// ascending by id then nights ascending. threads = 0 picks hardware width.
std::vector<SlotFeatures> aggregate_cohort(const Cohort& cohort, unsigned threads = 1);

void write_slots_csv(const std::string& path, const std::vector<SlotFeatures>& slots);
std::vector<SlotFeatures> read_slots_csv(const std::string& path);

} // namespace nightsense
