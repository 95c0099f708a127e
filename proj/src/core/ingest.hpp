#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "records.hpp"

namespace nightsense {

struct IngestReport {
    std::map<std::string, std::size_t> rows_read; // per input file
    std::size_t malformed = 0;
    std::size_t out_of_night = 0; // sensor records outside every night span
    std::vector<std::string> warnings; // first few malformed-line messages
};

// Reads raw CSVs from a directory: participants.csv and reports.csv are
// required, modality files (acc, app, loc, scr, bat, blu, wif, pro).csv are
// optional. Malformed lines are counted and skipped; sensor records outside
// every Friday/Saturday night span are dropped.
Cohort ingest_dir(const std::string& data_dir, IngestReport* report = nullptr);

struct ValidationReport {
    std::vector<std::string> orphan_records;      // modality + participant + ts
    std::vector<std::string> out_of_span_reports; // report ids
    std::vector<std::string> duplicate_reports;   // report ids sharing (pid, ts)
    bool clean() const {
        return orphan_records.empty() && out_of_span_reports.empty() && duplicate_reports.empty();
    }
};

ValidationReport validate_cohort(const Cohort& cohort);

// Writes the normalized record files plus manifest.json (row counts, the
// base-feature count, and a checksum per file) into dir.
void write_bundle(const std::string& dir, const Cohort& cohort);

// Loads a normalized bundle; with verify_checksums, re-hashes every file
// against the manifest and fails on any mismatch.
Cohort read_bundle(const std::string& dir, bool verify_checksums = true);

// Re-hashes bundle files against manifest.json; returns mismatch messages.
std::vector<std::string> verify_bundle(const std::string& dir);

} // namespace nightsense
