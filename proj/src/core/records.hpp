#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nightsense {

struct Participant {
    std::string id;
    std::string sex; // "man" or "woman"
    int age = 0;
};

// One in-situ questionnaire answer about who the respondent is with.
struct SelfReport {
    std::string report_id;
    std::string participant_id;
    std::int64_t ts = 0;
    int partner = 0;
    int family = 0;
    int male_friends = 0;
    int female_friends = 0;
    int others = 0;
};

struct AccRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    double x = 0, y = 0, z = 0;
};

struct AppEntry {
    std::string pkg;
    std::string category;
};

// One snapshot of the applications running at ts.
struct AppRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    std::vector<AppEntry> apps;
};

struct LocRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    double lat = 0, lon = 0;
    double speed = 0, accuracy = 0;
    std::string source; // gps | network | unknown
    double signal = 0;
};

struct ScrRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    bool on = false;
};

struct BatRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    double level = 0;
    std::string status; // charging | discharging | full | not_charging | unknown
    bool plugged = false;
};

struct BluDevice {
    std::string id;
    double rssi = 0;
};

// One scan; an empty device list is a valid observation.
struct BluRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    std::vector<BluDevice> devices;
};

struct WifAp {
    std::string id;
    double level = 0;
    double freq = 0;
};

struct WifRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    std::vector<WifAp> aps;
};

struct ProRecord {
    std::string participant_id;
    std::int64_t ts = 0;
    double distance = 0;
};

// Canonical payload text, used as the final sort key so that ingesting the
// same rows in any order yields the same normalized bundle.
std::string payload_key(const AccRecord& r);
std::string payload_key(const AppRecord& r);
std::string payload_key(const LocRecord& r);
std::string payload_key(const ScrRecord& r);
std::string payload_key(const BatRecord& r);
std::string payload_key(const BluRecord& r);
std::string payload_key(const WifRecord& r);
std::string payload_key(const ProRecord& r);

template <typename T>
void sort_records(std::vector<T>& v) {
    std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
        if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
        if (a.ts != b.ts) return a.ts < b.ts;
        return payload_key(a) < payload_key(b);
    });
}

// Half-open index range of one participant's records in a sorted vector.
template <typename T>
std::pair<std::size_t, std::size_t> participant_range(const std::vector<T>& v, const std::string& pid) {
    auto lo = std::lower_bound(v.begin(), v.end(), pid,
                               [](const T& r, const std::string& p) { return r.participant_id < p; });
    auto hi = std::upper_bound(v.begin(), v.end(), pid,
                               [](const std::string& p, const T& r) { return p < r.participant_id; });
    return {static_cast<std::size_t>(lo - v.begin()), static_cast<std::size_t>(hi - v.begin())};
}

struct Cohort {
    std::vector<Participant> participants;
    std::vector<SelfReport> reports;
    std::vector<AccRecord> acc;
    std::vector<AppRecord> app;
    std::vector<LocRecord> loc;
    std::vector<ScrRecord> scr;
    std::vector<BatRecord> bat;
    std::vector<BluRecord> blu;
    std::vector<WifRecord> wif;
    std::vector<ProRecord> pro;

    const Participant* find_participant(const std::string& id) const;
    void sort_all();
};

} // namespace nightsense
