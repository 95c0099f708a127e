#include "records.hpp"

#include "csvio.hpp"

namespace nightsense {

std::string payload_key(const AccRecord& r) {
    return format_double(r.x) + "," + format_double(r.y) + "," + format_double(r.z);
}

std::string payload_key(const AppRecord& r) {
    std::string out;
    for (const auto& a : r.apps) {
        if (!out.empty()) out.push_back('|');
        out += a.pkg + ":" + a.category;
    }
    return out;
}

std::string payload_key(const LocRecord& r) {
    return format_double(r.lat) + "," + format_double(r.lon) + "," + format_double(r.speed) + "," +
           format_double(r.accuracy) + "," + r.source + "," + format_double(r.signal);
}

std::string payload_key(const ScrRecord& r) {
    return r.on ? "on" : "off";
}

std::string payload_key(const BatRecord& r) {
    return format_double(r.level) + "," + r.status + "," + (r.plugged ? "1" : "0");
}

std::string payload_key(const BluRecord& r) {
    std::string out;
    for (const auto& d : r.devices) {
        if (!out.empty()) out.push_back('|');
        out += d.id + ":" + format_double(d.rssi);
    }
    return out;
}

std::string payload_key(const WifRecord& r) {
    std::string out;
    for (const auto& a : r.aps) {
        if (!out.empty()) out.push_back('|');
        out += a.id + ":" + format_double(a.level) + ":" + format_double(a.freq);
    }
    return out;
}

std::string payload_key(const ProRecord& r) {
    return format_double(r.distance);
}

const Participant* Cohort::find_participant(const std::string& id) const {
    auto it = std::lower_bound(participants.begin(), participants.end(), id,
                               [](const Participant& p, const std::string& s) { return p.id < s; });
    if (it != participants.end() && it->id == id) return &*it;
    return nullptr;
}

void Cohort::sort_all() {
    std::sort(participants.begin(), participants.end(),
              [](const Participant& a, const Participant& b) { return a.id < b.id; });
    std::sort(reports.begin(), reports.end(), [](const SelfReport& a, const SelfReport& b) {
        if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
        if (a.ts != b.ts) return a.ts < b.ts;
        return a.report_id < b.report_id;
    });
    sort_records(acc);
    sort_records(app);
    sort_records(loc);
    sort_records(scr);
    sort_records(bat);
    sort_records(blu);
    sort_records(wif);
    sort_records(pro);
}

} // namespace nightsense
