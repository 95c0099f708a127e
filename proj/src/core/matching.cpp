#include "matching.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catalog.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "timeutil.hpp"

namespace nightsense {

const std::vector<std::string>& event_feature_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c;
        c.reserve(3 * base_catalog().size());
        for (const auto& f : base_catalog()) {
            c.push_back("avg_" + f.id);
            c.push_back("min_" + f.id);
            c.push_back("max_" + f.id);
        }
        return c;
    }();
    return cols;
}

bool match_window(int slot, int window_slots, int* lo, int* hi) {
    *lo = slot - (window_slots - 1) / 2;
    *hi = *lo + window_slots - 1;
    return *lo >= 0 && *hi < kSlotsPerNight;
}

namespace {

using NightIndex = std::map<std::pair<std::string, std::int64_t>, std::vector<const SlotFeatures*>>;

NightIndex index_slots(const std::vector<SlotFeatures>& slots) {
    NightIndex idx;
    for (const auto& s : slots) {
        auto& night = idx[{s.participant_id, s.night_days}];
        if (night.empty()) night.assign(kSlotsPerNight, nullptr);
        if (s.slot < 0 || s.slot >= kSlotsPerNight) {
            throw input_error("slot index " + std::to_string(s.slot) + " out of range");
        }
        night[static_cast<std::size_t>(s.slot)] = &s;
    }
    return idx;
}

// Modality -> base catalog positions, computed once.
const std::vector<std::vector<std::size_t>>& modality_indices() {
    static const std::vector<std::vector<std::size_t>> m = [] {
        std::vector<std::vector<std::size_t>> v;
        for (SensorGroup g : {SensorGroup::ACC, SensorGroup::APP, SensorGroup::BAT, SensorGroup::BLU,
                              SensorGroup::PRO, SensorGroup::LOC, SensorGroup::SCR, SensorGroup::WIF}) {
            v.push_back(group_base_indices(g));
        }
        return v;
    }();
    return m;
}

bool region_violation(const Cohort& cohort, const SelfReport& r, std::int64_t w_start,
                      std::int64_t w_end, const MatchOptions& opts) {
    auto [lo, hi] = participant_range(cohort.loc, r.participant_id);
    for (std::size_t i = lo; i < hi; ++i) {
        const LocRecord& f = cohort.loc[i];
        if (f.ts < w_start || f.ts >= w_end) continue;
        if (f.lat < opts.min_lat || f.lat > opts.max_lat || f.lon < opts.min_lon ||
            f.lon > opts.max_lon) {
            return true;
        }
    }
    return false;
}

} // namespace

EventDataset build_dataset(const Cohort& cohort, const std::vector<SlotFeatures>& slots,
                           const MatchOptions& opts, ExclusionTally* tally) {
    if (opts.window_slots < 1 || opts.window_slots > kSlotsPerNight) {
        throw input_error("window_slots must be in 1..48");
    }
    const NightIndex idx = index_slots(slots);
    const std::size_t n_base = base_catalog().size();

    EventDataset ds;
    ExclusionTally t;
    t.input = cohort.reports.size();

    for (const auto& r : cohort.reports) {
        std::int64_t night;
        if (!night_of_timestamp(r.ts, night)) {
            ++t.edge_time;
            continue;
        }
        const int slot = slot_index(r.ts, night);
        int lo, hi;
        if (!match_window(slot, opts.window_slots, &lo, &hi)) {
            ++t.edge_time;
            continue;
        }

        auto it = idx.find({r.participant_id, night});
        std::vector<const SlotFeatures*> window(static_cast<std::size_t>(opts.window_slots), nullptr);
        if (it != idx.end()) {
            for (int s = lo; s <= hi; ++s) {
                window[static_cast<std::size_t>(s - lo)] = it->second[static_cast<std::size_t>(s)];
            }
        }

        bool all_modalities = true;
        for (const auto& indices : modality_indices()) {
            bool present = false;
            for (const auto* sf : window) {
                if (!sf) continue;
                for (std::size_t b : indices) {
                    if (is_present(sf->values[b])) {
                        present = true;
                        break;
                    }
                }
                if (present) break;
            }
            if (!present) {
                all_modalities = false;
                break;
            }
        }
        if (!all_modalities) {
            ++t.unavailable_sensor_data;
            continue;
        }

        if (opts.use_region) {
            const std::int64_t start = night_start_ms(night);
            const std::int64_t w_start = start + static_cast<std::int64_t>(lo) * kSlotMinutes * kMsPerMinute;
            const std::int64_t w_end = start + (static_cast<std::int64_t>(hi) + 1) * kSlotMinutes * kMsPerMinute;
            if (region_violation(cohort, r, w_start, w_end, opts)) {
                ++t.out_of_region;
                continue;
            }
        }

        EventRow row;
        row.report_id = r.report_id;
        row.participant_id = r.participant_id;
        row.ts = r.ts;
        row.night_days = night;
        row.slot_lo = lo;
        row.slot_hi = hi;
        const Participant* p = cohort.find_participant(r.participant_id);
        if (!p) throw input_error("report '" + r.report_id + "' references unknown participant");
        row.sex = p->sex;
        row.age = p->age;
        row.partner = r.partner;
        row.family = r.family;
        row.male_friends = r.male_friends;
        row.female_friends = r.female_friends;
        row.others = r.others;
        row.features.assign(3 * n_base, kMissing);
        for (std::size_t b = 0; b < n_base; ++b) {
            double sum = 0, mn = 0, mx = 0;
            std::size_t count = 0;
            for (const auto* sf : window) {
                if (!sf) continue;
                const double v = sf->values[b];
                if (is_missing(v)) continue;
                if (count == 0) {
                    mn = mx = v;
                } else {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                sum += v;
                ++count;
            }
            if (count > 0) {
                row.features[3 * b + 0] = sum / static_cast<double>(count);
                row.features[3 * b + 1] = mn;
                row.features[3 * b + 2] = mx;
            }
        }
        ds.rows.push_back(std::move(row));
        ++t.retained;
    }

    if (t.retained + t.unavailable_sensor_data + t.edge_time + t.out_of_region != t.input) {
        throw internal_error("exclusion tally does not add up");
    }
    if (tally) *tally = t;
    return ds;
}

namespace {

const std::vector<std::string>& event_meta_columns() {
    static const std::vector<std::string> cols = {
        "report_id", "participant_id", "report_ts", "night_date", "slot_lo", "slot_hi",
        "sex",       "age",            "partner",   "family",     "male_friends",
        "female_friends", "others"};
    return cols;
}

} // namespace

CsvTable events_to_table(const EventDataset& ds) {
    CsvTable t;
    t.header = event_meta_columns();
    for (const auto& c : event_feature_columns()) t.header.push_back(c);
    for (const auto& r : ds.rows) {
        std::vector<std::string> row = {r.report_id,
                                        r.participant_id,
                                        format_int(r.ts),
                                        format_date(r.night_days),
                                        format_int(r.slot_lo),
                                        format_int(r.slot_hi),
                                        r.sex,
                                        format_int(r.age),
                                        format_int(r.partner),
                                        format_int(r.family),
                                        format_int(r.male_friends),
                                        format_int(r.female_friends),
                                        format_int(r.others)};
        for (double v : r.features) row.push_back(format_double(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

EventDataset events_from_table(const CsvTable& t, const std::string& origin) {
    const auto& meta = event_meta_columns();
    const auto& feats = event_feature_columns();
    if (t.header.size() != meta.size() + feats.size()) {
        throw input_error(origin + ": expected " + std::to_string(meta.size() + feats.size()) +
                          " columns, found " + std::to_string(t.header.size()));
    }
    for (std::size_t i = 0; i < meta.size(); ++i) {
        if (t.header[i] != meta[i]) throw input_error(origin + ": column '" + t.header[i] + "' unexpected");
    }
    for (std::size_t i = 0; i < feats.size(); ++i) {
        if (t.header[meta.size() + i] != feats[i]) {
            throw input_error(origin + ": feature column '" + t.header[meta.size() + i] + "' unexpected");
        }
    }
    EventDataset ds;
    for (const auto& row : t.rows) {
        EventRow r;
        r.report_id = row[0];
        r.participant_id = row[1];
        r.ts = parse_int_cell(row[2], origin);
        if (!parse_date(row[3], r.night_days)) {
            throw input_error(origin + ": bad night date '" + row[3] + "'");
        }
        r.slot_lo = static_cast<int>(parse_int_cell(row[4], origin));
        r.slot_hi = static_cast<int>(parse_int_cell(row[5], origin));
        r.sex = row[6];
        r.age = static_cast<int>(parse_int_cell(row[7], origin));
        r.partner = static_cast<int>(parse_int_cell(row[8], origin));
        r.family = static_cast<int>(parse_int_cell(row[9], origin));
        r.male_friends = static_cast<int>(parse_int_cell(row[10], origin));
        r.female_friends = static_cast<int>(parse_int_cell(row[11], origin));
        r.others = static_cast<int>(parse_int_cell(row[12], origin));
        r.features.resize(feats.size());
        for (std::size_t i = 0; i < feats.size(); ++i) {
            r.features[i] = parse_double_cell(row[13 + i], origin);
        }
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

void write_events_csv(const std::string& path, const EventDataset& ds) {
    write_csv(path, events_to_table(ds));
}

EventDataset read_events_csv(const std::string& path) {
    return events_from_table(read_csv(path), path);
}

std::string tally_json(const ExclusionTally& t) {
    nlohmann::json j;
    j["input"] = t.input;
    j["retained"] = t.retained;
    j["excluded"]["unavailable_sensor_data"] = t.unavailable_sensor_data;
    j["excluded"]["edge_time"] = t.edge_time;
    j["excluded"]["out_of_region"] = t.out_of_region;
    return j.dump(2) + "\n";
}

} // namespace nightsense
