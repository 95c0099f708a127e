#include "slots.hpp"

#include <cmath>
#include <set>

#include "catalog.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "parallel.hpp"
#include "summary.hpp"
#include "timeutil.hpp"

namespace nightsense {

namespace {

constexpr double kRadToDeg = 57.29577951308232087680;

// Catalog offsets resolved once; all emit_* helpers below write into a
// 138-wide value row at these positions.
struct Layout {
    std::size_t locSpeed, locAccuracy, locSignalGps, locSignalNetwork, locSignalUnknown;
    std::size_t accX, accY, accZ, accAngleX, accAngleY, accAngleZ;
    std::size_t accMsma, accDm, accM, accMnew;
    std::size_t bluIdCount, bluRecordCount, bluScanCount, bluEmptyScanCount, bluStrength;
    std::size_t wifRecordCount, wifIdCount, wifLevel, wifFrequency;
    std::size_t appRecordCount, appCount, appBins;
    std::size_t proRecordCount, proDistance;
    std::size_t batStatus, batLevel, batRecordCount, batPluggedCount;
    std::size_t scrOnPct;
};

const Layout& layout() {
    static const Layout l = [] {
        Layout x;
        x.locSpeed = catalog_index("locSpeedMin");
        x.locAccuracy = catalog_index("locAccuracyMin");
        x.locSignalGps = catalog_index("locSignalGps");
        x.locSignalNetwork = catalog_index("locSignalNetwork");
        x.locSignalUnknown = catalog_index("locSignalUnknown");
        x.accX = catalog_index("accXMin");
        x.accY = catalog_index("accYMin");
        x.accZ = catalog_index("accZMin");
        x.accAngleX = catalog_index("accAngleXMin");
        x.accAngleY = catalog_index("accAngleYMin");
        x.accAngleZ = catalog_index("accAngleZMin");
        x.accMsma = catalog_index("accMsmaMin");
        x.accDm = catalog_index("accDmMin");
        x.accM = catalog_index("accMMin");
        x.accMnew = catalog_index("accMnewMin");
        x.bluIdCount = catalog_index("bluIdCount");
        x.bluRecordCount = catalog_index("bluRecordCount");
        x.bluScanCount = catalog_index("bluScanCount");
        x.bluEmptyScanCount = catalog_index("bluEmptyScanCount");
        x.bluStrength = catalog_index("bluStrengthMin");
        x.wifRecordCount = catalog_index("wifRecordCount");
        x.wifIdCount = catalog_index("wifIdCount");
        x.wifLevel = catalog_index("wifLevelMin");
        x.wifFrequency = catalog_index("wifFrequencyMin");
        x.appRecordCount = catalog_index("appRecordCount");
        x.appCount = catalog_index("appCount");
        x.appBins = catalog_index("appCat_" + app_category_bins().front());
        x.proRecordCount = catalog_index("proRecordCount");
        x.proDistance = catalog_index("proDistanceMin");
        x.batStatus = catalog_index("batStatusCharging");
        x.batLevel = catalog_index("batLevelMin");
        x.batRecordCount = catalog_index("batRecordCount");
        x.batPluggedCount = catalog_index("batPluggedCount");
        x.scrOnPct = catalog_index("scrOnPct");
        return x;
    }();
    return l;
}

// Groups one participant's in-span records of a modality by slot index.
template <typename T>
std::vector<std::vector<const T*>> bucket_by_slot(const std::vector<T>& records, const std::string& pid,
                                                  std::int64_t start, std::int64_t end) {
    std::vector<std::vector<const T*>> slots(kSlotsPerNight);
    auto [lo, hi] = participant_range(records, pid);
    for (std::size_t i = lo; i < hi; ++i) {
        const T& r = records[i];
        if (r.ts < start || r.ts >= end) continue;
        slots[static_cast<std::size_t>((r.ts - start) / (kSlotMinutes * kMsPerMinute))].push_back(&r);
    }
    return slots;
}

void fill_acc(std::vector<double>& row, const std::vector<const AccRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    const std::size_t n = recs.size();
    double mx = 0, my = 0, mz = 0;
    for (const auto* r : recs) {
        mx += r->x;
        my += r->y;
        mz += r->z;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    mz /= static_cast<double>(n);

    std::vector<double> xs(n), ys(n), zs(n), m(n), mnew(n), msma(n);
    std::vector<double> ax, ay, az, dm;
    ax.reserve(n);
    ay.reserve(n);
    az.reserve(n);
    if (n > 1) dm.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const AccRecord& r = *recs[i];
        xs[i] = r.x;
        ys[i] = r.y;
        zs[i] = r.z;
        const double dx = r.x - mx, dy = r.y - my, dz = r.z - mz;
        m[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
        msma[i] = std::fabs(dx) + std::fabs(dy) + std::fabs(dz);
        mnew[i] = std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z);
        if (mnew[i] > 0) {
            ax.push_back(kRadToDeg * std::acos(std::clamp(r.x / mnew[i], -1.0, 1.0)));
            ay.push_back(kRadToDeg * std::acos(std::clamp(r.y / mnew[i], -1.0, 1.0)));
            az.push_back(kRadToDeg * std::acos(std::clamp(r.z / mnew[i], -1.0, 1.0)));
        }
        if (i > 0) {
            const AccRecord& p = *recs[i - 1];
            const double ex = r.x - p.x, ey = r.y - p.y, ez = r.z - p.z;
            dm.push_back(std::sqrt(ex * ex + ey * ey + ez * ez));
        }
    }
    emit_five(row, L.accX, five_stats(xs));
    emit_five(row, L.accY, five_stats(ys));
    emit_five(row, L.accZ, five_stats(zs));
    emit_five(row, L.accAngleX, five_stats(ax));
    emit_five(row, L.accAngleY, five_stats(ay));
    emit_five(row, L.accAngleZ, five_stats(az));
    emit_five(row, L.accMsma, five_stats(msma));
    emit_five(row, L.accDm, five_stats(dm));
    emit_five(row, L.accM, five_stats(m));
    emit_five(row, L.accMnew, five_stats(mnew));
}

void fill_loc(std::vector<double>& row, const std::vector<const LocRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    std::vector<double> speeds, accs;
    double gps = 0, network = 0, unknown = 0;
    for (const auto* r : recs) {
        if (is_present(r->speed)) speeds.push_back(r->speed);
        if (is_present(r->accuracy)) accs.push_back(r->accuracy);
        if (r->source == "gps") {
            ++gps;
        } else if (r->source == "network") {
            ++network;
        } else {
            ++unknown;
        }
    }
    emit_five(row, L.locSpeed, five_stats(speeds));
    emit_five(row, L.locAccuracy, five_stats(accs));
    row[L.locSignalGps] = gps;
    row[L.locSignalNetwork] = network;
    row[L.locSignalUnknown] = unknown;
}

void fill_blu(std::vector<double>& row, const std::vector<const BluRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    std::set<std::string> ids;
    std::vector<double> strengths;
    double empty_scans = 0;
    for (const auto* r : recs) {
        if (r->devices.empty()) ++empty_scans;
        for (const auto& d : r->devices) {
            ids.insert(d.id);
            strengths.push_back(d.rssi);
        }
    }
    row[L.bluIdCount] = static_cast<double>(ids.size());
    row[L.bluRecordCount] = static_cast<double>(strengths.size());
    row[L.bluScanCount] = static_cast<double>(recs.size());
    row[L.bluEmptyScanCount] = empty_scans;
    emit_five(row, L.bluStrength, five_stats(strengths));
}

void fill_wif(std::vector<double>& row, const std::vector<const WifRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    std::set<std::string> ids;
    std::vector<double> levels, freqs;
    for (const auto* r : recs) {
        for (const auto& a : r->aps) {
            ids.insert(a.id);
            levels.push_back(a.level);
            freqs.push_back(a.freq);
        }
    }
    row[L.wifRecordCount] = static_cast<double>(levels.size());
    row[L.wifIdCount] = static_cast<double>(ids.size());
    emit_five(row, L.wifLevel, five_stats(levels));
    emit_five(row, L.wifFrequency, five_stats(freqs));
}

void fill_app(std::vector<double>& row, const std::vector<const AppRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    std::set<std::string> pkgs;
    std::vector<double> bins(app_category_bins().size(), 0.0);
    double total = 0;
    for (const auto* r : recs) {
        for (const auto& a : r->apps) {
            pkgs.insert(a.pkg);
            bins[app_bin_index(a.category)] += 1.0;
            total += 1.0;
        }
    }
    row[L.appRecordCount] = static_cast<double>(recs.size());
    row[L.appCount] = static_cast<double>(pkgs.size());
    if (total > 0) {
        for (std::size_t i = 0; i < bins.size(); ++i) row[L.appBins + i] = bins[i] / total;
    }
}

void fill_pro(std::vector<double>& row, const std::vector<const ProRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    std::vector<double> dists;
    for (const auto* r : recs) {
        if (is_present(r->distance)) dists.push_back(r->distance);
    }
    row[L.proRecordCount] = static_cast<double>(recs.size());
    emit_five(row, L.proDistance, five_stats(dists));
}

void fill_bat(std::vector<double>& row, const std::vector<const BatRecord*>& recs) {
    if (recs.empty()) return;
    const Layout& L = layout();
    double status[5] = {0, 0, 0, 0, 0};
    std::vector<double> levels;
    double plugged = 0;
    for (const auto* r : recs) {
        if (r->status == "charging") ++status[0];
        else if (r->status == "discharging") ++status[1];
        else if (r->status == "full") ++status[2];
        else if (r->status == "not_charging") ++status[3];
        else ++status[4];
        if (is_present(r->level)) levels.push_back(r->level);
        if (r->plugged) ++plugged;
    }
    for (int i = 0; i < 5; ++i) row[L.batStatus + static_cast<std::size_t>(i)] = status[i];
    emit_five(row, L.batLevel, five_stats(levels));
    row[L.batRecordCount] = static_cast<double>(recs.size());
    row[L.batPluggedCount] = plugged;
}

// Screen-on percentage per slot from a state-change log. The state entering
// a slot is carried forward from the last event at or before the slot start;
// time before the first known state does not count toward the denominator.
void fill_scr(std::vector<std::vector<double>>& rows, const Cohort& cohort, const std::string& pid,
              std::int64_t start) {
    const Layout& L = layout();
    auto [lo, hi] = participant_range(cohort.scr, pid);
    if (lo == hi) return;
    const std::int64_t slot_ms = kSlotMinutes * kMsPerMinute;
    for (int s = 0; s < kSlotsPerNight; ++s) {
        const std::int64_t t0 = start + s * slot_ms;
        const std::int64_t t1 = t0 + slot_ms;
        // Last event at or before t0.
        std::size_t first_inside = lo;
        bool have_state = false;
        bool state = false;
        for (std::size_t i = lo; i < hi && cohort.scr[i].ts <= t0; ++i) {
            have_state = true;
            state = cohort.scr[i].on;
            first_inside = i + 1;
        }
        std::int64_t cursor = t0;
        std::int64_t known = 0, on_time = 0;
        for (std::size_t i = first_inside; i < hi && cohort.scr[i].ts < t1; ++i) {
            const std::int64_t te = cohort.scr[i].ts;
            if (have_state) {
                known += te - cursor;
                if (state) on_time += te - cursor;
            }
            cursor = te;
            state = cohort.scr[i].on;
            have_state = true;
        }
        if (have_state) {
            known += t1 - cursor;
            if (state) on_time += t1 - cursor;
        }
        if (known > 0) {
            rows[static_cast<std::size_t>(s)][L.scrOnPct] =
                100.0 * static_cast<double>(on_time) / static_cast<double>(known);
        }
    }
}

template <typename T>
void collect_nights(const std::vector<T>& records, const std::string& pid, std::set<std::int64_t>& out) {
    auto [lo, hi] = participant_range(records, pid);
    for (std::size_t i = lo; i < hi; ++i) {
        std::int64_t night;
        if (night_of_timestamp(records[i].ts, night)) out.insert(night);
    }
}

} // namespace

std::vector<std::int64_t> nights_for_participant(const Cohort& cohort, const std::string& pid) {
    std::set<std::int64_t> nights;
    for (const auto& r : cohort.reports) {
        if (r.participant_id != pid) continue;
        std::int64_t night;
        if (night_of_timestamp(r.ts, night)) nights.insert(night);
    }
    collect_nights(cohort.acc, pid, nights);
    collect_nights(cohort.app, pid, nights);
    collect_nights(cohort.loc, pid, nights);
    collect_nights(cohort.scr, pid, nights);
    collect_nights(cohort.bat, pid, nights);
    collect_nights(cohort.blu, pid, nights);
    collect_nights(cohort.wif, pid, nights);
    collect_nights(cohort.pro, pid, nights);
    return {nights.begin(), nights.end()};
}

std::vector<SlotFeatures> aggregate_night(const Cohort& cohort, const std::string& pid,
                                          std::int64_t night_days) {
    const std::int64_t start = night_start_ms(night_days);
    const std::int64_t end = start + kNightHours * kMsPerHour;

    std::vector<std::vector<double>> rows(kSlotsPerNight,
                                          std::vector<double>(base_catalog().size(), kMissing));

    const auto acc = bucket_by_slot(cohort.acc, pid, start, end);
    const auto app = bucket_by_slot(cohort.app, pid, start, end);
    const auto loc = bucket_by_slot(cohort.loc, pid, start, end);
    const auto bat = bucket_by_slot(cohort.bat, pid, start, end);
    const auto blu = bucket_by_slot(cohort.blu, pid, start, end);
    const auto wif = bucket_by_slot(cohort.wif, pid, start, end);
    const auto pro = bucket_by_slot(cohort.pro, pid, start, end);
    for (int s = 0; s < kSlotsPerNight; ++s) {
        auto& row = rows[static_cast<std::size_t>(s)];
        fill_acc(row, acc[static_cast<std::size_t>(s)]);
        fill_app(row, app[static_cast<std::size_t>(s)]);
        fill_loc(row, loc[static_cast<std::size_t>(s)]);
        fill_bat(row, bat[static_cast<std::size_t>(s)]);
        fill_blu(row, blu[static_cast<std::size_t>(s)]);
        fill_wif(row, wif[static_cast<std::size_t>(s)]);
        fill_pro(row, pro[static_cast<std::size_t>(s)]);
    }
    fill_scr(rows, cohort, pid, start);

    std::vector<SlotFeatures> out(kSlotsPerNight);
    for (int s = 0; s < kSlotsPerNight; ++s) {
        auto& sf = out[static_cast<std::size_t>(s)];
        sf.participant_id = pid;
        sf.night_days = night_days;
        sf.slot = s;
        sf.values = std::move(rows[static_cast<std::size_t>(s)]);
    }
    return out;
}

std::vector<SlotFeatures> aggregate_cohort(const Cohort& cohort, unsigned threads) {
    std::vector<std::pair<std::string, std::int64_t>> jobs;
    for (const auto& p : cohort.participants) {
        for (std::int64_t night : nights_for_participant(cohort, p.id)) {
            jobs.emplace_back(p.id, night);
        }
    }
    std::vector<std::vector<SlotFeatures>> results(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        results[i] = aggregate_night(cohort, jobs[i].first, jobs[i].second);
    });
    std::vector<SlotFeatures> flat;
    flat.reserve(jobs.size() * kSlotsPerNight);
    for (auto& r : results) {
        for (auto& sf : r) flat.push_back(std::move(sf));
    }
    return flat;
}

void write_slots_csv(const std::string& path, const std::vector<SlotFeatures>& slots) {
    CsvTable t;
    t.header = {"participant_id", "night_date", "slot"};
    for (const auto& f : base_catalog()) t.header.push_back(f.id);
    t.rows.reserve(slots.size());
    for (const auto& s : slots) {
        std::vector<std::string> row;
        row.reserve(t.header.size());
        row.push_back(s.participant_id);
        row.push_back(format_date(s.night_days));
        row.push_back(format_int(s.slot));
        for (double v : s.values) row.push_back(format_double(v));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::vector<SlotFeatures> read_slots_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const auto& catalog = base_catalog();
    if (t.header.size() != 3 + catalog.size()) {
        throw input_error(path + ": expected " + std::to_string(3 + catalog.size()) + " columns");
    }
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        if (t.header[3 + i] != catalog[i].id) {
            throw input_error(path + ": column '" + t.header[3 + i] + "' does not match catalog ('" +
                              catalog[i].id + "' expected)");
        }
    }
    std::vector<SlotFeatures> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        SlotFeatures s;
        s.participant_id = row[0];
        if (!parse_date(row[1], s.night_days)) {
            throw input_error(path + ": bad night date '" + row[1] + "'");
        }
        s.slot = static_cast<int>(parse_int_cell(row[2], path));
        if (s.slot < 0 || s.slot >= kSlotsPerNight) {
            throw input_error(path + ": slot index " + row[2] + " out of range");
        }
        s.values.resize(catalog.size());
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            s.values[i] = parse_double_cell(row[3 + i], path);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace nightsense
