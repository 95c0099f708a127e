#include "ingest.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "checksum.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "timeutil.hpp"

namespace fs = std::filesystem;

namespace nightsense {

namespace {

constexpr std::size_t kMaxWarnings = 20;

void note_malformed(IngestReport* rep, const std::string& msg) {
    if (!rep) return;
    ++rep->malformed;
    if (rep->warnings.size() < kMaxWarnings) rep->warnings.push_back(msg);
}

struct RowCtx {
    std::string origin;
    const std::vector<std::string>* row = nullptr;
};

// Throws input_error on any malformed cell; callers convert that into a
// skipped line.
double need_double(const RowCtx& c, std::size_t i) {
    const double v = parse_double_cell((*c.row)[i], c.origin);
    if (is_missing(v)) throw input_error(c.origin + ": empty numeric cell");
    return v;
}

std::int64_t need_int(const RowCtx& c, std::size_t i) {
    return parse_int_cell((*c.row)[i], c.origin);
}

int need_count(const RowCtx& c, std::size_t i) {
    const std::int64_t v = need_int(c, i);
    if (v < 0 || v > 11) throw input_error(c.origin + ": companion count " + std::to_string(v) + " outside 0..11");
    return static_cast<int>(v);
}

bool need_flag(const RowCtx& c, std::size_t i) {
    const std::string v = trim((*c.row)[i]);
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw input_error(c.origin + ": boolean cell '" + v + "'");
}

bool in_any_night(std::int64_t ts) {
    std::int64_t night;
    return night_of_timestamp(ts, night);
}

// Iterates the data rows of path (when it exists), handing each row to fn.
// A wrong-arity line or fn throwing input_error marks the row malformed and
// continues; only a missing required file is fatal.
template <typename Fn>
void for_rows(const std::string& path, const std::string& label, IngestReport* rep, bool required, Fn fn) {
    if (!fs::exists(path)) {
        if (required) throw input_error("required input file '" + path + "' is missing");
        return;
    }
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<std::string> header;
    std::size_t lineno = 0, rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            header = split(line, ',');
            continue;
        }
        if (line.empty()) continue;
        ++rows;
        const auto cells = split(line, ',');
        RowCtx ctx{label + ":" + std::to_string(lineno), &cells};
        if (cells.size() != header.size()) {
            note_malformed(rep, ctx.origin + ": expected " + std::to_string(header.size()) +
                                    " cells, found " + std::to_string(cells.size()));
            continue;
        }
        try {
            fn(ctx);
        } catch (const input_error& e) {
            note_malformed(rep, e.what());
        }
    }
    if (header.empty()) throw input_error(path + ": empty file, header row required");
    if (rep) rep->rows_read[label] = rows;
}

template <typename T>
bool keep_in_night(const T& rec, IngestReport* rep) {
    if (in_any_night(rec.ts)) return true;
    if (rep) ++rep->out_of_night;
    return false;
}

std::vector<AppEntry> parse_apps(const std::string& cell, const std::string& origin) {
    std::vector<AppEntry> out;
    if (trim(cell).empty()) return out;
    for (const auto& part : split(cell, '|')) {
        const auto kv = split(part, ':');
        if (kv.size() != 2 || kv[0].empty() || kv[1].empty()) {
            throw input_error(origin + ": app entry '" + part + "' not pkg:category");
        }
        out.push_back({kv[0], kv[1]});
    }
    return out;
}

std::vector<BluDevice> parse_devices(const std::string& cell, const std::string& origin) {
    std::vector<BluDevice> out;
    if (trim(cell).empty()) return out;
    for (const auto& part : split(cell, '|')) {
        const auto kv = split(part, ':');
        if (kv.size() != 2 || kv[0].empty()) {
            throw input_error(origin + ": bluetooth entry '" + part + "' not id:rssi");
        }
        out.push_back({kv[0], parse_double_cell(kv[1], origin)});
    }
    return out;
}

std::vector<WifAp> parse_aps(const std::string& cell, const std::string& origin) {
    std::vector<WifAp> out;
    if (trim(cell).empty()) return out;
    for (const auto& part : split(cell, '|')) {
        const auto kv = split(part, ':');
        if (kv.size() != 3 || kv[0].empty()) {
            throw input_error(origin + ": wifi entry '" + part + "' not id:level:frequency");
        }
        out.push_back({kv[0], parse_double_cell(kv[1], origin), parse_double_cell(kv[2], origin)});
    }
    return out;
}

const char* kParticipantsHeader = "participant_id,sex,age";
const char* kReportsHeader =
    "report_id,participant_id,timestamp,alcoholic,partner,family,male_friends,female_friends,others";
const char* kAccHeader = "participant_id,timestamp,x,y,z";
const char* kAppHeader = "participant_id,timestamp,apps";
const char* kLocHeader = "participant_id,timestamp,lat,lon,speed,accuracy,source,signal";
const char* kScrHeader = "participant_id,timestamp,state";
const char* kBatHeader = "participant_id,timestamp,level,status,plugged";
const char* kBluHeader = "participant_id,timestamp,devices";
const char* kWifHeader = "participant_id,timestamp,aps";
const char* kProHeader = "participant_id,timestamp,distance";

} // namespace

Cohort ingest_dir(const std::string& data_dir, IngestReport* report) {
    Cohort cohort;
    std::set<std::string> seen_pids, seen_report_ids;

    for_rows(data_dir + "/participants.csv", "participants.csv", report, true,
             [&](const RowCtx& c) {
                 Participant p;
                 p.id = trim((*c.row)[0]);
                 p.sex = trim((*c.row)[1]);
                 p.age = static_cast<int>(need_int(c, 2));
                 if (p.id.empty()) throw input_error(c.origin + ": empty participant id");
                 if (p.sex != "man" && p.sex != "woman") {
                     throw input_error(c.origin + ": sex '" + p.sex + "' not in {man, woman}");
                 }
                 if (p.age < 0) throw input_error(c.origin + ": negative age");
                 if (!seen_pids.insert(p.id).second) {
                     throw input_error(c.origin + ": duplicate participant id '" + p.id + "'");
                 }
                 cohort.participants.push_back(std::move(p));
             });

    for_rows(data_dir + "/reports.csv", "reports.csv", report, true,
             [&](const RowCtx& c) {
                 SelfReport r;
                 r.report_id = trim((*c.row)[0]);
                 r.participant_id = trim((*c.row)[1]);
                 r.ts = need_int(c, 2);
                 const bool alcoholic = need_flag(c, 3);
                 r.partner = need_count(c, 4);
                 if (r.partner > 1) throw input_error(c.origin + ": partner flag outside {0,1}");
                 r.family = need_count(c, 5);
                 r.male_friends = need_count(c, 6);
                 r.female_friends = need_count(c, 7);
                 r.others = need_count(c, 8);
                 if (r.report_id.empty()) throw input_error(c.origin + ": empty report id");
                 if (!seen_report_ids.insert(r.report_id).second) {
                     throw input_error(c.origin + ": duplicate report id '" + r.report_id + "'");
                 }
                 if (!alcoholic) return;
                 cohort.reports.push_back(std::move(r));
             });

    for_rows(data_dir + "/acc.csv", "acc.csv", report, false, [&](const RowCtx& c) {
        AccRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.x = need_double(c, 2);
        r.y = need_double(c, 3);
        r.z = need_double(c, 4);
        if (keep_in_night(r, report)) cohort.acc.push_back(std::move(r));
    });

    for_rows(data_dir + "/app.csv", "app.csv", report, false, [&](const RowCtx& c) {
        AppRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.apps = parse_apps((*c.row)[2], c.origin);
        if (keep_in_night(r, report)) cohort.app.push_back(std::move(r));
    });

    for_rows(data_dir + "/loc.csv", "loc.csv", report, false, [&](const RowCtx& c) {
        LocRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.lat = need_double(c, 2);
        r.lon = need_double(c, 3);
        r.speed = parse_double_cell((*c.row)[4], c.origin);
        r.accuracy = parse_double_cell((*c.row)[5], c.origin);
        r.source = trim((*c.row)[6]);
        r.signal = parse_double_cell((*c.row)[7], c.origin);
        if (r.source != "gps" && r.source != "network" && r.source != "unknown") {
            throw input_error(c.origin + ": location source '" + r.source + "'");
        }
        if (keep_in_night(r, report)) cohort.loc.push_back(std::move(r));
    });

    for_rows(data_dir + "/scr.csv", "scr.csv", report, false, [&](const RowCtx& c) {
        ScrRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        const std::string state = trim((*c.row)[2]);
        if (state == "on") {
            r.on = true;
        } else if (state == "off") {
            r.on = false;
        } else {
            throw input_error(c.origin + ": screen state '" + state + "'");
        }
        if (keep_in_night(r, report)) cohort.scr.push_back(std::move(r));
    });

    for_rows(data_dir + "/bat.csv", "bat.csv", report, false, [&](const RowCtx& c) {
        BatRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.level = need_double(c, 2);
        r.status = trim((*c.row)[3]);
        r.plugged = need_flag(c, 4);
        if (r.level < 0 || r.level > 100) {
            throw input_error(c.origin + ": battery level outside 0..100");
        }
        if (r.status != "charging" && r.status != "discharging" && r.status != "full" &&
            r.status != "not_charging" && r.status != "unknown") {
            throw input_error(c.origin + ": battery status '" + r.status + "'");
        }
        if (keep_in_night(r, report)) cohort.bat.push_back(std::move(r));
    });

    for_rows(data_dir + "/blu.csv", "blu.csv", report, false, [&](const RowCtx& c) {
        BluRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.devices = parse_devices((*c.row)[2], c.origin);
        if (keep_in_night(r, report)) cohort.blu.push_back(std::move(r));
    });

    for_rows(data_dir + "/wif.csv", "wif.csv", report, false, [&](const RowCtx& c) {
        WifRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.aps = parse_aps((*c.row)[2], c.origin);
        if (keep_in_night(r, report)) cohort.wif.push_back(std::move(r));
    });

    for_rows(data_dir + "/pro.csv", "pro.csv", report, false, [&](const RowCtx& c) {
        ProRecord r;
        r.participant_id = trim((*c.row)[0]);
        r.ts = need_int(c, 1);
        r.distance = need_double(c, 2);
        if (keep_in_night(r, report)) cohort.pro.push_back(std::move(r));
    });

    cohort.sort_all();
    return cohort;
}

namespace {

template <typename T>
void find_orphans(const std::vector<T>& records, const Cohort& cohort, const char* modality,
                  std::vector<std::string>& out) {
    std::string last_missing;
    for (const auto& r : records) {
        if (cohort.find_participant(r.participant_id)) continue;
        if (r.participant_id == last_missing) continue;
        last_missing = r.participant_id;
        out.push_back(std::string(modality) + " records for unknown participant '" + r.participant_id + "'");
    }
}

} // namespace

ValidationReport validate_cohort(const Cohort& cohort) {
    ValidationReport rep;
    find_orphans(cohort.acc, cohort, "ACC", rep.orphan_records);
    find_orphans(cohort.app, cohort, "APP", rep.orphan_records);
    find_orphans(cohort.loc, cohort, "LOC", rep.orphan_records);
    find_orphans(cohort.scr, cohort, "SCR", rep.orphan_records);
    find_orphans(cohort.bat, cohort, "BAT", rep.orphan_records);
    find_orphans(cohort.blu, cohort, "BLU", rep.orphan_records);
    find_orphans(cohort.wif, cohort, "WIF", rep.orphan_records);
    find_orphans(cohort.pro, cohort, "PRO", rep.orphan_records);

    std::set<std::string> flagged_report_owners;
    for (std::size_t i = 0; i < cohort.reports.size(); ++i) {
        const auto& r = cohort.reports[i];
        if (!cohort.find_participant(r.participant_id) &&
            flagged_report_owners.insert(r.participant_id).second) {
            rep.orphan_records.push_back("REPORT participant " + r.participant_id);
        }
        std::int64_t night = 0;
        if (!night_of_timestamp(r.ts, night)) rep.out_of_span_reports.push_back(r.report_id);
        if (i > 0 && cohort.reports[i - 1].participant_id == r.participant_id &&
            cohort.reports[i - 1].ts == r.ts) {
            rep.duplicate_reports.push_back(r.report_id);
        }
    }
    return rep;
}

namespace {

struct BundleFile {
    std::string name;
    std::string content;
};

std::string participants_csv(const Cohort& c) {
    std::ostringstream out;
    out << kParticipantsHeader << '\n';
    for (const auto& p : c.participants) {
        out << p.id << ',' << p.sex << ',' << p.age << '\n';
    }
    return out.str();
}

std::string reports_csv(const Cohort& c) {
    std::ostringstream out;
    out << kReportsHeader << '\n';
    for (const auto& r : c.reports) {
        out << r.report_id << ',' << r.participant_id << ',' << r.ts << ",1," << r.partner << ','
            << r.family << ',' << r.male_friends << ',' << r.female_friends << ',' << r.others << '\n';
    }
    return out.str();
}

template <typename T>
std::string records_csv(const char* header, const std::vector<T>& records) {
    std::ostringstream out;
    out << header << '\n';
    for (const auto& r : records) {
        out << r.participant_id << ',' << r.ts << ',' << payload_key(r) << '\n';
    }
    return out.str();
}

std::vector<BundleFile> bundle_files(const Cohort& c) {
    return {
        {"participants.csv", participants_csv(c)},
        {"reports.csv", reports_csv(c)},
        {"acc.csv", records_csv(kAccHeader, c.acc)},
        {"app.csv", records_csv(kAppHeader, c.app)},
        {"loc.csv", records_csv(kLocHeader, c.loc)},
        {"scr.csv", records_csv(kScrHeader, c.scr)},
        {"bat.csv", records_csv(kBatHeader, c.bat)},
        {"blu.csv", records_csv(kBluHeader, c.blu)},
        {"wif.csv", records_csv(kWifHeader, c.wif)},
        {"pro.csv", records_csv(kProHeader, c.pro)},
    };
}

} // namespace

void write_bundle(const std::string& dir, const Cohort& cohort) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw input_error("cannot create bundle directory '" + dir + "': " + ec.message());

    nlohmann::json manifest;
    manifest["format"] = "nightsense-bundle-v1";
    manifest["base_feature_count"] = 138;
    manifest["participants"] = cohort.participants.size();
    manifest["reports"] = cohort.reports.size();
    nlohmann::json checksums = nlohmann::json::object();
    for (const auto& f : bundle_files(cohort)) {
        write_text_file(dir + "/" + f.name, f.content);
        checksums[f.name] = fnv1a64_hex(f.content);
    }
    manifest["checksums"] = checksums;
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::string> verify_bundle(const std::string& dir) {
    std::vector<std::string> problems;
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
    } catch (const nlohmann::json::exception& e) {
        problems.push_back(std::string("manifest.json unreadable: ") + e.what());
        return problems;
    }
    if (!manifest.contains("checksums") || !manifest["checksums"].is_object()) {
        problems.push_back("manifest.json has no checksums object");
        return problems;
    }
    for (const auto& [name, expected] : manifest["checksums"].items()) {
        const std::string path = dir + "/" + name;
        if (!fs::exists(path)) {
            problems.push_back(name + ": listed in manifest but missing");
            continue;
        }
        const std::string actual = checksum_file(path);
        if (actual != expected.get<std::string>()) {
            problems.push_back(name + ": checksum " + actual + " != manifest " +
                               expected.get<std::string>());
        }
    }
    return problems;
}

Cohort read_bundle(const std::string& dir, bool verify_checksums) {
    if (verify_checksums) {
        const auto problems = verify_bundle(dir);
        if (!problems.empty()) {
            std::string msg = "bundle verification failed:";
            for (const auto& p : problems) msg += "\n  " + p;
            throw input_error(msg);
        }
    }
    IngestReport rep;
    Cohort cohort = ingest_dir(dir, &rep);
    if (rep.malformed > 0) {
        throw input_error("bundle '" + dir + "' contains " + std::to_string(rep.malformed) +
                          " malformed lines");
    }
    return cohort;
}

} // namespace nightsense
