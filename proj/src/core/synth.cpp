#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "catalog.hpp"
#include "common.hpp"
#include "csvio.hpp"
#include "labels.hpp"
#include "matching.hpp"
#include "records.hpp"
#include "rng.hpp"
#include "timeutil.hpp"

namespace nightsense {

namespace {

using nlohmann::json;

constexpr int kGroups = 8;

const std::vector<std::string>& mix_keys() {
    static const std::vector<std::string> k = {"alone", "partner", "family", "friends_small",
                                               "friends_large"};
    return k;
}

std::map<std::string, double> parse_mix(const json& j, const std::string& field) {
    std::map<std::string, double> mix;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& keys = mix_keys();
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            throw input_error(field + ": unknown social mix key '" + it.key() + "'");
        const double v = it.value().get<double>();
        if (v < 0) throw input_error(field + ": negative weight for '" + it.key() + "'");
        mix[it.key()] = v;
    }
    return mix;
}

double mix_weight(const std::map<std::string, double>& mix, const std::string& key) {
    auto it = mix.find(key);
    return it == mix.end() ? 0.0 : it->second;
}

void validate_spec(const CohortSpec& spec) {
    if (spec.participants < 1) throw input_error("cohort spec: participants must be >= 1");
    if (spec.p_woman < 0 || spec.p_woman > 1) throw input_error("cohort spec: p_woman outside [0, 1]");
    if (spec.nights_per_participant < 0)
        throw input_error("cohort spec: nights_per_participant must be >= 0");
    if (spec.reports_per_night_lo < 0 || spec.reports_per_night_hi < spec.reports_per_night_lo)
        throw input_error("cohort spec: reports_per_night range is invalid");
    if (spec.p_friend_same_sex < 0 || spec.p_friend_same_sex > 1)
        throw input_error("cohort spec: p_friend_same_sex outside [0, 1]");
    if (spec.missing_rate < 0 || spec.missing_rate > 1)
        throw input_error("cohort spec: missing_rate outside [0, 1]");
    for (const auto& [name, rate] : spec.missing_rates)
        if (rate < 0 || rate > 1)
            throw input_error("cohort spec: missing rate for " + name + " outside [0, 1]");
    if (spec.min_lat >= spec.max_lat || spec.min_lon >= spec.max_lon)
        throw input_error("cohort spec: region box is empty");
    const bool wants_reports = spec.reports_exact > 0 ||
                               (spec.reports_exact < 0 && spec.reports_per_night_hi > 0);
    if (wants_reports && spec.nights_per_participant == 0)
        throw input_error("cohort spec: reports requested but nights_per_participant is 0");
    double mix_sum = 0;
    for (const auto& key : mix_keys()) mix_sum += mix_weight(spec.social_mix, key);
    if (mix_sum <= 0) throw input_error("cohort spec: social_mix weights sum to 0");
    for (const auto& e : spec.effects) {
        task_from_name(e.task);
        group_from_code(e.group);
        if (e.d < 0) throw input_error("cohort spec: effect d must be >= 0");
    }
}

struct ReportPlan {
    std::string report_id;
    std::size_t pidx = 0;
    std::int64_t night_days = 0;
    std::int64_t ts = 0;
    int partner = 0, family = 0, male_friends = 0, female_friends = 0, others = 0;
    const char* expected = "retained";
    int drop_modality = -1; // 0 blu, 1 wif, 2 loc; marks the whole night
    bool off_region = false;
    double shift[kGroups] = {0, 0, 0, 0, 0, 0, 0, 0};
};

struct NightPlan {
    std::vector<const ReportPlan*> reports; // sorted by ts before use
    int drop_modality = -1;
    bool off_region = false;
};

// First study weekend; nights alternate Friday / Saturday across weekends.
std::int64_t night_date_for_index(int index) {
    static const std::int64_t base_friday = days_from_civil(2014, 9, 5);
    return base_friday + 7 * (index / 2) + (index % 2);
}

const std::map<std::string, double>& mix_for_sex(const CohortSpec& spec, const std::string& sex) {
    if (sex == "woman" && !spec.social_mix_woman.empty()) return spec.social_mix_woman;
    if (sex == "man" && !spec.social_mix_man.empty()) return spec.social_mix_man;
    return spec.social_mix;
}

void draw_context(const CohortSpec& spec, const std::string& sex, Rng& rng, ReportPlan& plan) {
    const auto& mix = mix_for_sex(spec, sex);
    double total = 0;
    for (const auto& key : mix_keys()) total += mix_weight(mix, key);
    if (total <= 0) throw input_error("cohort spec: social mix weights sum to 0");
    double u = rng.uniform01() * total;
    std::string picked = mix_keys().back();
    for (const auto& key : mix_keys()) {
        u -= mix_weight(mix, key);
        if (u < 0) {
            picked = key;
            break;
        }
    }
    auto clamp11 = [](int v) { return std::min(v, 11); };
    auto add_friends = [&](int count) {
        for (int i = 0; i < count; ++i) {
            const bool same = rng.uniform01() < spec.p_friend_same_sex;
            const bool friend_is_woman = same == (sex == "woman");
            if (friend_is_woman)
                plan.female_friends = clamp11(plan.female_friends + 1);
            else
                plan.male_friends = clamp11(plan.male_friends + 1);
        }
    };
    if (picked == "partner") plan.partner = 1;
    else if (picked == "family") plan.family = clamp11(1 + rng.poisson(1.0));
    else if (picked == "friends_small") add_friends(1);
    else if (picked == "friends_large") add_friends(2 + rng.poisson(2.0));
}

// Label-driven signal level for one report: two-class labels scale by 0 or 1,
// three-class by class/2, so class order maps onto monotone signal strength.
void apply_effects(const CohortSpec& spec, const std::string& sex, ReportPlan& plan) {
    if (spec.effects.empty()) return;
    EventRow stub;
    stub.sex = sex;
    stub.partner = plan.partner;
    stub.family = plan.family;
    stub.male_friends = plan.male_friends;
    stub.female_friends = plan.female_friends;
    stub.others = plan.others;
    for (const auto& e : spec.effects) {
        const Task task = task_from_name(e.task);
        const int label = derive_label(stub, task, LabelOptions{});
        if (label < 0) continue;
        const double factor = is_three_class(task) ? label / 2.0 : static_cast<double>(label);
        plan.shift[static_cast<int>(group_from_code(e.group))] += e.d * factor;
    }
}

struct RawSink {
    std::string participants, reports, truth;
    std::string acc, app, loc, scr, bat, blu, wif, pro;
};

double modality_missing_rate(const CohortSpec& spec, const std::string& name) {
    auto it = spec.missing_rates.find(name);
    return it == spec.missing_rates.end() ? spec.missing_rate : it->second;
}

void append_row(std::string& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
}

// Per-slot shift profile of a night: each slot inherits the signal level of
// the earliest report whose matching window covers it.
void night_shift_profile(const NightPlan& night, std::int64_t night_days,
                         double profile[kSlotsPerNight][kGroups]) {
    bool taken[kSlotsPerNight] = {};
    for (int s = 0; s < kSlotsPerNight; ++s)
        for (int g = 0; g < kGroups; ++g) profile[s][g] = 0;
    for (const ReportPlan* r : night.reports) {
        const int slot = slot_index(r->ts, night_days);
        const int lo = std::max(0, slot - 2);
        const int hi = std::min(kSlotsPerNight - 1, slot + 3);
        for (int s = lo; s <= hi; ++s) {
            if (taken[s]) continue;
            taken[s] = true;
            for (int g = 0; g < kGroups; ++g) profile[s][g] = r->shift[g];
        }
    }
}

void generate_night(const CohortSpec& spec, const std::string& pid, const NightPlan& night,
                    std::int64_t night_days, Rng& rng, RawSink& sink) {
    const std::int64_t start = night_start_ms(night_days);
    const std::int64_t end = start + kNightHours * kMsPerHour;
    const std::int64_t slot_ms = kSlotMinutes * kMsPerMinute;
    double profile[kSlotsPerNight][kGroups];
    night_shift_profile(night, night_days, profile);
    auto shift_at = [&](std::int64_t ts, SensorGroup g) {
        const int slot = static_cast<int>((ts - start) / slot_ms);
        return profile[slot][static_cast<int>(g)];
    };
    const double night_level = std::max(0.2, 1.0 + 0.05 * rng.normal());
    double slot_level[kSlotsPerNight];
    for (int s = 0; s < kSlotsPerNight; ++s)
        slot_level[s] = std::max(0.05, 1.0 + 0.15 * rng.normal());

    const double acc_missing = modality_missing_rate(spec, "acc");
    for (std::int64_t ts = start + 250; ts < end; ts += 30 * kMsPerSecond) {
        if (acc_missing > 0 && rng.uniform01() < acc_missing) continue;
        const int slot = static_cast<int>((ts - start) / slot_ms);
        const double amp =
            night_level * slot_level[slot] * (1.0 + 0.25 * shift_at(ts, SensorGroup::ACC));
        double dx = rng.normal(), dy = rng.normal(), dz = rng.normal();
        const double norm = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (norm > 1e-12) {
            dx /= norm;
            dy /= norm;
            dz /= norm;
        }
        append_row(sink.acc, {pid, std::to_string(ts), format_double(amp * dx + 0.02 * rng.normal()),
                              format_double(amp * dy + 0.02 * rng.normal()),
                              format_double(9.81 + amp * dz + 0.02 * rng.normal())});
    }

    const double app_missing = modality_missing_rate(spec, "app");
    static const std::vector<std::string> app_pool = {
        "communication", "entertainment", "tools",       "music_and_audio",
        "video_players", "productivity",  "study_app"};
    for (std::int64_t ts = start + 1000; ts < end; ts += 300 * kMsPerSecond) {
        if (app_missing > 0 && rng.uniform01() < app_missing) continue;
        const double p_social =
            std::clamp(0.25 * (1.0 + 0.6 * shift_at(ts, SensorGroup::APP)), 0.0, 0.95);
        const int napps = 1 + std::min(rng.poisson(1.3), 5);
        std::string apps;
        for (int i = 0; i < napps; ++i) {
            std::string cat = rng.uniform01() < p_social
                                  ? "social"
                                  : app_pool[static_cast<std::size_t>(
                                        rng.uniform_int(0, static_cast<std::int64_t>(app_pool.size()) - 1))];
            if (i) apps += '|';
            apps += "app." + cat + "." + std::to_string(rng.uniform_int(0, 4)) + ":" + cat;
        }
        append_row(sink.app, {pid, std::to_string(ts), apps});
    }

    if (night.drop_modality != 2) {
        const double loc_missing = modality_missing_rate(spec, "loc");
        const double lat_span = spec.max_lat - spec.min_lat;
        const double lon_span = spec.max_lon - spec.min_lon;
        double clat, clon;
        if (night.off_region) {
            clat = spec.max_lat + 0.5 + rng.uniform(0.0, 0.5);
            clon = spec.max_lon + 0.5 + rng.uniform(0.0, 0.5);
        } else {
            clat = spec.min_lat + lat_span * rng.uniform(0.2, 0.8);
            clon = spec.min_lon + lon_span * rng.uniform(0.2, 0.8);
        }
        for (std::int64_t ts = start + 2000; ts < end; ts += 180 * kMsPerSecond) {
            if (loc_missing > 0 && rng.uniform01() < loc_missing) continue;
            double lat = clat + 0.002 * rng.normal();
            double lon = clon + 0.002 * rng.normal();
            if (!night.off_region) {
                lat = std::clamp(lat, spec.min_lat + 1e-4, spec.max_lat - 1e-4);
                lon = std::clamp(lon, spec.min_lon + 1e-4, spec.max_lon - 1e-4);
            }
            const double s = shift_at(ts, SensorGroup::LOC);
            const double speed = std::fabs(rng.normal(0.5 * (1.0 + 0.3 * s), 0.25));
            const double accuracy = 3.0 + std::fabs(rng.normal(8.0, 3.0));
            const double u = rng.uniform01();
            const char* source = u < 0.6 ? "gps" : (u < 0.9 ? "network" : "unknown");
            append_row(sink.loc,
                       {pid, std::to_string(ts), format_double(lat), format_double(lon),
                        format_double(speed), format_double(accuracy), source,
                        format_double(rng.uniform(10.0, 40.0))});
        }
    }

    const double scr_missing = modality_missing_rate(spec, "scr");
    for (std::int64_t ts = start; ts < end;) {
        const double p_on =
            std::clamp(0.35 * (1.0 + 0.4 * shift_at(ts, SensorGroup::SCR)), 0.02, 0.98);
        const bool on = rng.uniform01() < p_on;
        if (!(scr_missing > 0 && rng.uniform01() < scr_missing))
            append_row(sink.scr, {pid, std::to_string(ts), on ? "on" : "off"});
        ts += rng.uniform_int(120, 480) * kMsPerSecond;
    }

    const double bat_missing = modality_missing_rate(spec, "bat");
    double level = rng.uniform(80.0, 98.0);
    for (std::int64_t ts = start + 3000; ts < end; ts += 300 * kMsPerSecond) {
        const bool plugged = rng.uniform01() < 0.04;
        if (plugged)
            level = std::min(100.0, level + 2.0);
        else
            level = std::max(5.0, level - rng.uniform(0.2, 0.5));
        const char* status = plugged ? (level >= 99.5 ? "full" : "charging") : "discharging";
        if (bat_missing > 0 && rng.uniform01() < bat_missing) continue;
        append_row(sink.bat, {pid, std::to_string(ts), format_double(level), status,
                              plugged ? "1" : "0"});
    }

    if (night.drop_modality != 0) {
        const double blu_missing = modality_missing_rate(spec, "blu");
        for (std::int64_t ts = start + 4000; ts < end; ts += 300 * kMsPerSecond) {
            if (blu_missing > 0 && rng.uniform01() < blu_missing) continue;
            const double lambda = 1.2 * (1.0 + 0.8 * shift_at(ts, SensorGroup::BLU));
            const int ndev = std::min(rng.poisson(lambda), 12);
            std::string devices;
            for (int i = 0; i < ndev; ++i) {
                if (i) devices += '|';
                devices += "bt" + pid + "_" + std::to_string(rng.uniform_int(0, 19)) + ":" +
                           format_double(-static_cast<double>(40 + rng.uniform_int(0, 50)));
            }
            append_row(sink.blu, {pid, std::to_string(ts), devices});
        }
    }

    if (night.drop_modality != 1) {
        const double wif_missing = modality_missing_rate(spec, "wif");
        static const int freqs[5] = {2412, 2437, 2462, 5180, 5240};
        for (std::int64_t ts = start + 5000; ts < end; ts += 300 * kMsPerSecond) {
            if (wif_missing > 0 && rng.uniform01() < wif_missing) continue;
            const double lambda = 2.2 * (1.0 + 0.5 * shift_at(ts, SensorGroup::WIF));
            const int naps = 1 + std::min(rng.poisson(lambda), 11);
            std::string aps;
            for (int i = 0; i < naps; ++i) {
                if (i) aps += '|';
                aps += "ap" + std::to_string(rng.uniform_int(0, 39)) + ":" +
                       format_double(-static_cast<double>(30 + rng.uniform_int(0, 60))) + ":" +
                       std::to_string(freqs[rng.uniform_int(0, 4)]);
            }
            append_row(sink.wif, {pid, std::to_string(ts), aps});
        }
    }

    const double pro_missing = modality_missing_rate(spec, "pro");
    for (std::int64_t ts = start + 6000; ts < end; ts += 300 * kMsPerSecond) {
        if (pro_missing > 0 && rng.uniform01() < pro_missing) continue;
        double distance = rng.uniform01() < 0.45 ? 0.0 : rng.uniform(0.5, 8.0);
        distance *= 1.0 + 0.3 * shift_at(ts, SensorGroup::PRO);
        append_row(sink.pro, {pid, std::to_string(ts), format_double(distance)});
    }
}

std::string padded(std::size_t v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*zu", width, v);
    return buf;
}

} // namespace

CohortSpec parse_cohort_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw input_error(std::string("cohort spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw input_error("cohort spec: top level must be an object");
    CohortSpec spec;
    spec.social_mix = {{"alone", 0.2}, {"partner", 0.15}, {"family", 0.15},
                       {"friends_small", 0.2}, {"friends_large", 0.3}};
    try {
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("participants")) spec.participants = j["participants"].get<int>();
        if (j.contains("p_woman")) spec.p_woman = j["p_woman"].get<double>();
        if (j.contains("nights_per_participant"))
            spec.nights_per_participant = j["nights_per_participant"].get<int>();
        if (j.contains("reports_per_night")) {
            const auto& r = j["reports_per_night"];
            if (!r.is_array() || r.size() != 2)
                throw input_error("cohort spec: reports_per_night must be [lo, hi]");
            spec.reports_per_night_lo = r[0].get<int>();
            spec.reports_per_night_hi = r[1].get<int>();
        }
        if (j.contains("reports_exact")) spec.reports_exact = j["reports_exact"].get<long>();
        if (j.contains("social_mix")) spec.social_mix = parse_mix(j["social_mix"], "social_mix");
        if (j.contains("social_mix_man"))
            spec.social_mix_man = parse_mix(j["social_mix_man"], "social_mix_man");
        if (j.contains("social_mix_woman"))
            spec.social_mix_woman = parse_mix(j["social_mix_woman"], "social_mix_woman");
        if (j.contains("p_friend_same_sex"))
            spec.p_friend_same_sex = j["p_friend_same_sex"].get<double>();
        if (j.contains("effects")) {
            for (const auto& e : j["effects"]) {
                EffectSpec eff;
                eff.task = e.at("task").get<std::string>();
                eff.group = e.at("group").get<std::string>();
                eff.d = e.at("d").get<double>();
                spec.effects.push_back(eff);
            }
        }
        if (j.contains("missing_rate")) spec.missing_rate = j["missing_rate"].get<double>();
        if (j.contains("missing_rates"))
            for (auto it = j["missing_rates"].begin(); it != j["missing_rates"].end(); ++it)
                spec.missing_rates[it.key()] = it.value().get<double>();
        if (j.contains("inject")) {
            const auto& inj = j["inject"];
            if (inj.contains("unavailable_sensor_data"))
                spec.inject_unavailable = inj["unavailable_sensor_data"].get<std::size_t>();
            if (inj.contains("edge_time")) spec.inject_edge = inj["edge_time"].get<std::size_t>();
            if (inj.contains("out_of_region"))
                spec.inject_out_of_region = inj["out_of_region"].get<std::size_t>();
        }
        if (j.contains("region")) {
            const auto& r = j["region"];
            spec.min_lat = r.at("min_lat").get<double>();
            spec.max_lat = r.at("max_lat").get<double>();
            spec.min_lon = r.at("min_lon").get<double>();
            spec.max_lon = r.at("max_lon").get<double>();
        }
    } catch (const json::exception& e) {
        throw input_error(std::string("cohort spec: ") + e.what());
    }
    validate_spec(spec);
    return spec;
}

std::string cohort_spec_json(const CohortSpec& spec) {
    json j;
    j["seed"] = spec.seed;
    j["participants"] = spec.participants;
    j["p_woman"] = spec.p_woman;
    j["nights_per_participant"] = spec.nights_per_participant;
    j["reports_per_night"] = {spec.reports_per_night_lo, spec.reports_per_night_hi};
    if (spec.reports_exact >= 0) j["reports_exact"] = spec.reports_exact;
    j["social_mix"] = spec.social_mix;
    if (!spec.social_mix_man.empty()) j["social_mix_man"] = spec.social_mix_man;
    if (!spec.social_mix_woman.empty()) j["social_mix_woman"] = spec.social_mix_woman;
    j["p_friend_same_sex"] = spec.p_friend_same_sex;
    j["effects"] = json::array();
    for (const auto& e : spec.effects)
        j["effects"].push_back({{"task", e.task}, {"group", e.group}, {"d", e.d}});
    j["missing_rate"] = spec.missing_rate;
    if (!spec.missing_rates.empty()) j["missing_rates"] = spec.missing_rates;
    j["inject"] = {{"unavailable_sensor_data", spec.inject_unavailable},
                   {"edge_time", spec.inject_edge},
                   {"out_of_region", spec.inject_out_of_region}};
    j["region"] = {{"min_lat", spec.min_lat},
                   {"max_lat", spec.max_lat},
                   {"min_lon", spec.min_lon},
                   {"max_lon", spec.max_lon}};
    return j.dump(2) + "\n";
}

void generate_cohort(const CohortSpec& spec, const std::string& out_dir) {
    validate_spec(spec);
    std::filesystem::create_directories(out_dir);
    const std::size_t P = static_cast<std::size_t>(spec.participants);
    const int N = spec.nights_per_participant;

    std::vector<Participant> people(P);
    for (std::size_t p = 0; p < P; ++p) {
        Rng ir(derive_seed(spec.seed, "identity", p));
        people[p].id = "p" + padded(p + 1, 4);
        people[p].sex = ir.uniform01() < spec.p_woman ? "woman" : "man";
        people[p].age = static_cast<int>(ir.uniform_int(16, 25));
    }

    std::vector<std::vector<int>> counts(P, std::vector<int>(static_cast<std::size_t>(N), 0));
    if (spec.reports_exact >= 0) {
        long remaining = spec.reports_exact;
        while (remaining > 0)
            for (std::size_t p = 0; p < P && remaining > 0; ++p)
                for (int n = 0; n < N && remaining > 0; ++n) {
                    ++counts[p][static_cast<std::size_t>(n)];
                    --remaining;
                }
    }

    std::vector<ReportPlan> plans;
    std::vector<std::set<std::int64_t>> used_ts(P);
    auto draw_ts = [&](Rng& rng, std::size_t p, std::int64_t lo, std::int64_t hi) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const std::int64_t ts = rng.uniform_int(lo, hi);
            if (used_ts[p].insert(ts).second) return ts;
        }
        throw internal_error("cohort generator: could not draw a distinct report time");
    };

    std::size_t report_serial = 0;
    for (std::size_t p = 0; p < P; ++p) {
        Rng rng(derive_seed(spec.seed, "participant", p));
        for (int n = 0; n < N; ++n) {
            const std::int64_t night = night_date_for_index(n);
            const std::int64_t start = night_start_ms(night);
            int count = counts[p][static_cast<std::size_t>(n)];
            if (spec.reports_exact < 0)
                count = static_cast<int>(
                    rng.uniform_int(spec.reports_per_night_lo, spec.reports_per_night_hi));
            for (int r = 0; r < count; ++r) {
                ReportPlan plan;
                plan.report_id = "r" + padded(++report_serial, 6);
                plan.pidx = p;
                plan.night_days = night;
                plan.ts = draw_ts(rng, p, start + 30 * kMsPerMinute,
                                  start + 7 * kMsPerHour + 10 * kMsPerMinute - 1);
                draw_context(spec, people[p].sex, rng, plan);
                apply_effects(spec, people[p].sex, plan);
                plans.push_back(std::move(plan));
            }
        }
    }

    std::vector<int> extra_nights(P, 0);
    std::size_t inject_cursor = 0;
    auto inject_report = [&](const char* expected, std::size_t type_index) {
        const std::size_t p = inject_cursor % P;
        const int night_index = N + extra_nights[p]++;
        const std::int64_t night = night_date_for_index(night_index);
        const std::int64_t start = night_start_ms(night);
        Rng rng(derive_seed(spec.seed, "inject", inject_cursor));
        ++inject_cursor;
        ReportPlan plan;
        plan.report_id = "x" + padded(inject_cursor, 6);
        plan.pidx = p;
        plan.night_days = night;
        plan.expected = expected;
        if (std::string(expected) == "edge_time") {
            plan.ts = type_index % 2 == 0 ? start + 5 * kMsPerMinute
                                          : start + 7 * kMsPerHour + 55 * kMsPerMinute;
        } else {
            plan.ts = start + 3 * kMsPerHour +
                      static_cast<std::int64_t>(type_index % 8) * 15 * kMsPerMinute;
        }
        used_ts[p].insert(plan.ts);
        if (std::string(expected) == "unavailable_sensor_data")
            plan.drop_modality = static_cast<int>(type_index % 3);
        if (std::string(expected) == "out_of_region") plan.off_region = true;
        draw_context(spec, people[p].sex, rng, plan);
        apply_effects(spec, people[p].sex, plan);
        plans.push_back(std::move(plan));
    };
    for (std::size_t i = 0; i < spec.inject_unavailable; ++i)
        inject_report("unavailable_sensor_data", i);
    for (std::size_t i = 0; i < spec.inject_edge; ++i) inject_report("edge_time", i);
    for (std::size_t i = 0; i < spec.inject_out_of_region; ++i) inject_report("out_of_region", i);

    std::map<std::pair<std::size_t, std::int64_t>, NightPlan> nights;
    for (std::size_t p = 0; p < P; ++p)
        for (int n = 0; n < N + extra_nights[p]; ++n)
            nights[{p, night_date_for_index(n)}] = NightPlan{};
    for (const auto& plan : plans) {
        NightPlan& night = nights[{plan.pidx, plan.night_days}];
        night.reports.push_back(&plan);
        if (plan.drop_modality >= 0) night.drop_modality = plan.drop_modality;
        if (plan.off_region) night.off_region = true;
    }
    for (auto& [key, night] : nights)
        std::sort(night.reports.begin(), night.reports.end(),
                  [](const ReportPlan* a, const ReportPlan* b) { return a->ts < b->ts; });

    RawSink sink;
    for (std::size_t p = 0; p < P; ++p)
        append_row(sink.participants,
                   {people[p].id, people[p].sex, std::to_string(people[p].age)});
    for (const auto& plan : plans)
        append_row(sink.reports,
                   {plan.report_id, people[plan.pidx].id, std::to_string(plan.ts), "1",
                    std::to_string(plan.partner), std::to_string(plan.family),
                    std::to_string(plan.male_friends), std::to_string(plan.female_friends),
                    std::to_string(plan.others)});

    for (const auto& plan : plans) {
        EventRow stub;
        stub.sex = people[plan.pidx].sex;
        stub.partner = plan.partner;
        stub.family = plan.family;
        stub.male_friends = plan.male_friends;
        stub.female_friends = plan.female_friends;
        stub.others = plan.others;
        std::string row = plan.report_id + "," + people[plan.pidx].id + "," +
                          std::to_string(plan.ts) + "," + format_date(plan.night_days) + "," +
                          plan.expected;
        for (const auto& name : task_names())
            row += "," + std::to_string(derive_label(stub, task_from_name(name), LabelOptions{}));
        sink.truth += row + '\n';
    }

    const NightPlan quiet_night;
    std::size_t night_serial = 0;
    for (std::size_t p = 0; p < P; ++p) {
        for (int n = 0; n < N + extra_nights[p]; ++n) {
            const std::int64_t night_days = night_date_for_index(n);
            const auto it = nights.find({p, night_days});
            Rng rng(derive_seed(spec.seed, "night", night_serial++));
            generate_night(spec, people[p].id, it == nights.end() ? quiet_night : it->second,
                           night_days, rng, sink);
        }
    }

    auto write_raw = [&](const std::string& name, const char* header, const std::string& body) {
        write_text_file(out_dir + "/" + name, std::string(header) + "\n" + body);
    };
    write_raw("participants.csv", "participant_id,sex,age", sink.participants);
    write_raw("reports.csv",
              "report_id,participant_id,timestamp,alcoholic,partner,family,male_friends,"
              "female_friends,others",
              sink.reports);
    std::string truth_header = "report_id,participant_id,timestamp,night_date,expected";
    for (const auto& name : task_names()) truth_header += "," + name;
    write_raw("truth.csv", truth_header.c_str(), sink.truth);
    write_raw("acc.csv", "participant_id,timestamp,x,y,z", sink.acc);
    write_raw("app.csv", "participant_id,timestamp,apps", sink.app);
    write_raw("loc.csv", "participant_id,timestamp,lat,lon,speed,accuracy,source,signal", sink.loc);
    write_raw("scr.csv", "participant_id,timestamp,state", sink.scr);
    write_raw("bat.csv", "participant_id,timestamp,level,status,plugged", sink.bat);
    write_raw("blu.csv", "participant_id,timestamp,devices", sink.blu);
    write_raw("wif.csv", "participant_id,timestamp,aps", sink.wif);
    write_raw("pro.csv", "participant_id,timestamp,distance", sink.pro);
    write_text_file(out_dir + "/synth_spec.json", cohort_spec_json(spec));
}

} // namespace nightsense
