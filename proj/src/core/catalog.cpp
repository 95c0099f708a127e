#include "catalog.hpp"

#include <map>

#include "common.hpp"

namespace nightsense {

const char* group_code(SensorGroup g) {
    switch (g) {
        case SensorGroup::ACC: return "ACC";
        case SensorGroup::APP: return "APP";
        case SensorGroup::BAT: return "BAT";
        case SensorGroup::BLU: return "BLU";
        case SensorGroup::PRO: return "PRO";
        case SensorGroup::LOC: return "LOC";
        case SensorGroup::SCR: return "SCR";
        case SensorGroup::WIF: return "WIF";
    }
    throw internal_error("unreachable sensor group");
}

SensorGroup group_from_code(const std::string& code) {
    if (code == "ACC") return SensorGroup::ACC;
    if (code == "APP") return SensorGroup::APP;
    if (code == "BAT") return SensorGroup::BAT;
    if (code == "BLU") return SensorGroup::BLU;
    if (code == "PRO") return SensorGroup::PRO;
    if (code == "LOC") return SensorGroup::LOC;
    if (code == "SCR") return SensorGroup::SCR;
    if (code == "WIF") return SensorGroup::WIF;
    throw input_error("unknown sensor group '" + code + "'");
}

const std::vector<std::string>& stat_suffixes() {
    static const std::vector<std::string> s = {"Min", "Max", "Median", "Mean", "Std"};
    return s;
}

const std::vector<std::string>& app_category_bins() {
    static const std::vector<std::string> bins = {
        "art_and_design", "auto_and_vehicles", "beauty", "books_and_reference", "business",
        "comics", "communication", "dating", "education", "entertainment",
        "events", "finance", "food_and_drink", "health_and_fitness", "house_and_home",
        "libraries_and_demo", "lifestyle", "maps_and_navigation", "medical", "music_and_audio",
        "news_and_magazines", "parenting", "personalization", "photography", "productivity",
        "shopping", "social", "sports", "tools", "travel_and_local",
        "video_players", "study_app", "unknown"};
    return bins;
}

std::size_t app_bin_index(const std::string& category) {
    static const std::map<std::string, std::size_t> lookup = [] {
        std::map<std::string, std::size_t> m;
        const auto& bins = app_category_bins();
        for (std::size_t i = 0; i < bins.size(); ++i) m[bins[i]] = i;
        return m;
    }();
    auto it = lookup.find(category);
    if (it != lookup.end()) return it->second;
    return app_category_bins().size() - 1; // "unknown"
}

namespace {

void push_stats(std::vector<BaseFeature>& out, const std::string& id_prefix, SensorGroup g,
                const std::string& name_prefix) {
    static const char* names[] = {"minimum", "maximum", "median", "mean", "std"};
    const auto& suf = stat_suffixes();
    for (std::size_t i = 0; i < suf.size(); ++i) {
        out.push_back({id_prefix + suf[i], g, name_prefix + " " + names[i]});
    }
}

std::vector<BaseFeature> build_catalog() {
    std::vector<BaseFeature> c;
    c.reserve(138);

    push_stats(c, "locSpeed", SensorGroup::LOC, "location speed");
    push_stats(c, "locAccuracy", SensorGroup::LOC, "location accuracy");
    c.push_back({"locSignalGps", SensorGroup::LOC, "location fixes from gps"});
    c.push_back({"locSignalNetwork", SensorGroup::LOC, "location fixes from network"});
    c.push_back({"locSignalUnknown", SensorGroup::LOC, "location fixes from unknown source"});

    push_stats(c, "accX", SensorGroup::ACC, "acceleration x axis");
    push_stats(c, "accY", SensorGroup::ACC, "acceleration y axis");
    push_stats(c, "accZ", SensorGroup::ACC, "acceleration z axis");
    push_stats(c, "accAngleX", SensorGroup::ACC, "angle of x axis to gravity");
    push_stats(c, "accAngleY", SensorGroup::ACC, "angle of y axis to gravity");
    push_stats(c, "accAngleZ", SensorGroup::ACC, "angle of z axis to gravity");
    push_stats(c, "accMsma", SensorGroup::ACC, "signal magnitude area");
    push_stats(c, "accDm", SensorGroup::ACC, "sample-to-sample magnitude delta");
    push_stats(c, "accM", SensorGroup::ACC, "magnitude about slot mean");
    push_stats(c, "accMnew", SensorGroup::ACC, "raw acceleration magnitude");

    c.push_back({"bluIdCount", SensorGroup::BLU, "distinct bluetooth device ids"});
    c.push_back({"bluRecordCount", SensorGroup::BLU, "bluetooth device records"});
    c.push_back({"bluScanCount", SensorGroup::BLU, "bluetooth scans"});
    c.push_back({"bluEmptyScanCount", SensorGroup::BLU, "empty bluetooth scans"});
    push_stats(c, "bluStrength", SensorGroup::BLU, "bluetooth signal strength");

    c.push_back({"wifRecordCount", SensorGroup::WIF, "wifi hotspot records"});
    c.push_back({"wifIdCount", SensorGroup::WIF, "distinct wifi hotspot ids"});
    push_stats(c, "wifLevel", SensorGroup::WIF, "wifi signal level");
    push_stats(c, "wifFrequency", SensorGroup::WIF, "wifi frequency");

    c.push_back({"appRecordCount", SensorGroup::APP, "running-app snapshot records"});
    c.push_back({"appCount", SensorGroup::APP, "distinct running apps"});
    for (const auto& bin : app_category_bins()) {
        c.push_back({"appCat_" + bin, SensorGroup::APP, "share of apps in category " + bin});
    }

    c.push_back({"proRecordCount", SensorGroup::PRO, "proximity records"});
    push_stats(c, "proDistance", SensorGroup::PRO, "proximity distance");

    c.push_back({"batStatusCharging", SensorGroup::BAT, "battery records charging"});
    c.push_back({"batStatusDischarging", SensorGroup::BAT, "battery records discharging"});
    c.push_back({"batStatusFull", SensorGroup::BAT, "battery records full"});
    c.push_back({"batStatusNotCharging", SensorGroup::BAT, "battery records not charging"});
    c.push_back({"batStatusUnknown", SensorGroup::BAT, "battery records with unknown status"});
    push_stats(c, "batLevel", SensorGroup::BAT, "battery level");
    c.push_back({"batRecordCount", SensorGroup::BAT, "battery records"});
    c.push_back({"batPluggedCount", SensorGroup::BAT, "battery records while plugged"});

    c.push_back({"scrOnPct", SensorGroup::SCR, "percent of slot with screen on"});

    if (c.size() != 138) throw internal_error("catalog size mismatch");
    return c;
}

} // namespace

const std::vector<BaseFeature>& base_catalog() {
    static const std::vector<BaseFeature> catalog = build_catalog();
    return catalog;
}

std::size_t catalog_index(const std::string& feature_id) {
    static const std::map<std::string, std::size_t> lookup = [] {
        std::map<std::string, std::size_t> m;
        const auto& c = base_catalog();
        for (std::size_t i = 0; i < c.size(); ++i) m[c[i].id] = i;
        return m;
    }();
    auto it = lookup.find(feature_id);
    if (it == lookup.end()) throw input_error("unknown feature id '" + feature_id + "'");
    return it->second;
}

std::vector<std::size_t> group_base_indices(SensorGroup g) {
    std::vector<std::size_t> out;
    const auto& c = base_catalog();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].group == g) out.push_back(i);
    }
    return out;
}

} // namespace nightsense
