#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nightsense {

enum class SensorGroup { ACC, APP, BAT, BLU, PRO, LOC, SCR, WIF };

const char* group_code(SensorGroup g);
SensorGroup group_from_code(const std::string& code);

struct BaseFeature {
    std::string id;
    SensorGroup group;
    std::string name;
};

// The 138 per-slot base features, in stable catalog order:
// LOC 13, ACC 50, BLU 9, WIF 12, APP 35, PRO 6, BAT 12, SCR 1.
const std::vector<BaseFeature>& base_catalog();

// Index of a base feature id within the catalog; throws input_error.
std::size_t catalog_index(const std::string& feature_id);

// Catalog positions of one sensor group's base features.
std::vector<std::size_t> group_base_indices(SensorGroup g);

// Histogram bins for running-app categories: 31 store categories plus the
// study's own reporting app and a catch-all. Payload categories outside the
// bin list (including "system") fall into "unknown".
const std::vector<std::string>& app_category_bins();
std::size_t app_bin_index(const std::string& category);

// Stat suffixes shared by every five-number summary family.
const std::vector<std::string>& stat_suffixes(); // Min, Max, Median, Mean, Std

} // namespace nightsense
