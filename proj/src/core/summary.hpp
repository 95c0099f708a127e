#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"

namespace nightsense {

struct FiveStats {
    double min = kMissing;
    double max = kMissing;
    double median = kMissing;
    double mean = kMissing;
    double std = kMissing;
};

// Population std; median of an even-length sample is the mean of the two
// central values. An empty input yields all-missing stats.
inline FiveStats five_stats(std::vector<double> v) {
    FiveStats s;
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    s.min = v.front();
    s.max = v.back();
    s.median = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    double sum = 0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(n);
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n));
    return s;
}

// Writes the five stats into out[at..at+4] in catalog order (min, max,
// median, mean, std).
inline void emit_five(std::vector<double>& out, std::size_t at, const FiveStats& s) {
    out[at + 0] = s.min;
    out[at + 1] = s.max;
    out[at + 2] = s.median;
    out[at + 3] = s.mean;
    out[at + 4] = s.std;
}

} // namespace nightsense
