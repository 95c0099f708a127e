#include "smote.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "common.hpp"

namespace nightsense {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Indices (into members) of the k nearest same-class neighbors of members[i],
// excluding itself; distance ties broken by member order.
std::vector<std::size_t> nearest_neighbors(const std::vector<std::vector<double>>& X,
                                           const std::vector<std::size_t>& members, std::size_t i,
                                           std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(members.size() - 1);
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (j == i) continue;
        d.emplace_back(sq_dist(X[members[i]], X[members[j]]), j);
    }
    std::stable_sort(d.begin(), d.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (d.size() > k) d.resize(k);
    std::vector<std::size_t> out;
    out.reserve(d.size());
    for (const auto& [dist, j] : d) out.push_back(j);
    return out;
}

} // namespace

void smote_balance(std::vector<std::vector<double>>& X, std::vector<int>& y, int k, Rng& rng) {
    if (X.size() != y.size()) throw internal_error("smote: rows and labels differ in length");
    if (X.empty()) throw input_error("smote: empty training set");
    if (k < 1) throw input_error("smote: k must be >= 1");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);

    std::size_t smallest = X.size(), largest = 0;
    for (const auto& [label, members] : by_class) {
        if (members.size() < 2) {
            throw input_error("smote: class " + std::to_string(label) +
                              " has a single member, no neighbor to interpolate toward");
        }
        smallest = std::min(smallest, members.size());
        largest = std::max(largest, members.size());
    }
    const std::size_t target = std::min(2 * smallest, largest);

    std::vector<std::vector<double>> out_X;
    std::vector<int> out_y;
    for (const auto& [label, members] : by_class) {
        if (members.size() > target) {
            auto drawn = rng.sample_without_replacement(members.size(), target);
            std::sort(drawn.begin(), drawn.end());
            for (std::size_t j : drawn) {
                out_X.push_back(X[members[j]]);
                out_y.push_back(label);
            }
            continue;
        }
        for (std::size_t j : members) {
            out_X.push_back(X[j]);
            out_y.push_back(label);
        }
        const std::size_t deficit = target - members.size();
        if (deficit == 0) continue;
        const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), members.size() - 1);
        std::vector<std::vector<std::size_t>> nn(members.size());
        for (std::size_t j = 0; j < deficit; ++j) {
            const std::size_t parent = j % members.size();
            if (nn[parent].empty()) nn[parent] = nearest_neighbors(X, members, parent, kk);
            const auto& cands = nn[parent];
            const std::size_t pick =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cands.size()) - 1));
            const double u = rng.uniform01();
            const auto& xp = X[members[parent]];
            const auto& xn = X[members[cands[pick]]];
            std::vector<double> synth(xp.size());
            for (std::size_t f = 0; f < xp.size(); ++f) synth[f] = xp[f] + u * (xn[f] - xp[f]);
            out_X.push_back(std::move(synth));
            out_y.push_back(label);
        }
    }
    X = std::move(out_X);
    y = std::move(out_y);
}

} // namespace nightsense
