#include "forest.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "parallel.hpp"

namespace nightsense {

namespace {

double gini(const std::vector<double>& counts, double total) {
    double g = 1.0;
    for (double c : counts) {
        const double p = c / total;
        g -= p * p;
    }
    return g;
}

} // namespace

Forest::Tree Forest::build_tree(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                                std::uint64_t seed, int mtry) const {
    Rng rng(seed);
    const std::size_t n = X.size();
    const std::size_t n_features = X[0].size();

    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
        sample[i] = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    Tree tree;
    tree.importance.assign(n_features, 0.0);

    struct Work {
        std::vector<std::size_t> rows;
        int node = 0;
    };

    const auto make_leaf = [&](Node& node, const std::vector<std::size_t>& rows) {
        node.feature = -1;
        node.dist.assign(static_cast<std::size_t>(n_classes_), 0.0);
        for (std::size_t r : rows) node.dist[static_cast<std::size_t>(y[r])] += 1.0;
        for (double& d : node.dist) d /= static_cast<double>(rows.size());
    };

    tree.nodes.emplace_back();
    std::vector<Work> stack;
    stack.push_back({std::move(sample), 0});

    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        const std::vector<std::size_t>& rows = w.rows;
        const double node_n = static_cast<double>(rows.size());

        std::vector<double> counts(static_cast<std::size_t>(n_classes_), 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += 1.0;
        const double node_gini = gini(counts, node_n);

        if (node_gini == 0.0 || rows.size() < 2 * static_cast<std::size_t>(min_leaf_)) {
            make_leaf(tree.nodes[static_cast<std::size_t>(w.node)], rows);
            continue;
        }

        const auto candidates =
            rng.sample_without_replacement(n_features, static_cast<std::size_t>(mtry));

        int best_feature = -1;
        double best_threshold = 0, best_gain = 0;
        std::vector<double> best_left_counts;

        std::vector<std::pair<double, int>> vals;
        for (std::size_t f : candidates) {
            vals.clear();
            vals.reserve(rows.size());
            for (std::size_t r : rows) vals.emplace_back(X[r][f], y[r]);
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;

            std::vector<double> left(static_cast<std::size_t>(n_classes_), 0.0);
            std::vector<double> right = counts;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left[static_cast<std::size_t>(vals[i].second)] += 1.0;
                right[static_cast<std::size_t>(vals[i].second)] -= 1.0;
                if (vals[i].first == vals[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = node_n - nl;
                if (nl < min_leaf_ || nr < min_leaf_) continue;
                const double gain =
                    node_gini - (nl / node_n) * gini(left, nl) - (nr / node_n) * gini(right, nr);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                    best_left_counts = left;
                }
            }
        }

        if (best_feature < 0 || best_gain <= 0.0) {
            make_leaf(tree.nodes[static_cast<std::size_t>(w.node)], rows);
            continue;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (X[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_rows : right_rows)
                .push_back(r);
        }

        tree.importance[static_cast<std::size_t>(best_feature)] +=
            (node_n / static_cast<double>(n)) * best_gain;

        Node& node = tree.nodes[static_cast<std::size_t>(w.node)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({std::move(right_rows), node.right});
        stack.push_back({std::move(left_rows), node.left});
    }
    return tree;
}

void Forest::train(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   int n_classes, const ForestParams& params) {
    if (X.empty()) throw input_error("forest: empty training set");
    if (X.size() != y.size()) throw internal_error("forest: rows and labels differ in length");
    if (n_classes < 2) throw input_error("forest: need at least 2 classes");
    for (int label : y) {
        if (label < 0 || label >= n_classes) throw input_error("forest: label outside class range");
    }
    n_classes_ = n_classes;
    min_leaf_ = params.min_leaf;
    const std::size_t n_features = X[0].size();
    int mtry = params.mtry;
    if (mtry <= 0) mtry = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));
    mtry = std::min(mtry, static_cast<int>(n_features));

    trees_.assign(static_cast<std::size_t>(params.n_trees), Tree{});
    parallel_for(trees_.size(), params.threads, [&](std::size_t t) {
        trees_[t] = build_tree(X, y, derive_seed(params.seed, "tree", t), mtry);
    });

    importances_.assign(n_features, 0.0);
    for (const auto& tree : trees_) {
        for (std::size_t f = 0; f < n_features; ++f) importances_[f] += tree.importance[f];
    }
    double total = 0;
    for (double v : importances_) total += v;
    if (total > 0) {
        for (double& v : importances_) v /= total;
    }
}

std::vector<double> Forest::predict_proba(const std::vector<double>& x) const {
    if (trees_.empty()) throw internal_error("forest: predict before train");
    std::vector<double> proba(static_cast<std::size_t>(n_classes_), 0.0);
    for (const auto& tree : trees_) {
        int node = 0;
        while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
            const Node& nd = tree.nodes[static_cast<std::size_t>(node)];
            node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        const auto& dist = tree.nodes[static_cast<std::size_t>(node)].dist;
        for (std::size_t c = 0; c < proba.size(); ++c) proba[c] += dist[c];
    }
    for (double& p : proba) p /= static_cast<double>(trees_.size());
    return proba;
}

int Forest::predict(const std::vector<double>& x) const {
    const auto proba = predict_proba(x);
    return static_cast<int>(std::max_element(proba.begin(), proba.end()) - proba.begin());
}

} // namespace nightsense
