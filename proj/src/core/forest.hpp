#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace nightsense {

struct ForestParams {
    int n_trees = 100;
    int mtry = 0; // features tried per split; 0 picks floor(sqrt(F))
    int min_leaf = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Bootstrap-bagged Gini decision trees with mean-decrease-in-impurity
// feature importances (normalized to sum 1). Training and prediction are
// deterministic for a given seed regardless of thread count.
class Forest {
public:
    void train(const std::vector<std::vector<double>>& X, const std::vector<int>& y, int n_classes,
               const ForestParams& params);

    std::vector<double> predict_proba(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;

    const std::vector<double>& importances() const { return importances_; }
    int n_classes() const { return n_classes_; }

private:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0;
        int left = -1, right = -1;
        std::vector<double> dist; // leaf class distribution
    };
    struct Tree {
        std::vector<Node> nodes;
        std::vector<double> importance; // unnormalized MDI per feature
    };

    Tree build_tree(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                    std::uint64_t seed, int mtry) const;

    std::vector<Tree> trees_;
    std::vector<double> importances_;
    int n_classes_ = 0;
    int min_leaf_ = 1;
};

} // namespace nightsense
