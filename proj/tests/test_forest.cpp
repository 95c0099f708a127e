#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/common.hpp"
#include "core/forest.hpp"
#include "core/rng.hpp"

using namespace nightsense;

namespace {

using Matrix = std::vector<std::vector<double>>;

void make_threshold_data(Matrix& X, std::vector<int>& y) {
    for (int i = 0; i < 20; ++i) {
        X.push_back({0.1 * i});
        y.push_back(0);
        X.push_back({3.0 + 0.1 * i});
        y.push_back(1);
    }
}

void make_xor_data(Matrix& X, std::vector<int>& y, std::uint64_t seed) {
    Rng rng(seed);
    const double centers[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    for (int c = 0; c < 4; ++c) {
        for (int i = 0; i < 50; ++i) {
            X.push_back({centers[c][0] + rng.normal(0.0, 0.08),
                         centers[c][1] + rng.normal(0.0, 0.08)});
            y.push_back(c < 2 ? 0 : 1);
        }
    }
}

} // namespace

TEST_CASE("a separable threshold is learned exactly") {
    Matrix X;
    std::vector<int> y;
    make_threshold_data(X, y);

    ForestParams params;
    params.n_trees = 30;
    params.seed = 11;
    Forest f;
    f.train(X, y, 2, params);
    CHECK(f.n_classes() == 2);

    for (std::size_t i = 0; i < X.size(); ++i) {
        CHECK(f.predict(X[i]) == y[i]);
        const auto proba = f.predict_proba(X[i]);
        REQUIRE(proba.size() == 2);
        CHECK(proba[0] + proba[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(proba[0] >= 0.0);
        CHECK(proba[1] >= 0.0);
    }
    CHECK(f.predict({-4.0}) == 0);
    CHECK(f.predict({9.0}) == 1);
}

TEST_CASE("an interaction pattern with no single split is still learnable") {
    Matrix X;
    std::vector<int> y;
    make_xor_data(X, y, 21);

    ForestParams params;
    params.n_trees = 60;
    params.seed = 5;
    params.mtry = 2;
    Forest f;
    f.train(X, y, 2, params);

    int correct = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (f.predict(X[i]) == y[i]) ++correct;
    }
    CHECK(correct >= static_cast<int>(0.95 * X.size()));
    CHECK(f.predict({0.02, 0.03}) == 0);
    CHECK(f.predict({0.97, 0.96}) == 0);
    CHECK(f.predict({0.02, 0.98}) == 1);
    CHECK(f.predict({0.98, 0.04}) == 1);
}

TEST_CASE("training is deterministic in the seed and thread count") {
    Matrix X;
    std::vector<int> y;
    make_xor_data(X, y, 77);

    auto snapshot = [&](std::uint64_t seed, unsigned threads) {
        ForestParams params;
        params.n_trees = 40;
        params.seed = seed;
        params.threads = threads;
        Forest f;
        f.train(X, y, 2, params);
        std::vector<double> out = f.importances();
        for (double px = -0.2; px <= 1.2; px += 0.13) {
            for (double py = -0.2; py <= 1.2; py += 0.17) {
                const auto proba = f.predict_proba({px, py});
                out.insert(out.end(), proba.begin(), proba.end());
            }
        }
        return out;
    };

    const auto a = snapshot(123, 1);
    const auto b = snapshot(123, 4);
    const auto c = snapshot(123, 1);
    const auto d = snapshot(124, 1);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a != d);
}

TEST_CASE("impurity importances are a distribution concentrated on the signal") {
    Rng rng(2024);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 150; ++i) {
        const int label = i % 2;
        X.push_back({label == 0 ? rng.normal(0.0, 0.4) : rng.normal(3.0, 0.4),
                     rng.normal(0.0, 1.0), rng.normal(5.0, 2.0)});
        y.push_back(label);
    }
    ForestParams params;
    params.n_trees = 50;
    params.seed = 3;
    Forest f;
    f.train(X, y, 2, params);

    const auto& imp = f.importances();
    REQUIRE(imp.size() == 3);
    double total = 0;
    for (double v : imp) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(imp[0] > imp[1]);
    CHECK(imp[0] > imp[2]);
    CHECK(imp[0] > 0.8);
}

TEST_CASE("three linearly ordered classes are separated") {
    Rng rng(55);
    Matrix X;
    std::vector<int> y;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 40; ++i) {
            X.push_back({5.0 * c + rng.normal(0.0, 0.5)});
            y.push_back(c);
        }
    }
    ForestParams params;
    params.n_trees = 40;
    params.seed = 17;
    Forest f;
    f.train(X, y, 3, params);
    CHECK(f.n_classes() == 3);
    CHECK(f.predict({0.0}) == 0);
    CHECK(f.predict({5.0}) == 1);
    CHECK(f.predict({10.0}) == 2);
    const auto proba = f.predict_proba({5.0});
    REQUIRE(proba.size() == 3);
    CHECK(proba[0] + proba[1] + proba[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invalid forest inputs are rejected") {
    Forest f;
    ForestParams params;
    Matrix empty;
    std::vector<int> no_labels;
    CHECK_THROWS_AS(f.train(empty, no_labels, 2, params), input_error);

    Matrix X = {{1.0}, {2.0}};
    std::vector<int> y = {0, 1};
    CHECK_THROWS_AS(f.train(X, y, 1, params), input_error);
    std::vector<int> bad = {0, 2};
    CHECK_THROWS_AS(f.train(X, bad, 2, params), input_error);
    Forest untrained;
    CHECK_THROWS_AS(untrained.predict({1.0}), internal_error);
}
