#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/common.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"

using namespace nightsense;

namespace {

// Pair-counting area: ties between a positive and a negative score add 1/2.
double brute_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
    double wins = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

} // namespace

TEST_CASE("accuracy and balanced accuracy on a skewed confusion") {
    const std::vector<int> truth = {0, 0, 0, 1};
    const std::vector<int> pred = {0, 0, 1, 1};
    CHECK(accuracy_pct(truth, pred) == doctest::Approx(75.0));
    CHECK(balanced_accuracy_pct(truth, pred) ==
          doctest::Approx(100.0 * (2.0 / 3.0 + 1.0) / 2.0));
    CHECK(accuracy_pct({1, 1}, {1, 1}) == 100.0);
    CHECK_THROWS_AS(accuracy_pct({}, {}), internal_error);
    CHECK_THROWS_AS(balanced_accuracy_pct({0}, {0, 1}), internal_error);
}

TEST_CASE("a four-point ranking has area three quarters") {
    const std::vector<int> labels = {0, 0, 1, 1};
    const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
    CHECK(roc_auc_binary(labels, scores) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("a perfect ranking has area exactly one") {
    std::vector<int> labels;
    std::vector<double> scores;
    for (int i = 0; i < 50; ++i) {
        labels.push_back(0);
        scores.push_back(0.001 * i);
        labels.push_back(1);
        scores.push_back(0.5 + 0.001 * i);
    }
    CHECK(roc_auc_binary(labels, scores) == 1.0);
    for (auto& s : scores) s = -s;
    for (auto& l : labels) l = 1 - l;
    CHECK(roc_auc_binary(labels, scores) == 1.0);
}

TEST_CASE("an all-tied ranking has area exactly one half") {
    const std::vector<int> labels = {0, 1, 0, 1, 1};
    const std::vector<double> scores(5, 0.3);
    CHECK(roc_auc_binary(labels, scores) == 0.5);
}

TEST_CASE("random scores on two thousand points stay near one half") {
    Rng rng(424242);
    std::vector<int> labels;
    std::vector<double> scores;
    for (int i = 0; i < 2000; ++i) {
        labels.push_back(i % 2);
        scores.push_back(rng.uniform01());
    }
    const double auc = roc_auc_binary(labels, scores);
    CHECK(auc >= 0.45);
    CHECK(auc <= 0.55);
}

TEST_CASE("rank-sum area equals pair counting, ties included") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> labels;
        std::vector<double> scores;
        const int n = static_cast<int>(rng.uniform_int(5, 120));
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            const int l = static_cast<int>(rng.uniform_int(0, 1));
            labels.push_back(l);
            has0 = has0 || l == 0;
            has1 = has1 || l == 1;
            // Quantized scores force plenty of exact ties.
            scores.push_back(0.1 * static_cast<double>(rng.uniform_int(0, 9)));
        }
        if (!has0 || !has1) continue;
        CHECK(roc_auc_binary(labels, scores) ==
              doctest::Approx(brute_auc(labels, scores)).epsilon(1e-12));
    }
}

TEST_CASE("reversing scores mirrors the area") {
    Rng rng(7);
    std::vector<int> labels;
    std::vector<double> scores;
    for (int i = 0; i < 100; ++i) {
        labels.push_back(i % 2);
        scores.push_back(rng.normal(labels.back() * 0.8, 1.0));
    }
    std::vector<double> neg(scores);
    for (auto& s : neg) s = -s;
    CHECK(roc_auc_binary(labels, scores) ==
          doctest::Approx(1.0 - roc_auc_binary(labels, neg)).epsilon(1e-12));
}

TEST_CASE("binary area input validation") {
    CHECK_THROWS_AS(roc_auc_binary({0, 0}, {0.1, 0.2}), input_error);
    CHECK_THROWS_AS(roc_auc_binary({1, 2}, {0.1, 0.2}), input_error);
}

TEST_CASE("macro area averages one-vs-rest per present class") {
    const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
    const std::vector<std::vector<double>> proba = {
        {0.8, 0.1, 0.1}, {0.6, 0.3, 0.1}, {0.2, 0.5, 0.3},
        {0.3, 0.6, 0.1}, {0.1, 0.2, 0.7}, {0.2, 0.2, 0.6}};
    double expect = 0;
    for (int c = 0; c < 3; ++c) {
        std::vector<int> binary;
        std::vector<double> scores;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            binary.push_back(truth[i] == c ? 1 : 0);
            scores.push_back(proba[i][static_cast<std::size_t>(c)]);
        }
        expect += brute_auc(binary, scores);
    }
    expect /= 3.0;
    int skipped = -1;
    CHECK(roc_auc_macro(truth, proba, 3, &skipped) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(skipped == 0);
}

TEST_CASE("macro area skips classes absent from truth") {
    const std::vector<int> truth = {0, 0, 1, 1};
    const std::vector<std::vector<double>> proba = {
        {0.9, 0.1, 0.0}, {0.7, 0.3, 0.0}, {0.2, 0.8, 0.0}, {0.4, 0.6, 0.0}};
    int skipped = -1;
    const double auc = roc_auc_macro(truth, proba, 3, &skipped);
    CHECK(skipped == 1);
    CHECK(auc == 1.0);

    std::vector<int> one_class = {1, 1, 1};
    std::vector<std::vector<double>> p3(3, {0.5, 0.5, 0.0});
    CHECK_THROWS_AS(roc_auc_macro(one_class, p3, 3, nullptr), input_error);
}

TEST_CASE("two-class macro with complementary scores equals the binary area") {
    Rng rng(31);
    std::vector<int> truth;
    std::vector<std::vector<double>> proba;
    std::vector<double> pos_scores;
    for (int i = 0; i < 60; ++i) {
        truth.push_back(i % 2);
        const double p = rng.uniform01();
        proba.push_back({1.0 - p, p});
        pos_scores.push_back(p);
    }
    CHECK(roc_auc_macro(truth, proba, 2, nullptr) ==
          doctest::Approx(roc_auc_binary(truth, pos_scores)).epsilon(1e-12));
}
