#pragma once

#include <vector>

#include "rng.hpp"

namespace nightsense {

// Balances a training matrix in place. Every class is brought to
// T = min(2 x smallest class, largest class): classes below T gain synthetic
// points x + u (x_nn - x) toward one of their k nearest same-class neighbors
// (Euclidean distance), classes above T are undersampled without
// replacement. Rows are expected to be standardized, fully imputed features.
// A class with a single member cannot donate neighbors and is an error.
void smote_balance(std::vector<std::vector<double>>& X, std::vector<int>& y, int k, Rng& rng);

} // namespace nightsense
