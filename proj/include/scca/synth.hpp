#pragma once

// Synthetic data: the nonlinear two-view example and a paired latent-topic
// model standing in for paired document collections.

#include <cstdint>
#include <vector>

#include "scca/types.hpp"

namespace scca {

struct TwoViews {
    Matrix x;
    Matrix y;
};

// Z ~ U(-2, 2); X = [Z; Z]; Y = [Z^2 + noise e1; sin(pi Z) + noise e2].
TwoViews synth_nonlinear(Index n = 500, double noise = 0.3, std::uint64_t seed = 0);

struct PairedTopics {
    Matrix x;  // d1 x n
    Matrix y;  // d2 x n
    std::vector<Index> pairing;  // pairing[i] = i
    Matrix loadings_x;  // d1 x k
    Matrix loadings_y;  // d2 x k
};

// x = A t + noise e, y = B t + noise e with t ~ N(0, I_k). The loadings come
// from their own stream, so two calls with the same seed and different n
// share A and B; draw train and test together and split to get a held-out set.
PairedTopics synth_paired_topics(Index n, Index d1, Index d2, Index k, double noise,
                                 std::uint64_t seed = 0);

// Class ids -> c x n 0/1 matrix, one row per distinct id in ascending order.
Matrix labels_to_indicator(const std::vector<int>& labels);

}  // namespace scca
