#pragma once

// Seedable generator with a fixed, documented bit stream: the engine is
// mt19937_64 (fully specified by the standard) and every distribution is
// implemented here rather than taken from <random>, whose distributions are
// implementation-defined. Independent purposes draw from separate streams
// derived from the same user seed.

#include <cstdint>
#include <random>
#include <vector>

#include "scca/types.hpp"

namespace scca {

enum class RngStream : std::uint64_t {
    Data = 1,      // synthetic data generation
    CvShuffle = 2, // cross-validation fold assignment
    Loadings = 3,  // fixed loadings of the paired-topic generator
    Test = 4,      // test fixtures
};

class Rng {
public:
    Rng(std::uint64_t seed, RngStream stream);

    std::uint64_t next() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal (Box-Muller, both outputs used).
    double normal();
    // Uniform integer in [0, n), unbiased.
    std::uint64_t below(std::uint64_t n);

    Matrix normal_matrix(Index rows, Index cols);
    Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace scca
