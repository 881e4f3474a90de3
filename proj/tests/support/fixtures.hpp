#pragma once

// Data with a prescribed coupling structure, for tests that need exact
// multiplicities of canonical correlations or exact Gram ranks.

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "scca/types.hpp"

namespace fixture {

using scca::Index;
using scca::Matrix;
using scca::Vector;

// Orthonormal columns spanning part of the centered sample space (every
// column orthogonal to the all-ones vector).
inline Matrix centered_orthonormal(std::uint64_t seed, Index n, Index k) {
    Matrix g(n, k + 1);
    g.col(0) = Vector::Ones(n);
    g.rightCols(k) = oracle::random_matrix(seed, n, k);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, k + 1);
    return q.rightCols(k);
}

struct Pair {
    Matrix x;  // d1 x n, centered
    Matrix y;  // d2 x n, centered
};

// Row spaces with principal-angle cosines `cosines` (one per shared
// direction) plus extra_x / extra_y directions orthogonal to everything.
// rank X = cosines.size() + extra_x, rank Y = cosines.size() + extra_y.
inline Pair engineered_pair(std::uint64_t seed, Index n, Index d1, Index d2, const std::vector<double>& cosines,
                            Index extra_x = 0, Index extra_y = 0) {
    const Index k = static_cast<Index>(cosines.size());
    const Index r = k + extra_x, s = k + extra_y;
    const Matrix basis = centered_orthonormal(seed, n, 2 * k + extra_x + extra_y);
    Matrix q1(n, r), q2(n, s);
    for (Index i = 0; i < k; ++i) {
        const double c = cosines[static_cast<std::size_t>(i)];
        const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        q1.col(i) = basis.col(i);
        q2.col(i) = c * basis.col(i) + sn * basis.col(k + i);
    }
    for (Index i = 0; i < extra_x; ++i) q1.col(k + i) = basis.col(2 * k + i);
    for (Index i = 0; i < extra_y; ++i) q2.col(k + i) = basis.col(2 * k + extra_x + i);

    scca::Rng rng(seed + 17, scca::RngStream::Test);
    auto scales = [&](Index m) {
        Vector v(m);
        for (Index i = 0; i < m; ++i) v(i) = rng.uniform(1.0, 3.0);
        return v;
    };
    const Matrix u1 = oracle::random_orthonormal_columns(seed + 1, d1, r);
    const Matrix v1 = oracle::random_orthonormal_columns(seed + 2, d2, s);
    Pair p;
    p.x = u1 * scales(r).asDiagonal() * q1.transpose();
    p.y = v1 * scales(s).asDiagonal() * q2.transpose();
    return p;
}

// Centered PSD Gram of exact rank `rank` (n x n): B B^T with B spanning a
// random subspace of the centered sample space.
inline Matrix centered_gram_of_rank(std::uint64_t seed, Index n, Index rank) {
    const Matrix b = centered_orthonormal(seed, n, rank);
    scca::Rng rng(seed + 5, scca::RngStream::Test);
    Vector w(rank);
    for (Index i = 0; i < rank; ++i) w(i) = rng.uniform(0.5, 4.0);
    Matrix k = b * w.asDiagonal() * b.transpose();
    return 0.5 * (k + k.transpose());
}

}  // namespace fixture
