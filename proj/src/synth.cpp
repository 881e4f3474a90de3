#include "scca/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scca/error.hpp"
#include "scca/matops.hpp"
#include "scca/rng.hpp"

namespace scca {

TwoViews synth_nonlinear(Index n, double noise, std::uint64_t seed) {
    require(n >= 10, "synth_nonlinear: need n >= 10");
    require(std::isfinite(noise) && noise >= 0.0, "synth_nonlinear: noise must be finite and >= 0");
    Rng rng(seed, RngStream::Data);
    TwoViews out{Matrix(2, n), Matrix(2, n)};
    // Per sample: z, then the two noise draws. Keeps the stream layout independent of n.
    for (Index j = 0; j < n; ++j) {
        const double z = rng.uniform(-2.0, 2.0);
        const double e1 = rng.normal();
        const double e2 = rng.normal();
        out.x(0, j) = z;
        out.x(1, j) = z;
        out.y(0, j) = z * z + noise * e1;
        out.y(1, j) = std::sin(std::numbers::pi * z) + noise * e2;
    }
    return out;
}

PairedTopics synth_paired_topics(Index n, Index d1, Index d2, Index k, double noise,
                                 std::uint64_t seed) {
    require(k >= 1 && n >= 2 && d1 >= 1 && d2 >= 1, "synth_paired_topics: sizes must be positive");
    require(k <= std::min({d1, d2, n}), "synth_paired_topics: need k <= min(d1, d2, n)");
    require(std::isfinite(noise) && noise >= 0.0, "synth_paired_topics: noise must be finite and >= 0");

    PairedTopics out;
    Rng load_rng(seed, RngStream::Loadings);
    // Gaussian loadings have full column rank with probability one; check anyway.
    for (int attempt = 0;; ++attempt) {
        out.loadings_x = load_rng.normal_matrix(d1, k);
        out.loadings_y = load_rng.normal_matrix(d2, k);
        if (thin_svd(out.loadings_x).numeric_rank == k && thin_svd(out.loadings_y).numeric_rank == k) break;
        if (attempt == 8) fail(ErrorKind::NumericalFailure, "synth_paired_topics: rank-deficient loadings");
    }

    Rng rng(seed, RngStream::Data);
    const Matrix topics = rng.normal_matrix(k, n);
    const Matrix ex = rng.normal_matrix(d1, n);
    const Matrix ey = rng.normal_matrix(d2, n);
    out.x = out.loadings_x * topics + noise * ex;
    out.y = out.loadings_y * topics + noise * ey;
    out.pairing.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.pairing[static_cast<std::size_t>(i)] = i;
    return out;
}

Matrix labels_to_indicator(const std::vector<int>& labels) {
    std::vector<int> classes(labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    require(classes.size() >= 2, "labels_to_indicator: need at least two classes");
    Matrix out = Matrix::Zero(static_cast<Index>(classes.size()), static_cast<Index>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const auto row = std::lower_bound(classes.begin(), classes.end(), labels[j]) - classes.begin();
        out(row, static_cast<Index>(j)) = 1.0;
    }
    return out;
}

}  // namespace scca
