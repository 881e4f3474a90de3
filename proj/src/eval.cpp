#include "scca/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scca/cca.hpp"
#include "scca/error.hpp"
#include "scca/rng.hpp"
#include "scca/simd/kernels.hpp"

namespace scca {

double sparsity(const Matrix& w, double zero_tol) {
    if (w.size() == 0) return 0.0;
    const auto zeros = (w.array().abs() <= zero_tol).count();
    return static_cast<double>(zeros) / static_cast<double>(w.size());
}

double corr_sum(const Matrix& px, const Matrix& py) {
    require(px.rows() == py.rows() && px.cols() == py.cols(), "corr_sum: shape mismatch");
    require(px.cols() >= 2, "corr_sum: need at least two samples");
    return row_correlations(px, py).sum();
}

double aroc(const std::vector<double>& scores, const std::vector<bool>& relevant) {
    require(scores.size() == relevant.size(), "aroc: one relevance flag per score");
    const std::size_t n = scores.size();
    const auto n_rel = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
    const std::size_t n_irr = n - n_rel;
    require(n_rel > 0 && n_irr > 0, "aroc: need both relevant and irrelevant candidates");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks of the relevant items.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (relevant[order[k]]) rank_sum += avg_rank;
        }
        i = j + 1;
    }
    const double r = static_cast<double>(n_rel);
    return (rank_sum - r * (r + 1.0) / 2.0) / (r * static_cast<double>(n_irr));
}

RetrievalScore paired_retrieval(const Matrix& queries, const Matrix& candidates) {
    require(queries.rows() == candidates.rows() && queries.cols() == candidates.cols(),
            "paired_retrieval: shape mismatch");
    const Index n = queries.cols();
    require(n >= 2, "paired_retrieval: need at least two pairs");
    auto unit = [](const Matrix& m) {
        Matrix out = m;
        for (Index j = 0; j < m.cols(); ++j) {
            const double norm = m.col(j).norm();
            if (norm > 0.0) out.col(j) /= norm;
        }
        return out;
    };
    const Matrix q = unit(queries);
    const Matrix c = unit(candidates);
    const Matrix sim = q.transpose() * c;

    RetrievalScore out;
    std::vector<double> scores(static_cast<std::size_t>(n));
    std::vector<bool> relevant(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            scores[static_cast<std::size_t>(j)] = sim(i, j);
            relevant[static_cast<std::size_t>(j)] = (i == j);
        }
        out.per_query_aroc.push_back(aroc(scores, relevant));
    }
    out.mean_aroc = std::accumulate(out.per_query_aroc.begin(), out.per_query_aroc.end(), 0.0) /
                    static_cast<double>(n);
    return out;
}

std::vector<int> knn1_classify(const Matrix& train_proj, const std::vector<int>& labels,
                               const Matrix& test_proj) {
    require(train_proj.cols() >= 1, "knn1_classify: need at least one training point");
    require(static_cast<std::size_t>(train_proj.cols()) == labels.size(), "knn1_classify: one label per training point");
    require(train_proj.rows() == test_proj.rows(), "knn1_classify: dimension mismatch");
    const auto rows = static_cast<std::size_t>(train_proj.rows());
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(test_proj.cols()));
    for (Index j = 0; j < test_proj.cols(); ++j) {
        const std::span<const double> q{test_proj.data() + j * test_proj.rows(), rows};
        double best = std::numeric_limits<double>::infinity();
        Index best_i = 0;
        for (Index i = 0; i < train_proj.cols(); ++i) {
            const double d = simd::squared_distance(q, {train_proj.data() + i * train_proj.rows(), rows});
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        out.push_back(labels[static_cast<std::size_t>(best_i)]);
    }
    return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    require(predicted.size() == truth.size() && !truth.empty(), "accuracy: size mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
    Matrix out(m.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
    return out;
}

std::vector<std::vector<Index>> kfold_partition(Index n, int k, std::uint64_t seed) {
    require(k >= 2, "kfold: need at least two folds");
    require(n >= k, "kfold: more folds than samples");
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    Rng rng(seed, RngStream::CvShuffle);
    rng.shuffle(idx);

    std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
    const Index base = n / k;
    const Index extra = n % k;
    Index pos = 0;
    for (int f = 0; f < k; ++f) {
        const Index size = base + (f < extra ? 1 : 0);
        folds[static_cast<std::size_t>(f)].assign(idx.begin() + pos, idx.begin() + pos + size);
        pos += size;
    }
    return folds;
}

CvOutcome kfold_cv(const Matrix& x, const Matrix& y, const std::vector<double>& grid, int k,
                   const CvObjective& objective, std::uint64_t seed) {
    require(!grid.empty(), "kfold_cv: empty candidate grid");
    require(x.cols() == y.cols(), "kfold_cv: views differ in sample count");
    const auto folds = kfold_partition(x.cols(), k, seed);

    std::vector<FoldData> data(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        FoldData& d = data[f];
        d.test_index = folds[f];
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g != f) d.train_index.insert(d.train_index.end(), folds[g].begin(), folds[g].end());
        }
        d.x_train = select_columns(x, d.train_index);
        d.y_train = select_columns(y, d.train_index);
        d.x_test = select_columns(x, d.test_index);
        d.y_test = select_columns(y, d.test_index);
    }

    CvOutcome out;
    out.grid = grid;
    for (double candidate : grid) {
        std::vector<double> scores;
        for (const FoldData& d : data) scores.push_back(objective(d, candidate));
        out.mean_scores.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) /
                                  static_cast<double>(scores.size()));
        out.fold_scores.push_back(std::move(scores));
    }
    // Ties go to the larger parameter, i.e. the stronger regularizer.
    std::size_t best = 0;
    for (std::size_t c = 1; c < grid.size(); ++c) {
        const double m = out.mean_scores[c];
        const double b = out.mean_scores[best];
        if (m > b || (m == b && grid[c] > grid[best])) best = c;
    }
    out.selected_index = best;
    out.selected = grid[best];
    return out;
}

}  // namespace scca
