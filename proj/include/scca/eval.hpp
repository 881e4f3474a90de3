#pragma once

// Evaluation metrics and k-fold model selection.

#include <cstdint>
#include <functional>
#include <vector>

#include "scca/types.hpp"

namespace scca {

// Fraction of entries with |w_ij| <= zero_tol.
double sparsity(const Matrix& w, double zero_tol = 0.0);

// Sum over rows of the Pearson correlation between px(i,:) and py(i,:).
double corr_sum(const Matrix& px, const Matrix& py);

// Mann-Whitney estimate of the area under the ROC curve; ties count half.
double aroc(const std::vector<double>& scores, const std::vector<bool>& relevant);

struct RetrievalScore {
    std::vector<double> per_query_aroc;
    double mean_aroc = 0.0;
};

// Query column i of `queries` is relevant only to candidate column i; all
// candidates are ranked by cosine similarity in the projected space.
RetrievalScore paired_retrieval(const Matrix& queries, const Matrix& candidates);

std::vector<int> knn1_classify(const Matrix& train_proj, const std::vector<int>& labels,
                               const Matrix& test_proj);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

struct FoldData {
    std::vector<Index> train_index;
    std::vector<Index> test_index;
    Matrix x_train, y_train, x_test, y_test;
};

using CvObjective = std::function<double(const FoldData& fold, double candidate)>;

struct CvOutcome {
    std::vector<double> grid;
    std::vector<std::vector<double>> fold_scores;  // [candidate][fold]
    std::vector<double> mean_scores;
    std::size_t selected_index = 0;
    double selected = 0.0;
};

// Fold assignment for n samples: a seeded shuffle split into k contiguous
// blocks whose sizes differ by at most one.
std::vector<std::vector<Index>> kfold_partition(Index n, int k, std::uint64_t seed);

CvOutcome kfold_cv(const Matrix& x, const Matrix& y, const std::vector<double>& grid, int k,
                   const CvObjective& objective, std::uint64_t seed);

Matrix select_columns(const Matrix& m, const std::vector<Index>& cols);

}  // namespace scca
