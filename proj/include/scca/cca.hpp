#pragma once

// Linear CCA: factorization, exact and least-squares solvers, the full
// solution family, and sparse CCA by l1-penalized least squares.
//
// Data matrices are d x n with samples in columns. Every entry point centers
// its inputs and records the removed means in the returned model.

#include <vector>

#include "scca/fpc.hpp"
#include "scca/matops.hpp"
#include "scca/types.hpp"

namespace scca {

inline constexpr double kGroupingTol = 1e-8;

// SVD of the coupling matrix Q1^T Q2 with square orthogonal factors, so the
// directions beyond the nonzero singular values are available.
struct CouplingSvd {
    Matrix p1;     // r x r
    Vector sigma;  // min(r, s) values in [0, 1], nonincreasing
    Matrix p2;     // s x s
};

struct CcaFactorization {
    Matrix x;  // centered training data
    Matrix y;
    Vector mean_x;
    Vector mean_y;
    ThinSvd svd_x;  // U1, Sigma1, Q1
    ThinSvd svd_y;  // V1, Sigma2, Q2
    CouplingSvd coupling;
    Index r = 0;
    Index s = 0;
    Index m = 0;
    Index t = 0;
    // Multiplicities of the distinct nonzero coupling singular values.
    std::vector<Index> groups;
};

enum class CcaKind { Exact, LeastSquares, Sparse, General };

struct CcaModel {
    CcaKind kind = CcaKind::Exact;
    Matrix wx;  // d1 x l
    Matrix wy;  // d2 x l
    Vector correlations;
    Index l = 0;
    Vector mean_x;
    Vector mean_y;
    // Sparse models only: columns the solver drove to exactly zero.
    std::vector<bool> zero_columns_x;
    std::vector<bool> zero_columns_y;
};

struct CcaTargets {
    Matrix tx;  // n x l
    Matrix ty;
};

CcaFactorization factorize(const Matrix& x, const Matrix& y, double rank_tol = kDefaultRankTol);

CcaModel cca_exact(const CcaFactorization& f, Index l);

// Free parameters of the solution family. `g` holds no block when l closes a
// group of equal singular values, one block when l splits group k+1, and two
// blocks (x side, y side) when l exceeds the coupling rank m.
struct SolutionFreedom {
    Matrix mix;              // l x l orthogonal
    std::vector<Matrix> g;   // column-orthogonal blocks
    Matrix e;                // (d1 - r) x l, may be empty when d1 == r
    Matrix f;                // (d2 - s) x l
};

// Which parameterization applies for a given l, with the expected g shapes.
struct SolutionCase {
    int number = 1;  // 1, 2 or 3
    Index alpha_k = 0;
    Index group_size = 0;  // m_{k+1} in case 2
    std::vector<std::pair<Index, Index>> g_shapes;
};
SolutionCase solution_case(const CcaFactorization& f, Index l);

CcaModel general_solution(const CcaFactorization& f, Index l, const SolutionFreedom& free);

// Least-squares targets in the reduced form Q2 P2 Sigma^-1 / Q1 P1 Sigma^-1.
CcaTargets cca_targets(const CcaFactorization& f, Index l);
// The same targets built from the Moore-Penrose form Y^T [(Y Y^T)^(1/2)]^+ V1 P2 Sigma^-1.
CcaTargets cca_targets_pseudoinverse(const CcaFactorization& f, Index l);

CcaModel cca_ls(const Matrix& x, const Matrix& y, Index l, double rank_tol = kDefaultRankTol);
CcaModel cca_ls(const CcaFactorization& f, Index l);

struct SparseCcaFit {
    CcaModel model;
    FpcResult fit_x;
    FpcResult fit_y;
};

SparseCcaFit scca_ls(const CcaFactorization& f, Index l, const Vector& lambdas_x,
                     const Vector& lambdas_y, const FpcConfig& config = {},
                     const std::optional<Matrix>& initial_x = std::nullopt,
                     const std::optional<Matrix>& initial_y = std::nullopt);
CcaModel scca_ls(const Matrix& x, const Matrix& y, Index l, const Vector& lambdas_x,
                 const Vector& lambdas_y, const FpcConfig& config = {});

struct Projection {
    Matrix x;  // l x N
    Matrix y;  // l x N, empty when no y data was given
};

Projection project(const CcaModel& model, const Matrix& x_new, const Matrix* y_new = nullptr);

// ||W^T X X^T W - I_l||_F / sqrt(l), X already centered.
double orth_violation(const Matrix& w, const Matrix& data);

// trace(Wx^T X Y^T Wy) on centered data.
double cca_objective(const Matrix& wx, const Matrix& wy, const Matrix& x, const Matrix& y);

struct OrthBound {
    double tight;
    double loose;
};
OrthBound orth_bound(double lambda, double sigma_min_nonzero, Index d1, Index l,
                     Index nnz_subgradient);

// Per-direction Pearson correlation between rows of two projection matrices;
// zero-variance rows give 0.
Vector row_correlations(const Matrix& px, const Matrix& py);

// Flips column pairs so the largest-magnitude entry of each wx column is positive.
void align_signs(CcaModel& model);

}  // namespace scca
