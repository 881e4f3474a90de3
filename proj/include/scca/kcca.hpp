#pragma once

// Kernel CCA through dual transforms: exact, Tikhonov-regularized, and sparse
// (l1-penalized dual least squares solved by fixed-point continuation).

#include <memory>
#include <optional>
#include <vector>

#include "scca/cca.hpp"
#include "scca/fpc.hpp"
#include "scca/kernels.hpp"
#include "scca/matops.hpp"

namespace scca {

// What a model needs to project new data from one view: the kernel, the
// training samples (absent for precomputed kernels) and the centering cache.
struct KernelView {
    KernelSpec spec = LinearKernel{};
    std::shared_ptr<const Matrix> train;
    Vector row_means;
    double grand_mean = 0.0;
};

struct KccaFactorization {
    Matrix kx;  // centered Grams
    Matrix ky;
    KernelView view_x;
    KernelView view_y;
    SymEig eig_x;
    SymEig eig_y;
    Matrix u1;  // n x r_hat
    Vector pi1;
    Matrix v1;  // n x s_hat
    Vector pi2;
    CouplingSvd coupling;  // U1^T V1 = P1 Pi P2^T
    Index n = 0;
    Index r_hat = 0;
    Index s_hat = 0;
    Index m_hat = 0;
};

enum class KccaVariant { Exact, Regularized, Sparse };

struct KccaModel {
    KccaVariant variant = KccaVariant::Exact;
    Matrix dual_x;  // n x l
    Matrix dual_y;
    // Exact: coupling singular values. Regularized and Sparse: Pearson
    // correlations of the training projections.
    Vector correlations;
    // Regularized only: leading singular values of the regularized coupling.
    Vector regularized_correlations;
    Index l = 0;
    KernelView view_x;
    KernelView view_y;
    double param_x = 0.0;  // rho (Regularized) or gamma (Sparse)
    double param_y = 0.0;
    std::vector<bool> zero_columns_x;
    std::vector<bool> zero_columns_y;
};

struct DualTargets {
    Matrix tx;  // n x l
    Matrix ty;
};

KccaFactorization kcca_factorize(const GramMatrix& kx, const GramMatrix& ky,
                                 double rank_tol = kDefaultRankTol);

// Builds and centers both Grams, keeps the training data for projection.
KccaFactorization kcca_prepare(const KernelSpec& spec_x, const Matrix& x, const KernelSpec& spec_y,
                               const Matrix& y, double rank_tol = kDefaultRankTol);

KccaModel kcca_exact(const KccaFactorization& f, Index l);

DualTargets dual_targets(const KccaFactorization& f, Index l);
// K K^+ V1 P2 Pi^-1 form, built from the stored Gram matrices.
DualTargets dual_targets_pseudoinverse(const KccaFactorization& f, Index l);

struct SparseKccaFit {
    KccaModel model;
    Vector rho_x;
    Vector rho_y;
    FpcResult fit_x;
    FpcResult fit_y;
};

// rho_{.,i} = gamma * ||K^T T_i||_inf with gamma in (0, 1).
SparseKccaFit skcca(const KccaFactorization& f, Index l, double gamma_x, double gamma_y,
                    const FpcConfig& config = {});
// Raw per-column regularizers (one value broadcasts).
SparseKccaFit skcca_with_rho(const KccaFactorization& f, Index l, const Vector& rho_x,
                             const Vector& rho_y, const FpcConfig& config = {});

KccaModel rkcca(const KccaFactorization& f, Index l, double rho_x, double rho_y);

enum class View { X, Y };

// Projects new samples (d x N) of one view: W^T K_{t,c}, an l x N matrix.
Matrix kcca_project(const KccaModel& model, View view, const Matrix& data);
// Same, from a caller-supplied uncentered n x N cross-Gram.
Matrix kcca_project_cross(const KccaModel& model, View view, const Matrix& cross_gram);
// Training projections W^T K for the centered training Gram.
Matrix kcca_training_projection(const KccaModel& model, const KccaFactorization& f, View view);

Index unit_correlation_floor(Index r_hat, Index s_hat, Index n);

// ||W^T K^2 W - I_l||_F / sqrt(l).
double dual_orth_violation(const Matrix& w, const Matrix& k);

namespace detail {
// Accepts rho = 0 so tests can compare against the unregularized solution.
KccaModel rkcca_unchecked(const KccaFactorization& f, Index l, double rho_x, double rho_y);
}  // namespace detail

}  // namespace scca
