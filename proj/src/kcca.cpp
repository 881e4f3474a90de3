#include "scca/kcca.hpp"

#include <cmath>
#include <string>

#include "scca/error.hpp"

namespace scca {
namespace {

Vector broadcast(const Vector& v, Index l, const char* what) {
    if (v.size() == 1) return Vector::Constant(l, v(0));
    require(v.size() == l, std::string(what) + ": expected one value per direction");
    return v;
}

KernelView view_of(const GramMatrix& g) {
    return KernelView{g.source_spec, nullptr, g.train_row_means, g.grand_mean};
}

void copy_views(const KccaFactorization& f, KccaModel& model) {
    model.view_x = f.view_x;
    model.view_y = f.view_y;
}

}  // namespace

KccaFactorization kcca_factorize(const GramMatrix& kx, const GramMatrix& ky, double rank_tol) {
    if (!kx.centered || !ky.centered) fail(ErrorKind::InvalidState, "kcca_factorize: Grams must be centered");
    require(kx.values.rows() == ky.values.rows(), "kcca_factorize: Grams differ in sample count");

    KccaFactorization f;
    f.n = kx.values.rows();
    f.kx = kx.values;
    f.ky = ky.values;
    f.view_x = view_of(kx);
    f.view_y = view_of(ky);
    f.eig_x = sym_eig(f.kx, rank_tol);
    f.eig_y = sym_eig(f.ky, rank_tol);
    f.r_hat = f.eig_x.numeric_rank;
    f.s_hat = f.eig_y.numeric_rank;
    if (f.r_hat == 0 || f.s_hat == 0) fail(ErrorKind::DegenerateData, "kcca_factorize: a Gram matrix has rank 0");
    f.u1 = f.eig_x.vectors.leftCols(f.r_hat);
    f.pi1 = f.eig_x.values.head(f.r_hat);
    f.v1 = f.eig_y.vectors.leftCols(f.s_hat);
    f.pi2 = f.eig_y.values.head(f.s_hat);

    const FullSvd c = full_svd(f.u1.transpose() * f.v1);
    if (c.s.size() > 0 && c.s(0) > 1.0 + 1e-10) {
        fail(ErrorKind::NumericalFailure, "kcca_factorize: coupling singular value exceeds 1");
    }
    f.coupling = CouplingSvd{c.u, c.s, c.v};
    while (f.m_hat < c.s.size() && c.s(f.m_hat) > rank_tol) ++f.m_hat;
    return f;
}

KccaFactorization kcca_prepare(const KernelSpec& spec_x, const Matrix& x, const KernelSpec& spec_y,
                               const Matrix& y, double rank_tol) {
    require(x.cols() == y.cols(), "kcca_prepare: views differ in sample count");
    KccaFactorization f = kcca_factorize(center_train(gram(spec_x, x)), center_train(gram(spec_y, y)), rank_tol);
    f.view_x.train = std::make_shared<const Matrix>(x);
    f.view_y.train = std::make_shared<const Matrix>(y);
    return f;
}

KccaModel kcca_exact(const KccaFactorization& f, Index l) {
    require(l >= 1 && l <= std::min(f.r_hat, f.s_hat), "kcca_exact: l must lie in [1, min(r_hat, s_hat)]");
    KccaModel model;
    model.variant = KccaVariant::Exact;
    model.l = l;
    model.dual_x = f.u1 * (f.pi1.cwiseInverse().asDiagonal() * f.coupling.p1.leftCols(l));
    model.dual_y = f.v1 * (f.pi2.cwiseInverse().asDiagonal() * f.coupling.p2.leftCols(l));
    model.correlations = f.coupling.sigma.head(l);
    copy_views(f, model);
    return model;
}

DualTargets dual_targets(const KccaFactorization& f, Index l) {
    require(l >= 1 && l <= f.m_hat, "dual_targets: l must lie in [1, m_hat]");
    return DualTargets{f.u1 * f.coupling.p1.leftCols(l), f.v1 * f.coupling.p2.leftCols(l)};
}

DualTargets dual_targets_pseudoinverse(const KccaFactorization& f, Index l) {
    require(l >= 1 && l <= f.m_hat, "dual_targets: l must lie in [1, m_hat]");
    const ThinSvd sx = thin_svd(f.kx);
    const ThinSvd sy = thin_svd(f.ky);
    // K K^+ is the orthogonal projector onto range(K).
    const Matrix proj_x = f.kx * pinv_times(sx, Matrix::Identity(f.n, f.n));
    const Matrix proj_y = f.ky * pinv_times(sy, Matrix::Identity(f.n, f.n));
    const Vector inv = f.coupling.sigma.head(l).cwiseInverse();
    return DualTargets{proj_x * f.v1 * f.coupling.p2.leftCols(l) * inv.asDiagonal(),
                       proj_y * f.u1 * f.coupling.p1.leftCols(l) * inv.asDiagonal()};
}

SparseKccaFit skcca_with_rho(const KccaFactorization& f, Index l, const Vector& rho_x,
                             const Vector& rho_y, const FpcConfig& config) {
    const DualTargets targets = dual_targets(f, l);
    SparseKccaFit fit;
    fit.rho_x = broadcast(rho_x, l, "skcca rho_x");
    fit.rho_y = broadcast(rho_y, l, "skcca rho_y");
    fit.fit_x = fpc_solve(L1LsProblem{f.kx, targets.tx, fit.rho_x}, config);
    fit.fit_y = fpc_solve(L1LsProblem{f.ky, targets.ty, fit.rho_y}, config);

    KccaModel& model = fit.model;
    model.variant = KccaVariant::Sparse;
    model.l = l;
    model.dual_x = fit.fit_x.solution;
    model.dual_y = fit.fit_y.solution;
    model.correlations = row_correlations(model.dual_x.transpose() * f.kx, model.dual_y.transpose() * f.ky);
    for (Index i = 0; i < l; ++i) {
        model.zero_columns_x.push_back(model.dual_x.col(i).isZero(0.0));
        model.zero_columns_y.push_back(model.dual_y.col(i).isZero(0.0));
    }
    copy_views(f, model);
    return fit;
}

SparseKccaFit skcca(const KccaFactorization& f, Index l, double gamma_x, double gamma_y,
                    const FpcConfig& config) {
    require(gamma_x > 0.0 && gamma_x < 1.0 && gamma_y > 0.0 && gamma_y < 1.0,
            "skcca: gamma multipliers must lie in (0, 1)");
    const DualTargets targets = dual_targets(f, l);
    Vector rho_x(l), rho_y(l);
    for (Index i = 0; i < l; ++i) {
        rho_x(i) = gamma_x * max_lambda(f.kx, targets.tx.col(i));
        rho_y(i) = gamma_y * max_lambda(f.ky, targets.ty.col(i));
    }
    SparseKccaFit fit = skcca_with_rho(f, l, rho_x, rho_y, config);
    fit.model.param_x = gamma_x;
    fit.model.param_y = gamma_y;
    return fit;
}

namespace detail {

KccaModel rkcca_unchecked(const KccaFactorization& f, Index l, double rho_x, double rho_y) {
    require(l >= 1 && l <= f.m_hat, "rkcca: l must lie in [1, m_hat]");
    const Vector dx = (f.pi1.array() / (f.pi1.array() + rho_x)).sqrt();
    const Vector dy = (f.pi2.array() / (f.pi2.array() + rho_y)).sqrt();
    const FullSvd c = full_svd(dx.asDiagonal() * (f.u1.transpose() * f.v1) * dy.asDiagonal());

    const Vector sx = (f.pi1.array().square() + rho_x * f.pi1.array()).rsqrt();
    const Vector sy = (f.pi2.array().square() + rho_y * f.pi2.array()).rsqrt();

    KccaModel model;
    model.variant = KccaVariant::Regularized;
    model.l = l;
    model.param_x = rho_x;
    model.param_y = rho_y;
    model.dual_x = f.u1 * (sx.asDiagonal() * c.u.leftCols(l));
    model.dual_y = f.v1 * (sy.asDiagonal() * c.v.leftCols(l));
    model.regularized_correlations = c.s.head(l);
    model.correlations = row_correlations(model.dual_x.transpose() * f.kx, model.dual_y.transpose() * f.ky);
    copy_views(f, model);
    return model;
}

}  // namespace detail

KccaModel rkcca(const KccaFactorization& f, Index l, double rho_x, double rho_y) {
    require(rho_x > 0.0 && rho_y > 0.0, "rkcca: regularizers must be positive");
    return detail::rkcca_unchecked(f, l, rho_x, rho_y);
}

Matrix kcca_project_cross(const KccaModel& model, View view, const Matrix& cross_gram) {
    const KernelView& kv = view == View::X ? model.view_x : model.view_y;
    const Matrix& dual = view == View::X ? model.dual_x : model.dual_y;
    require(cross_gram.rows() == dual.rows(), "kcca_project: cross-Gram must have n rows");
    GramMatrix cache;
    cache.centered = true;
    cache.values = Matrix(dual.rows(), 0);
    cache.train_row_means = kv.row_means;
    cache.grand_mean = kv.grand_mean;
    if (cache.train_row_means.size() != dual.rows()) {
        fail(ErrorKind::InvalidState, "kcca_project: model lacks the centering cache");
    }
    return dual.transpose() * center_test(cache, cross_gram);
}

Matrix kcca_project(const KccaModel& model, View view, const Matrix& data) {
    const KernelView& kv = view == View::X ? model.view_x : model.view_y;
    if (std::holds_alternative<PrecomputedKernel>(kv.spec) || !kv.train) {
        fail(ErrorKind::InvalidInput, "kcca_project: precomputed-kernel models need a cross-Gram");
    }
    return kcca_project_cross(model, view, cross_gram(kv.spec, *kv.train, data));
}

Matrix kcca_training_projection(const KccaModel& model, const KccaFactorization& f, View view) {
    return view == View::X ? Matrix(model.dual_x.transpose() * f.kx) : Matrix(model.dual_y.transpose() * f.ky);
}

Index unit_correlation_floor(Index r_hat, Index s_hat, Index n) {
    return std::max<Index>(r_hat + s_hat - n, 0);
}

double dual_orth_violation(const Matrix& w, const Matrix& k) {
    require(w.rows() == k.rows(), "dual_orth_violation: dimension mismatch");
    const Index l = w.cols();
    require(l >= 1, "dual_orth_violation: need at least one direction");
    const Matrix kw = k * w;
    return (kw.transpose() * kw - Matrix::Identity(l, l)).norm() / std::sqrt(static_cast<double>(l));
}

}  // namespace scca
