#include "scca/cca.hpp"

#include <cmath>
#include <string>

#include "scca/error.hpp"

namespace scca {
namespace {

bool is_orthonormal_columns(const Matrix& q, double tol) {
    if (q.cols() == 0) return true;
    const Matrix gram = q.transpose() * q;
    return (gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix scale_rows_inverse(const Vector& s, const Matrix& m) {
    return s.cwiseInverse().asDiagonal() * m;
}

Vector broadcast(const Vector& v, Index l, const char* what) {
    if (v.size() == 1) return Vector::Constant(l, v(0));
    require(v.size() == l, std::string(what) + ": expected one value per direction");
    return v;
}

}  // namespace

CcaFactorization factorize(const Matrix& x, const Matrix& y, double rank_tol) {
    require(x.cols() == y.cols(), "factorize: x and y must have the same sample count");
    require(x.cols() >= 2, "factorize: need at least two samples");
    require(x.rows() >= 1 && y.rows() >= 1, "factorize: empty feature dimension");

    CcaFactorization f;
    f.mean_x = column_mean(x);
    f.mean_y = column_mean(y);
    f.x = center_columns(x);
    f.y = center_columns(y);
    f.svd_x = thin_svd(f.x, rank_tol);
    f.svd_y = thin_svd(f.y, rank_tol);
    f.r = f.svd_x.numeric_rank;
    f.s = f.svd_y.numeric_rank;
    if (f.r == 0 || f.s == 0) fail(ErrorKind::DegenerateData, "factorize: a view has rank 0 after centering");
    f.t = std::min(f.r, f.s);

    const FullSvd c = full_svd(f.svd_x.right.transpose() * f.svd_y.right);
    if (c.s.size() > 0 && c.s(0) > 1.0 + 1e-10) {
        fail(ErrorKind::NumericalFailure, "factorize: coupling singular value exceeds 1");
    }
    f.coupling = CouplingSvd{c.u, c.s, c.v};

    while (f.m < c.s.size() && c.s(f.m) > rank_tol) ++f.m;
    if (f.m > 0) {
        const double tol = kGroupingTol * c.s(0);
        Index size = 1;
        for (Index i = 1; i < f.m; ++i) {
            if (c.s(i - 1) - c.s(i) > tol) {
                f.groups.push_back(size);
                size = 1;
            } else {
                ++size;
            }
        }
        f.groups.push_back(size);
    }
    return f;
}

CcaModel cca_exact(const CcaFactorization& f, Index l) {
    require(l >= 1 && l <= f.t, "cca_exact: l must lie in [1, min(rank X, rank Y)]");
    CcaModel model;
    model.kind = CcaKind::Exact;
    model.l = l;
    model.wx = f.svd_x.left * scale_rows_inverse(f.svd_x.singular_values, f.coupling.p1.leftCols(l));
    model.wy = f.svd_y.left * scale_rows_inverse(f.svd_y.singular_values, f.coupling.p2.leftCols(l));
    model.correlations = f.coupling.sigma.head(l);
    model.mean_x = f.mean_x;
    model.mean_y = f.mean_y;
    return model;
}

SolutionCase solution_case(const CcaFactorization& f, Index l) {
    require(l >= 1 && l <= f.t, "general_solution: l must lie in [1, t]");
    SolutionCase c;
    if (l > f.m) {
        c.number = 3;
        c.alpha_k = f.m;
        c.g_shapes = {{f.r - f.m, l - f.m}, {f.s - f.m, l - f.m}};
        return c;
    }
    Index alpha = 0;
    for (Index size : f.groups) {
        if (l == alpha + size) {
            c.number = 1;
            c.alpha_k = l;
            return c;
        }
        if (l < alpha + size) {
            c.number = 2;
            c.alpha_k = alpha;
            c.group_size = size;
            c.g_shapes = {{size, l - alpha}};
            return c;
        }
        alpha += size;
    }
    fail(ErrorKind::InvalidState, "general_solution: inconsistent singular value groups");
}

CcaModel general_solution(const CcaFactorization& f, Index l, const SolutionFreedom& free) {
    const SolutionCase sc = solution_case(f, l);
    constexpr double tol = 1e-10;

    require(free.mix.rows() == l && free.mix.cols() == l, "general_solution: mix must be l x l");
    require(is_orthonormal_columns(free.mix, tol), "general_solution: mix is not orthogonal");
    require(free.g.size() == sc.g_shapes.size(), "general_solution: wrong number of g blocks for this case");
    for (std::size_t i = 0; i < free.g.size(); ++i) {
        require(free.g[i].rows() == sc.g_shapes[i].first && free.g[i].cols() == sc.g_shapes[i].second,
                "general_solution: g block has the wrong shape for this case");
        require(is_orthonormal_columns(free.g[i], tol), "general_solution: g is not column-orthogonal");
    }

    const Index d1 = f.x.rows();
    const Index d2 = f.y.rows();
    auto check_free = [&](const Matrix& e, Index rows, const char* name) {
        require(e.size() == 0 || (e.rows() == rows && e.cols() == l),
                std::string("general_solution: ") + name + " has the wrong shape");
    };
    check_free(free.e, d1 - f.r, "e");
    check_free(free.f, d2 - f.s, "f");

    Matrix basis_x(f.r, l), basis_y(f.s, l);
    const Matrix& p1 = f.coupling.p1;
    const Matrix& p2 = f.coupling.p2;
    switch (sc.number) {
        case 1:
            basis_x = p1.leftCols(l);
            basis_y = p2.leftCols(l);
            break;
        case 2: {
            const Index a = sc.alpha_k;
            basis_x << p1.leftCols(a), p1.middleCols(a, sc.group_size) * free.g[0];
            basis_y << p2.leftCols(a), p2.middleCols(a, sc.group_size) * free.g[0];
            break;
        }
        default: {
            const Index m = f.m;
            basis_x << p1.leftCols(m), p1.rightCols(f.r - m) * free.g[0];
            basis_y << p2.leftCols(m), p2.rightCols(f.s - m) * free.g[1];
            break;
        }
    }

    CcaModel model;
    model.kind = CcaKind::General;
    model.l = l;
    model.wx = f.svd_x.left * scale_rows_inverse(f.svd_x.singular_values, basis_x * free.mix);
    model.wy = f.svd_y.left * scale_rows_inverse(f.svd_y.singular_values, basis_y * free.mix);
    if (free.e.size() > 0) model.wx += orthogonal_complement(f.svd_x.left) * free.e;
    if (free.f.size() > 0) model.wy += orthogonal_complement(f.svd_y.left) * free.f;
    model.mean_x = f.mean_x;
    model.mean_y = f.mean_y;
    model.correlations = row_correlations(model.wx.transpose() * f.x, model.wy.transpose() * f.y);
    return model;
}

CcaTargets cca_targets(const CcaFactorization& f, Index l) {
    require(l >= 1 && l <= f.m, "cca_targets: l must lie in [1, m]");
    const Vector inv = f.coupling.sigma.head(l).cwiseInverse();
    CcaTargets out;
    out.tx = f.svd_y.right * f.coupling.p2.leftCols(l) * inv.asDiagonal();
    out.ty = f.svd_x.right * f.coupling.p1.leftCols(l) * inv.asDiagonal();
    return out;
}

CcaTargets cca_targets_pseudoinverse(const CcaFactorization& f, Index l) {
    require(l >= 1 && l <= f.m, "cca_targets: l must lie in [1, m]");
    // [(A A^T)^(1/2)]^+ from an eigendecomposition of A A^T.
    auto inv_sqrt = [](const Matrix& a, Index rank) {
        const SymEig e = sym_eig(a * a.transpose());
        const Matrix v = e.vectors.leftCols(rank);
        const Vector s = e.values.head(rank).cwiseSqrt().cwiseInverse();
        return Matrix(v * s.asDiagonal() * v.transpose());
    };
    const Vector inv = f.coupling.sigma.head(l).cwiseInverse();
    CcaTargets out;
    out.tx = f.y.transpose() * inv_sqrt(f.y, f.s) * f.svd_y.left * f.coupling.p2.leftCols(l) * inv.asDiagonal();
    out.ty = f.x.transpose() * inv_sqrt(f.x, f.r) * f.svd_x.left * f.coupling.p1.leftCols(l) * inv.asDiagonal();
    return out;
}

CcaModel cca_ls(const CcaFactorization& f, Index l) {
    const CcaTargets targets = cca_targets(f, l);
    CcaModel model;
    model.kind = CcaKind::LeastSquares;
    model.l = l;
    model.wx = pinv_times(transpose(f.svd_x), targets.tx);
    model.wy = pinv_times(transpose(f.svd_y), targets.ty);
    model.correlations = f.coupling.sigma.head(l);
    model.mean_x = f.mean_x;
    model.mean_y = f.mean_y;
    return model;
}

CcaModel cca_ls(const Matrix& x, const Matrix& y, Index l, double rank_tol) {
    return cca_ls(factorize(x, y, rank_tol), l);
}

SparseCcaFit scca_ls(const CcaFactorization& f, Index l, const Vector& lambdas_x,
                     const Vector& lambdas_y, const FpcConfig& config,
                     const std::optional<Matrix>& initial_x, const std::optional<Matrix>& initial_y) {
    const CcaTargets targets = cca_targets(f, l);
    const L1LsProblem px{f.x, targets.tx, broadcast(lambdas_x, l, "scca_ls lambdas_x")};
    const L1LsProblem py{f.y, targets.ty, broadcast(lambdas_y, l, "scca_ls lambdas_y")};

    SparseCcaFit fit;
    fit.fit_x = fpc_solve(px, config, initial_x);
    fit.fit_y = fpc_solve(py, config, initial_y);

    CcaModel& model = fit.model;
    model.kind = CcaKind::Sparse;
    model.l = l;
    model.wx = fit.fit_x.solution;
    model.wy = fit.fit_y.solution;
    model.mean_x = f.mean_x;
    model.mean_y = f.mean_y;
    model.correlations = row_correlations(model.wx.transpose() * f.x, model.wy.transpose() * f.y);
    for (Index i = 0; i < l; ++i) {
        model.zero_columns_x.push_back(model.wx.col(i).isZero(0.0));
        model.zero_columns_y.push_back(model.wy.col(i).isZero(0.0));
    }
    return fit;
}

CcaModel scca_ls(const Matrix& x, const Matrix& y, Index l, const Vector& lambdas_x,
                 const Vector& lambdas_y, const FpcConfig& config) {
    return scca_ls(factorize(x, y), l, lambdas_x, lambdas_y, config).model;
}

Projection project(const CcaModel& model, const Matrix& x_new, const Matrix* y_new) {
    require(x_new.rows() == model.wx.rows(), "project: x feature dimension mismatch");
    Projection out;
    out.x = model.wx.transpose() * (x_new.colwise() - model.mean_x);
    if (y_new) {
        require(y_new->rows() == model.wy.rows(), "project: y feature dimension mismatch");
        out.y = model.wy.transpose() * (y_new->colwise() - model.mean_y);
    }
    return out;
}

double orth_violation(const Matrix& w, const Matrix& data) {
    require(w.rows() == data.rows(), "orth_violation: dimension mismatch");
    const Index l = w.cols();
    require(l >= 1, "orth_violation: need at least one direction");
    const Matrix p = w.transpose() * data;
    return (p * p.transpose() - Matrix::Identity(l, l)).norm() / std::sqrt(static_cast<double>(l));
}

double cca_objective(const Matrix& wx, const Matrix& wy, const Matrix& x, const Matrix& y) {
    return ((wx.transpose() * x) * (y.transpose() * wy)).trace();
}

OrthBound orth_bound(double lambda, double sigma_min_nonzero, Index d1, Index l, Index nnz_subgradient) {
    require(sigma_min_nonzero > 0.0, "orth_bound: sigma must be positive");
    require(l >= 1 && nnz_subgradient >= 0 && nnz_subgradient <= d1 * l, "orth_bound: bad counts");
    const double ratio = lambda / sigma_min_nonzero;
    const double nx = static_cast<double>(nnz_subgradient);
    const double dl = static_cast<double>(d1);
    const double ll = static_cast<double>(l);
    return OrthBound{
        ratio / std::sqrt(ll) * (2.0 * std::sqrt(nx) + ratio * nx),
        ratio * std::sqrt(dl) * (2.0 + ratio * std::sqrt(ll * dl)),
    };
}

Vector row_correlations(const Matrix& px, const Matrix& py) {
    require(px.rows() == py.rows() && px.cols() == py.cols(), "row_correlations: shape mismatch");
    Vector out(px.rows());
    for (Index i = 0; i < px.rows(); ++i) {
        const Vector a = px.row(i).transpose().array() - px.row(i).mean();
        const Vector b = py.row(i).transpose().array() - py.row(i).mean();
        const double na = a.norm();
        const double nb = b.norm();
        out(i) = (na > 0.0 && nb > 0.0) ? a.dot(b) / (na * nb) : 0.0;
    }
    return out;
}

void align_signs(CcaModel& model) {
    for (Index j = 0; j < model.wx.cols(); ++j) {
        Vector col = model.wx.col(j);
        bool flip = false;
        if (!col.isZero(0.0)) {
            flip = normalize_sign(col);
        } else {
            Vector other = model.wy.col(j);
            flip = normalize_sign(other);
        }
        if (flip) {
            model.wx.col(j) = -model.wx.col(j);
            model.wy.col(j) = -model.wy.col(j);
        }
    }
}

}  // namespace scca
