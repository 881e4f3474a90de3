#include "scca/matops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scca/error.hpp"

namespace scca {
namespace {

// Indices sorting values nonincreasingly; stable so ties keep discovery order.
std::vector<Index> descending_order(const Vector& values) {
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return values(a) > values(b); });
    return order;
}

}  // namespace

void check_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) fail(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

bool normalize_sign(Eigen::Ref<Vector> v) {
    if (v.size() == 0) return false;
    Index best = 0;
    double best_abs = std::abs(v(0));
    for (Index i = 1; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (v(best) < 0.0) {
        v = -v;
        return true;
    }
    return false;
}

ThinSvd thin_svd(const Matrix& a, double rank_tol) {
    require(rank_tol > 0.0 && rank_tol < 1.0, "thin_svd: rank_tol must lie in (0, 1)");
    check_finite(a, "thin_svd input");

    ThinSvd out;
    const Index k = std::min(a.rows(), a.cols());
    if (k == 0 || a.isZero(0.0)) {
        out.left = Matrix(a.rows(), 0);
        out.right = Matrix(a.cols(), 0);
        out.singular_values = Vector(0);
        return out;
    }

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "thin_svd did not converge");

    const Vector& s = svd.singularValues();
    const std::vector<Index> order = descending_order(s);
    const double cutoff = rank_tol * s(order.front());
    Index rank = 0;
    while (rank < k && s(order[static_cast<std::size_t>(rank)]) > cutoff) ++rank;

    out.left.resize(a.rows(), rank);
    out.right.resize(a.cols(), rank);
    out.singular_values.resize(rank);
    for (Index j = 0; j < rank; ++j) {
        const Index src = order[static_cast<std::size_t>(j)];
        out.left.col(j) = svd.matrixU().col(src);
        out.right.col(j) = svd.matrixV().col(src);
        out.singular_values(j) = s(src);
        Vector col = out.left.col(j);
        if (normalize_sign(col)) {
            out.left.col(j) = col;
            out.right.col(j) = -out.right.col(j);
        }
    }
    out.numeric_rank = rank;
    return out;
}

ThinSvd transpose(const ThinSvd& svd) {
    return ThinSvd{svd.right, svd.singular_values, svd.left, svd.numeric_rank};
}

SymEig sym_eig(const Matrix& a, double rank_tol) {
    require(rank_tol > 0.0 && rank_tol < 1.0, "sym_eig: rank_tol must lie in (0, 1)");
    require(a.rows() == a.cols() && a.rows() > 0, "sym_eig: matrix must be square and nonempty");
    check_finite(a, "sym_eig input");

    const double scale = a.cwiseAbs().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) fail(ErrorKind::InvalidInput, "sym_eig: matrix is not symmetric");

    SymEig out;
    const Index n = a.rows();
    if (scale == 0.0) {
        out.vectors = Matrix::Identity(n, n);
        out.values = Vector::Zero(n);
        return out;
    }

    // Symmetrize exactly so the solver sees a self-adjoint matrix.
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "sym_eig did not converge");

    const Vector& values = eig.eigenvalues();
    const std::vector<Index> order = descending_order(values);
    const double top = std::max(values(order.front()), 0.0);
    const double magnitude = std::max(top, values.cwiseAbs().maxCoeff());
    if (values.minCoeff() < -1e-6 * magnitude) {
        fail(ErrorKind::NotPositiveSemidefinite, "sym_eig: eigenvalue below -1e-6 * max");
    }

    out.vectors.resize(n, n);
    out.values.resize(n);
    for (Index j = 0; j < n; ++j) {
        const Index src = order[static_cast<std::size_t>(j)];
        Vector v = eig.eigenvectors().col(src);
        normalize_sign(v);
        out.vectors.col(j) = v;
        out.values(j) = std::max(values(src), 0.0);
    }
    const double cutoff = rank_tol * out.values(0);
    Index rank = 0;
    while (rank < n && out.values(rank) > cutoff) ++rank;
    out.numeric_rank = rank;
    return out;
}

Matrix pinv_times(const ThinSvd& svd, const Matrix& b) {
    require(svd.left.rows() == b.rows(), "pinv_times: dimension mismatch");
    const Vector inv = svd.singular_values.cwiseInverse();
    return svd.right * (inv.asDiagonal() * (svd.left.transpose() * b));
}

Vector column_mean(const Matrix& a) {
    require(a.cols() >= 1, "column_mean: need at least one column");
    return a.rowwise().mean();
}

Matrix center_columns(const Matrix& a) {
    check_finite(a, "center_columns input");
    return a.colwise() - column_mean(a);
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0 || a.isZero(0.0)) return 0.0;
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix orthogonal_complement(const Matrix& q) {
    const Index n = q.rows();
    const Index k = q.cols();
    if (k == 0) return Matrix::Identity(n, n);
    Eigen::HouseholderQR<Matrix> qr(q);
    const Matrix full = qr.householderQ() * Matrix::Identity(n, n);
    return full.rightCols(n - k);
}

FullSvd full_svd(const Matrix& a) {
    check_finite(a, "full_svd input");
    FullSvd out;
    const Index k = std::min(a.rows(), a.cols());
    if (k == 0) {
        out.u = Matrix::Identity(a.rows(), a.rows());
        out.v = Matrix::Identity(a.cols(), a.cols());
        out.s = Vector(0);
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "full_svd did not converge");
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.s = svd.singularValues();
    // JacobiSVD already sorts nonincreasingly; only signs need fixing.
    for (Index j = 0; j < out.u.cols(); ++j) {
        Vector col = out.u.col(j);
        if (normalize_sign(col)) {
            out.u.col(j) = col;
            if (j < k) out.v.col(j) = -out.v.col(j);
        }
    }
    for (Index j = k; j < out.v.cols(); ++j) {
        Vector col = out.v.col(j);
        if (normalize_sign(col)) out.v.col(j) = col;
    }
    return out;
}

}  // namespace scca
