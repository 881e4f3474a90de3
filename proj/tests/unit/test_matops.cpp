#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scca/error.hpp"
#include "scca/matops.hpp"

using namespace scca;

namespace {

double orth_defect(const Matrix& q) {
    return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

}  // namespace

TEST(ThinSvd, IdentityHasUnitValues) {
    const ThinSvd s = thin_svd(Matrix::Identity(3, 3), 1e-12);
    EXPECT_EQ(s.numeric_rank, 3);
    for (Index i = 0; i < 3; ++i) EXPECT_NEAR(s.singular_values(i), 1.0, 1e-15);
}

TEST(ThinSvd, RankOneSymmetric) {
    Matrix a(2, 2);
    a << 1, 1, 1, 1;
    const ThinSvd s = thin_svd(a);
    EXPECT_EQ(s.numeric_rank, 1);
    EXPECT_NEAR(s.singular_values(0), 2.0, 1e-14);
}

TEST(ThinSvd, DuplicatedRowsMatchGramEigenvalues) {
    Matrix a = oracle::random_matrix(11, 5, 8);
    a.row(3) = a.row(0);
    a.row(4) = a.row(1);
    const ThinSvd s = thin_svd(a);
    EXPECT_EQ(s.numeric_rank, 3);

    Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 8);
    std::sort(ev.rbegin(), ev.rend());
    for (Index i = 0; i < 3; ++i) EXPECT_NEAR(s.singular_values(i), std::sqrt(ev[i]), 1e-10 * std::sqrt(ev[0]));

    const Matrix rebuilt = s.left * s.singular_values.asDiagonal() * s.right.transpose();
    EXPECT_LE((rebuilt - a).norm(), 1e-8 * a.norm());
    EXPECT_LE(orth_defect(s.left), 1e-10);
    EXPECT_LE(orth_defect(s.right), 1e-10);
}

TEST(ThinSvd, ZeroMatrixHasRankZero) {
    const ThinSvd s = thin_svd(Matrix::Zero(3, 4));
    EXPECT_EQ(s.numeric_rank, 0);
    EXPECT_EQ(s.left.cols(), 0);
    EXPECT_EQ(s.right.cols(), 0);
}

TEST(ThinSvd, RejectsNonFinite) {
    Matrix a = Matrix::Ones(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    try {
        thin_svd(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(ThinSvd, SignConventionAndDeterminism) {
    const Matrix a = oracle::random_matrix(12, 6, 9);
    const ThinSvd s1 = thin_svd(a), s2 = thin_svd(a);
    EXPECT_EQ((s1.left - s2.left).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((s1.singular_values - s2.singular_values).cwiseAbs().maxCoeff(), 0.0);
    for (Index j = 0; j < s1.left.cols(); ++j) {
        Index at;
        s1.left.col(j).cwiseAbs().maxCoeff(&at);
        EXPECT_GT(s1.left(at, j), 0.0);
    }
    for (Index i = 1; i < s1.numeric_rank; ++i) EXPECT_GE(s1.singular_values(i - 1), s1.singular_values(i));
}

TEST(ThinSvd, TransposeSwapsFactors) {
    const Matrix a = oracle::random_matrix(13, 4, 7);
    const ThinSvd t = transpose(thin_svd(a));
    EXPECT_LE((t.left * t.singular_values.asDiagonal() * t.right.transpose() - a.transpose()).norm(), 1e-10);
}

TEST(SymEig, Diagonal) {
    const SymEig e = sym_eig(Matrix(Eigen::Vector3d(4, 1, 0).asDiagonal()));
    EXPECT_NEAR(e.values(0), 4.0, 1e-15);
    EXPECT_NEAR(e.values(1), 1.0, 1e-15);
    EXPECT_EQ(e.values(2), 0.0);
    EXPECT_EQ(e.numeric_rank, 2);
}

TEST(SymEig, CenteringProjectorSpectrum) {
    const SymEig e = sym_eig(oracle::centering_projector(4));
    EXPECT_NEAR(e.values(0), 1.0, 1e-14);
    EXPECT_NEAR(e.values(1), 1.0, 1e-14);
    EXPECT_NEAR(e.values(2), 1.0, 1e-14);
    EXPECT_EQ(e.values(3), 0.0);
    EXPECT_EQ(e.numeric_rank, 3);
}

TEST(SymEig, GramValuesAreSquaredSingularValues) {
    const Matrix g = oracle::random_matrix(14, 5, 7);
    const SymEig e = sym_eig(g.transpose() * g);
    const ThinSvd s = thin_svd(g);
    ASSERT_EQ(e.numeric_rank, 5);
    for (Index i = 0; i < 5; ++i) EXPECT_NEAR(e.values(i), s.singular_values(i) * s.singular_values(i), 1e-8);
    EXPECT_LE(orth_defect(e.vectors), 1e-10);
    const Matrix k = g.transpose() * g;
    EXPECT_LE((k * e.vectors - e.vectors * e.values.asDiagonal()).norm(), 1e-8 * k.norm());
}

TEST(SymEig, RejectsAsymmetric) {
    Matrix a = Matrix::Identity(3, 3);
    a(0, 1) = 0.5;
    try {
        sym_eig(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(SymEig, RejectsIndefinite) {
    Matrix a(2, 2);
    a << 1, 0, 0, -0.5;
    try {
        sym_eig(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositiveSemidefinite);
    }
}

TEST(SymEig, ClampsTinyNegatives) {
    Matrix a(2, 2);
    a << 1, 0, 0, -1e-12;
    const SymEig e = sym_eig(a);
    EXPECT_EQ(e.values(1), 0.0);
}

TEST(PinvTimes, DiagonalCase) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2;
    Matrix b(2, 1);
    b << 4, 3;
    const Matrix x = pinv_times(thin_svd(a), b);
    EXPECT_NEAR(x(0, 0), 2.0, 1e-15);
    EXPECT_EQ(x(1, 0), 0.0);
}

TEST(PinvTimes, OrthogonalIsTranspose) {
    const Matrix q = oracle::random_orthogonal(15, 5);
    const Matrix b = oracle::random_matrix(16, 5, 2);
    EXPECT_LE((pinv_times(thin_svd(q), b) - q.transpose() * b).norm(), 1e-12);
}

TEST(PinvTimes, PenroseIdentities) {
    const Matrix a = oracle::random_matrix(17, 6, 2) * oracle::random_matrix(18, 2, 4);
    const ThinSvd s = thin_svd(a);
    ASSERT_EQ(s.numeric_rank, 2);
    const Matrix p = pinv_times(s, Matrix::Identity(6, 6));  // A^+ (4 x 6)
    EXPECT_LE((a * p * a - a).norm(), 1e-8);
    EXPECT_LE((p * a * p - p).norm(), 1e-8);
    EXPECT_LE(((a * p).transpose() - a * p).norm(), 1e-8);
    EXPECT_LE(((p * a).transpose() - p * a).norm(), 1e-8);
}

TEST(PinvTimes, RecoversRowSpaceVectors) {
    const Matrix a = oracle::random_matrix(19, 4, 3) * oracle::random_matrix(20, 3, 6);
    const ThinSvd s = thin_svd(a);
    const Vector x = a.transpose() * oracle::random_matrix(21, 4, 1);  // in the row space
    EXPECT_LE((pinv_times(s, a * x) - x).norm(), 1e-8 * x.norm());
}

TEST(PinvTimes, DimensionMismatch) {
    EXPECT_THROW(pinv_times(thin_svd(Matrix::Identity(3, 3)), Matrix::Ones(2, 1)), Error);
}

TEST(CenterColumns, Examples) {
    Matrix a(1, 2);
    a << 1, 3;
    const Matrix c = center_columns(a);
    EXPECT_EQ(c(0, 0), -1.0);
    EXPECT_EQ(c(0, 1), 1.0);

    const Matrix r = oracle::random_matrix(22, 4, 7);
    const Matrix rc = center_columns(r);
    EXPECT_LE(rc.rowwise().mean().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((center_columns(rc) - rc).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((rc - oracle::center_rows_loop(r)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(NormalizeSign, LargestEntryPositive) {
    Vector v(3);
    v << 0.1, -2.0, 1.0;
    EXPECT_TRUE(normalize_sign(v));
    EXPECT_EQ(v(1), 2.0);
    EXPECT_FALSE(normalize_sign(v));
}

TEST(SpectralNorm, MatchesPowerIteration) {
    const Matrix a = oracle::random_matrix(23, 5, 9);
    const double s = spectral_norm(a);
    EXPECT_NEAR(s * s, oracle::power_iteration(a * a.transpose()), 1e-10 * s * s);
    EXPECT_EQ(spectral_norm(Matrix::Zero(2, 2)), 0.0);
}

TEST(OrthogonalComplement, SpansTheRest) {
    const Matrix q = oracle::random_orthonormal_columns(24, 6, 2);
    const Matrix c = orthogonal_complement(q);
    ASSERT_EQ(c.cols(), 4);
    EXPECT_LE((q.transpose() * c).norm(), 1e-12);
    EXPECT_LE(orth_defect(c), 1e-12);
}

TEST(FullSvd, SquareFactors) {
    const Matrix a = oracle::random_matrix(25, 3, 5);
    const FullSvd f = full_svd(a);
    EXPECT_EQ(f.u.cols(), 3);
    EXPECT_EQ(f.v.cols(), 5);
    Matrix s = Matrix::Zero(3, 5);
    for (Index i = 0; i < 3; ++i) s(i, i) = f.s(i);
    EXPECT_LE((f.u * s * f.v.transpose() - a).norm(), 1e-12);
    EXPECT_LE(orth_defect(f.v), 1e-12);
}
