#pragma once

// Dense factorizations and small helpers shared by every other module.
//
// Sign convention: every singular/eigen vector is flipped so that its entry
// of largest magnitude (first one on ties) is positive. For an SVD the left
// vector decides and the paired right vector follows.

#include "scca/types.hpp"

namespace scca {

struct ThinSvd {
    Matrix left;             // m x k, orthonormal columns
    Vector singular_values;  // k values, nonincreasing, all above tolerance
    Matrix right;            // n x k, orthonormal columns
    Index numeric_rank = 0;  // k
};

struct SymEig {
    Matrix vectors;  // n x n, orthonormal columns
    Vector values;   // n values, nonincreasing; small negatives clamped to 0
    Index numeric_rank = 0;
};

ThinSvd thin_svd(const Matrix& a, double rank_tol = kDefaultRankTol);

// Transposes a factorization: svd(A) -> svd(A^T).
ThinSvd transpose(const ThinSvd& svd);

SymEig sym_eig(const Matrix& a, double rank_tol = kDefaultRankTol);

// A^+ b using only the retained singular triplets.
Matrix pinv_times(const ThinSvd& svd, const Matrix& b);

// Subtracts the mean column (mean of each row across samples).
Matrix center_columns(const Matrix& a);
Vector column_mean(const Matrix& a);

void check_finite(const Matrix& a, const char* what);

// Flips the sign of a vector so its largest-magnitude entry is positive.
// Returns true when a flip happened.
bool normalize_sign(Eigen::Ref<Vector> v);

// ||A||_2 via the leading singular value (0 for a zero matrix).
double spectral_norm(const Matrix& a);

// Orthonormal basis of the complement of span(q), q with orthonormal columns.
Matrix orthogonal_complement(const Matrix& q);

// Full SVD A = U diag(s) V^T with square U, V; s has min(rows, cols) entries.
// Used for the small coupling matrices where null-space directions matter.
struct FullSvd {
    Matrix u;
    Vector s;
    Matrix v;
};
FullSvd full_svd(const Matrix& a);

}  // namespace scca
