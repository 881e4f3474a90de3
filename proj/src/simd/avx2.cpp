// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached through the
// dispatch table after a CPU feature check.
#include "scca/simd/kernels.hpp"

#if defined(SCCA_HAVE_AVX2)

#include <immintrin.h>

namespace scca::simd {
namespace avx2 {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// mul + add rather than fmadd keeps axpy bit-identical to the scalar kernel.
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

inline __m256d shrink(__m256d v, __m256d nu, __m256d neg_nu) {
    const __m256d above = _mm256_cmp_pd(v, nu, _CMP_GT_OQ);
    const __m256d below = _mm256_cmp_pd(v, neg_nu, _CMP_LT_OQ);
    const __m256d hi = _mm256_and_pd(above, _mm256_sub_pd(v, nu));
    const __m256d lo = _mm256_and_pd(below, _mm256_add_pd(v, nu));
    return _mm256_or_pd(hi, lo);
}

inline double shrink1(double v, double nu) {
    if (v > nu) return v - nu;
    if (v < -nu) return v + nu;
    return 0.0;
}

void shrink_step(const double* w, const double* g, double tau, double nu, double* out,
                 std::size_t n) {
    const __m256d vt = _mm256_set1_pd(tau);
    const __m256d vn = _mm256_set1_pd(nu);
    const __m256d vnn = _mm256_set1_pd(-nu);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d step = _mm256_mul_pd(vt, _mm256_loadu_pd(g + i));
        const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(w + i), step);
        _mm256_storeu_pd(out + i, shrink(v, vn, vnn));
    }
    for (; i < n; ++i) out[i] = shrink1(w[i] - tau * g[i], nu);
}

void soft_threshold(const double* w, double nu, double* out, std::size_t n) {
    const __m256d vn = _mm256_set1_pd(nu);
    const __m256d vnn = _mm256_set1_pd(-nu);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, shrink(_mm256_loadu_pd(w + i), vn, vnn));
    for (; i < n; ++i) out[i] = shrink1(w[i], nu);
}

}  // namespace
}  // namespace avx2

const KernelTable* avx2_table() noexcept {
    static const KernelTable table{avx2::dot, avx2::squared_distance, avx2::axpy,
                                   avx2::shrink_step, avx2::soft_threshold};
    return &table;
}

}  // namespace scca::simd

#else

namespace scca::simd {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace scca::simd

#endif
