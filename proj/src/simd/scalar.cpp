#include "scca/simd/kernels.hpp"

#include <cmath>

namespace scca::simd {
namespace scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

inline double shrink(double v, double nu) {
    if (v > nu) return v - nu;
    if (v < -nu) return v + nu;
    return 0.0;
}

void shrink_step(const double* w, const double* g, double tau, double nu, double* out,
                 std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = shrink(w[i] - tau * g[i], nu);
}

void soft_threshold(const double* w, double nu, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = shrink(w[i], nu);
}

}  // namespace
}  // namespace scalar

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{scalar::dot, scalar::squared_distance, scalar::axpy,
                                   scalar::shrink_step, scalar::soft_threshold};
    return table;
}

}  // namespace scca::simd
