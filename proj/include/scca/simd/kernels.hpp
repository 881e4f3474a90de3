#pragma once

// Data-parallel inner loops used by the solver and the Gram builders.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA variant. The active variant is chosen once at
// startup from the CPU features; the environment variable SCCA_SIMD
// ("scalar" or "avx2") overrides the choice. Variants are interchangeable up
// to floating-point summation order in the reductions (dot, squared_norm,
// squared_distance); the elementwise kernels are bit-identical.

#include <cstddef>
#include <span>

namespace scca::simd {

enum class Level { Scalar, Avx2 };

const char* to_string(Level level) noexcept;

// Highest level this binary and CPU can run.
Level detected_level() noexcept;

// Level currently used by the dispatching entry points below.
Level active_level() noexcept;

// Forces a level; falls back to Scalar if the requested one is unavailable.
// Returns the level actually installed.
Level set_level(Level level) noexcept;

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out = S_nu(w - tau * g), S the soft-thresholding map
    void (*shrink_step)(const double* w, const double* g, double tau, double nu, double* out,
                        std::size_t n);
    // out = S_nu(w)
    void (*soft_threshold)(const double* w, double nu, double* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;
const KernelTable& active_table() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active_table().dot(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) {
    return active_table().dot(a.data(), a.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active_table().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active_table().axpy(alpha, x.data(), y.data(), x.size());
}

inline void shrink_step(std::span<const double> w, std::span<const double> g, double tau, double nu,
                        std::span<double> out) {
    active_table().shrink_step(w.data(), g.data(), tau, nu, out.data(), w.size());
}

inline void soft_threshold(std::span<const double> w, double nu, std::span<double> out) {
    active_table().soft_threshold(w.data(), nu, out.data(), w.size());
}

}  // namespace scca::simd
