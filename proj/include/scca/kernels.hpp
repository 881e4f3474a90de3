#pragma once

// Kernel functions, Gram matrices, and centering of training and test Grams
// in feature space.

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "scca/types.hpp"

namespace scca {

struct LinearKernel {};
struct PolynomialKernel {
    double gamma1 = 1.0;
    double gamma2 = 0.0;
    double degree = 1.0;
};
struct GaussianKernel {
    double sigma = 1.0;
};
// The caller supplies Gram matrices directly; no pointwise evaluation.
struct PrecomputedKernel {};

using KernelSpec = std::variant<LinearKernel, PolynomialKernel, GaussianKernel, PrecomputedKernel>;

void validate(const KernelSpec& spec);
// "linear", "gaussian:<sigma>", "poly:<gamma1>:<gamma2>:<degree>", "precomputed".
std::string describe(const KernelSpec& spec);
// Inverse of describe; round-trips exactly.
KernelSpec parse_kernel(std::string_view text);

struct GramMatrix {
    Matrix values;  // n x n
    bool centered = false;
    KernelSpec source_spec = LinearKernel{};
    // Means of the uncentered matrix, cached by center_train.
    Vector train_row_means;
    double grand_mean = 0.0;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

// Kernel matrix between the columns of `left` (d x n) and `right` (d x N).
Matrix cross_gram(const KernelSpec& spec, const Matrix& left, const Matrix& right);

GramMatrix gram(const KernelSpec& spec, const Matrix& data);

// Wraps a user-supplied symmetric matrix as an uncentered Precomputed Gram.
GramMatrix precomputed_gram(const Matrix& values);

GramMatrix center_train(const GramMatrix& k);

// Centers an n x N cross-Gram against the cached training means.
Matrix center_test(const GramMatrix& k_train, const Matrix& k_cross);

enum class SigmaMode { MaxDistance, MinDistance };

double default_sigma(const Matrix& data, SigmaMode mode);

}  // namespace scca
