#pragma once

// Fixed-point continuation for multi-column l1-regularized least squares
//
//   min_w  1/2 ||A^T w - t_i||^2 + lambda_i ||w||_1      (one problem per column i)
//
// with A stored d x n (features x samples), so solutions live in R^d.

#include <optional>
#include <vector>

#include "scca/types.hpp"

namespace scca {

struct L1LsProblem {
    Matrix a;        // d x n design
    Matrix targets;  // n x c, one column per subproblem
    Vector lambdas;  // c positive regularizers
};

struct FpcConfig {
    std::optional<double> step;  // fixed step tau; empty = 1 / lambda_max(A A^T)
    double xtol = 1e-5;
    int max_iters = 10000;  // per column, summed over continuation stages
    bool use_bb_steps = true;
    int continuation_stages = 4;
    double continuation_factor = 4.0;
    // A column is reported converged only if its optimality residual is below
    // optimality_tol * (1 + ||t_i||_2) once the relative change drops below xtol.
    double optimality_tol = 1e-4;
    bool record_objective = false;
    int threads = 1;
};

struct FpcResult {
    Matrix solution;  // d x c
    std::vector<int> iterations;
    std::vector<bool> converged;
    Matrix final_gradient;  // A (A^T w - t), d x c
    Vector objective;
    // Objective after each iteration, filled only with record_objective.
    std::vector<std::vector<double>> objective_trace;
};

double soft_threshold(double w, double nu);
Matrix soft_threshold(const Matrix& w, double nu);

// ||A t||_inf: the smallest lambda for which w = 0 is optimal.
double max_lambda(const Matrix& a, const Vector& t);

// 1 / lambda_max(A A^T).
double default_step(const Matrix& a);

FpcResult fpc_solve(const L1LsProblem& problem, const FpcConfig& config = {},
                    const std::optional<Matrix>& initial = std::nullopt);

// Per column: max_j |g_j + lambda sign(w_j)| over the support and
// max(|g_j| - lambda, 0) off it, with g = A (A^T w - t).
Vector optimality_residual(const L1LsProblem& problem, const Matrix& w);

// 1/2 ||A^T w - t||^2 + lambda ||w||_1 for each column.
Vector l1ls_objective(const L1LsProblem& problem, const Matrix& w);

}  // namespace scca
