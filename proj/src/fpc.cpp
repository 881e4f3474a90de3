#include "scca/fpc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "scca/error.hpp"
#include "scca/matops.hpp"
#include "scca/simd/kernels.hpp"

namespace scca {
namespace {

constexpr double kMinBbStep = 1e-8;

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> column(const Matrix& m, Index j) {
    return {m.data() + j * m.rows(), static_cast<std::size_t>(m.rows())};
}

// Evaluates g = A (A^T w - t). When d <= n the normal matrix A A^T is formed
// once and reused; otherwise two passes over A are cheaper.
class GradientOperator {
public:
    explicit GradientOperator(const Matrix& a) : a_(a), use_normal_(a.rows() <= a.cols()) {
        if (use_normal_) normal_ = a * a.transpose();
    }

    Vector rhs(const Vector& t) const { return a_ * t; }

    void apply(const Vector& w, const Vector& t, const Vector& rhs, Vector& g, Vector& scratch) const {
        const Index d = a_.rows();
        if (use_normal_) {
            for (Index j = 0; j < d; ++j) g(j) = simd::dot(column(normal_, j), view(w)) - rhs(j);
            return;
        }
        const Index n = a_.cols();
        scratch.resize(n);
        for (Index k = 0; k < n; ++k) scratch(k) = simd::dot(column(a_, k), view(w)) - t(k);
        g.setZero();
        for (Index k = 0; k < n; ++k) simd::axpy(scratch(k), column(a_, k), view(g));
    }

private:
    const Matrix& a_;
    bool use_normal_;
    Matrix normal_;
};

double residual_from_gradient(const Vector& w, const Vector& g, double lambda) {
    double r = 0.0;
    for (Index j = 0; j < w.size(); ++j) {
        if (w(j) != 0.0) {
            r = std::max(r, std::abs(g(j) + lambda * (w(j) > 0.0 ? 1.0 : -1.0)));
        } else {
            r = std::max(r, std::abs(g(j)) - lambda);
        }
    }
    return r;
}

double objective_value(const Matrix& a, const Vector& w, const Vector& t, double lambda) {
    return 0.5 * (a.transpose() * w - t).squaredNorm() + lambda * w.lpNorm<1>();
}

struct ColumnOutcome {
    Vector solution;
    Vector gradient;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

ColumnOutcome solve_column(const GradientOperator& op, const Matrix& a, const Vector& t,
                           double lambda, const FpcConfig& config, double base_step,
                           double max_step, Vector w, Index column_index) {
    const Index d = a.rows();
    const Vector rhs = op.rhs(t);
    // The absolute floor only makes sense for designs of moderate scale; a
    // Gram matrix can push 2/lambda_max far below it.
    const double min_step = std::min(kMinBbStep, 1e-8 * max_step);
    const double opt_tol = config.optimality_tol * (1.0 + t.norm());

    Vector g(d), g_new(d), w_new(d), scratch;
    op.apply(w, t, rhs, g, scratch);

    ColumnOutcome out;
    const int stages = std::max(config.continuation_stages, 1);
    for (int stage = 0; stage < stages; ++stage) {
        const bool last = stage == stages - 1;
        const double stage_lambda = lambda * std::pow(config.continuation_factor, stages - 1 - stage);
        double tau = base_step;
        while (out.iterations < config.max_iters) {
            simd::shrink_step(view(w), view(g), tau, tau * stage_lambda, view(w_new));
            op.apply(w_new, t, rhs, g_new, scratch);
            ++out.iterations;

            const double change = (w_new - w).norm();
            const double rel = change / std::max(w.norm(), 1.0);
            if (!std::isfinite(rel) || !g_new.allFinite()) {
                fail(ErrorKind::NumericalFailure,
                     "fpc_solve: non-finite iterate in column " + std::to_string(column_index));
            }
            if (config.use_bb_steps) {
                const Vector s = w_new - w;
                const double sy = s.dot(g_new - g);
                tau = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, min_step, max_step) : base_step;
            }
            w.swap(w_new);
            g.swap(g_new);
            if (config.record_objective) out.trace.push_back(objective_value(a, w, t, stage_lambda));

            if (rel < config.xtol) {
                if (!last) break;
                if (residual_from_gradient(w, g, lambda) <= opt_tol) {
                    out.converged = true;
                    break;
                }
            }
        }
        if (out.iterations >= config.max_iters) break;
    }
    out.solution = std::move(w);
    out.gradient = std::move(g);
    return out;
}

void validate(const L1LsProblem& p, const FpcConfig& c) {
    require(p.a.rows() >= 1 && p.a.cols() >= 1, "fpc_solve: empty design matrix");
    require(p.targets.rows() == p.a.cols(), "fpc_solve: target rows must equal sample count");
    require(p.lambdas.size() == p.targets.cols(), "fpc_solve: one lambda per target column");
    require((p.lambdas.array() > 0.0).all(), "fpc_solve: lambdas must be positive");
    require(c.xtol > 0.0, "fpc_solve: xtol must be positive");
    require(c.max_iters >= 1, "fpc_solve: max_iters must be positive");
    require(c.continuation_factor > 1.0, "fpc_solve: continuation_factor must exceed 1");
    require(c.optimality_tol > 0.0, "fpc_solve: optimality_tol must be positive");
    check_finite(p.a, "fpc_solve design");
    check_finite(p.targets, "fpc_solve targets");
}

}  // namespace

double soft_threshold(double w, double nu) {
    if (w > nu) return w - nu;
    if (w < -nu) return w + nu;
    return 0.0;
}

Matrix soft_threshold(const Matrix& w, double nu) {
    Matrix out(w.rows(), w.cols());
    simd::soft_threshold({w.data(), static_cast<std::size_t>(w.size())}, nu,
                         {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

double max_lambda(const Matrix& a, const Vector& t) {
    require(a.cols() == t.size(), "max_lambda: dimension mismatch");
    return (a * t).cwiseAbs().maxCoeff();
}

double default_step(const Matrix& a) {
    const double s = spectral_norm(a);
    require(s > 0.0, "default_step: zero matrix");
    return 1.0 / (s * s);
}

FpcResult fpc_solve(const L1LsProblem& problem, const FpcConfig& config,
                    const std::optional<Matrix>& initial) {
    validate(problem, config);
    const Index d = problem.a.rows();
    const Index cols = problem.targets.cols();
    if (initial) {
        require(initial->rows() == d && initial->cols() == cols, "fpc_solve: initial iterate shape");
    }

    const double sigma = spectral_norm(problem.a);
    require(sigma > 0.0, "fpc_solve: zero design matrix");
    const double lambda_max = sigma * sigma;
    const double max_step = 1.999 / lambda_max;
    double base_step = 1.0 / lambda_max;
    if (config.step) {
        require(*config.step > 0.0 && *config.step < 2.0 / lambda_max,
                "fpc_solve: step must lie in (0, 2 / lambda_max(A A^T))");
        base_step = *config.step;
    }

    const GradientOperator op(problem.a);
    std::vector<ColumnOutcome> outcomes(static_cast<std::size_t>(cols));
    auto run = [&](Index i) {
        Vector w0 = initial ? Vector(initial->col(i)) : Vector::Zero(d);
        outcomes[static_cast<std::size_t>(i)] =
            solve_column(op, problem.a, problem.targets.col(i), problem.lambdas(i), config,
                         base_step, max_step, std::move(w0), i);
    };

    const int threads = std::clamp<int>(config.threads, 1, static_cast<int>(std::max<Index>(cols, 1)));
    if (threads == 1) {
        for (Index i = 0; i < cols; ++i) run(i);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (Index i = t; i < cols; i += threads) run(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    FpcResult result;
    result.solution.resize(d, cols);
    result.final_gradient.resize(d, cols);
    result.objective.resize(cols);
    for (Index i = 0; i < cols; ++i) {
        auto& o = outcomes[static_cast<std::size_t>(i)];
        result.solution.col(i) = o.solution;
        result.final_gradient.col(i) = o.gradient;
        result.iterations.push_back(o.iterations);
        result.converged.push_back(o.converged);
        result.objective(i) =
            objective_value(problem.a, o.solution, problem.targets.col(i), problem.lambdas(i));
        result.objective_trace.push_back(std::move(o.trace));
    }
    return result;
}

Vector optimality_residual(const L1LsProblem& problem, const Matrix& w) {
    require(w.rows() == problem.a.rows() && w.cols() == problem.targets.cols(),
            "optimality_residual: shape mismatch");
    const Matrix g = problem.a * (problem.a.transpose() * w - problem.targets);
    Vector r(w.cols());
    for (Index i = 0; i < w.cols(); ++i) {
        r(i) = std::max(0.0, residual_from_gradient(w.col(i), g.col(i), problem.lambdas(i)));
    }
    return r;
}

Vector l1ls_objective(const L1LsProblem& problem, const Matrix& w) {
    Vector out(w.cols());
    for (Index i = 0; i < w.cols(); ++i) {
        out(i) = objective_value(problem.a, w.col(i), problem.targets.col(i), problem.lambdas(i));
    }
    return out;
}

}  // namespace scca
