#include "scca/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "scca/error.hpp"
#include "scca/matops.hpp"
#include "scca/simd/kernels.hpp"

namespace scca {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::span<const double> column(const Matrix& m, Index j) {
    return {m.data() + j * m.rows(), static_cast<std::size_t>(m.rows())};
}

// Kernel value from the inner product and the two squared norms.
double from_inner(const KernelSpec& spec, double ab, double aa, double bb) {
    return std::visit(
        overloaded{
            [&](const LinearKernel&) { return ab; },
            [&](const PolynomialKernel& p) { return std::pow(p.gamma1 * ab + p.gamma2, p.degree); },
            [&](const GaussianKernel& g) {
                const double d2 = std::max(aa + bb - 2.0 * ab, 0.0);
                return std::exp(-d2 / (2.0 * g.sigma * g.sigma));
            },
            [&](const PrecomputedKernel&) -> double {
                fail(ErrorKind::InvalidInput, "precomputed kernels have no pointwise evaluation");
            },
        },
        spec);
}

Vector squared_norms(const Matrix& data) {
    Vector out(data.cols());
    for (Index j = 0; j < data.cols(); ++j) out(j) = simd::squared_norm(column(data, j));
    return out;
}

// Runs body(i) for i in [0, n), split into contiguous blocks across threads.
// Each index is computed identically regardless of the split.
template <class F>
void for_blocks(Index n, F body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const Index blocks = std::min<Index>(static_cast<Index>(hw), n / 128 + 1);
    if (blocks <= 1) {
        for (Index i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const Index per = (n + blocks - 1) / blocks;
    for (Index b = 0; b < blocks; ++b) {
        pool.emplace_back([=] {
            for (Index i = b * per; i < std::min(n, (b + 1) * per); ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

void validate(const KernelSpec& spec) {
    std::visit(overloaded{
                   [](const LinearKernel&) {},
                   [](const PolynomialKernel& p) {
                       require(p.degree > 0.0, "polynomial kernel degree must be positive");
                   },
                   [](const GaussianKernel& g) {
                       require(g.sigma > 0.0 && std::isfinite(g.sigma), "gaussian sigma must be positive");
                   },
                   [](const PrecomputedKernel&) {},
               },
               spec);
}

std::string describe(const KernelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const LinearKernel&) { os << "linear"; },
                   [&](const PolynomialKernel& p) {
                       os << "poly:" << p.gamma1 << ':' << p.gamma2 << ':' << p.degree;
                   },
                   [&](const GaussianKernel& g) { os << "gaussian:" << g.sigma; },
                   [&](const PrecomputedKernel&) { os << "precomputed"; },
               },
               spec);
    return os.str();
}

KernelSpec parse_kernel(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (;;) {
        const auto colon = text.find(':', pos);
        parts.emplace_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }
    auto number = [&](const std::string& s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            fail(ErrorKind::InvalidInput, "kernel spec '" + std::string(text) + "': bad number '" + s + "'");
        }
        return v;
    };
    KernelSpec spec;
    if (parts[0] == "linear" && parts.size() == 1) {
        spec = LinearKernel{};
    } else if (parts[0] == "precomputed" && parts.size() == 1) {
        spec = PrecomputedKernel{};
    } else if (parts[0] == "gaussian" && parts.size() == 2) {
        spec = GaussianKernel{number(parts[1])};
    } else if ((parts[0] == "poly" || parts[0] == "polynomial") && parts.size() == 4) {
        spec = PolynomialKernel{number(parts[1]), number(parts[2]), number(parts[3])};
    } else {
        fail(ErrorKind::InvalidInput, "unrecognized kernel spec '" + std::string(text) + "'");
    }
    validate(spec);
    return spec;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "kernel_eval: vectors differ in length");
    validate(spec);
    return from_inner(spec, simd::dot(a, b), simd::squared_norm(a), simd::squared_norm(b));
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& left, const Matrix& right) {
    validate(spec);
    require(!std::holds_alternative<PrecomputedKernel>(spec),
            "cross_gram: precomputed kernels need a caller-supplied cross-Gram");
    require(left.rows() == right.rows(), "cross_gram: feature dimensions differ");
    check_finite(left, "cross_gram left");
    check_finite(right, "cross_gram right");
    const Vector nl = squared_norms(left);
    const Vector nr = squared_norms(right);
    Matrix k(left.cols(), right.cols());
    for_blocks(right.cols(), [&](Index j) {
        for (Index i = 0; i < left.cols(); ++i) {
            k(i, j) = from_inner(spec, simd::dot(column(left, i), column(right, j)), nl(i), nr(j));
        }
    });
    return k;
}

GramMatrix gram(const KernelSpec& spec, const Matrix& data) {
    validate(spec);
    require(!std::holds_alternative<PrecomputedKernel>(spec),
            "gram: use precomputed_gram for precomputed kernels");
    require(data.cols() >= 2, "gram: need at least two samples");
    check_finite(data, "gram input");
    const Index n = data.cols();
    const Vector norms = squared_norms(data);
    GramMatrix g;
    g.source_spec = spec;
    g.values.resize(n, n);
    // Upper triangle once, mirrored.
    for_blocks(n, [&](Index j) {
        for (Index i = 0; i <= j; ++i) {
            g.values(i, j) = from_inner(spec, simd::dot(column(data, i), column(data, j)), norms(i), norms(j));
        }
    });
    for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i < n; ++i) g.values(i, j) = g.values(j, i);
    }
    return g;
}

GramMatrix precomputed_gram(const Matrix& values) {
    require(values.rows() == values.cols() && values.rows() >= 2, "precomputed Gram must be square, n >= 2");
    check_finite(values, "precomputed Gram");
    const double scale = values.cwiseAbs().maxCoeff();
    require((values - values.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
            "precomputed Gram is not symmetric");
    GramMatrix g;
    g.values = 0.5 * (values + values.transpose());
    g.source_spec = PrecomputedKernel{};
    return g;
}

GramMatrix center_train(const GramMatrix& k) {
    if (k.centered) fail(ErrorKind::InvalidState, "center_train: Gram matrix is already centered");
    const Index n = k.values.rows();
    GramMatrix out;
    out.source_spec = k.source_spec;
    out.train_row_means = k.values.rowwise().mean();
    out.grand_mean = out.train_row_means.mean();
    out.values.resize(n, n);
    const Vector& mu = out.train_row_means;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            out.values(i, j) = k.values(i, j) - mu(i) - mu(j) + out.grand_mean;
        }
    }
    out.values = 0.5 * (out.values + out.values.transpose()).eval();
    out.centered = true;
    return out;
}

Matrix center_test(const GramMatrix& k_train, const Matrix& k_cross) {
    if (!k_train.centered || k_train.train_row_means.size() != k_train.values.rows()) {
        fail(ErrorKind::InvalidState, "center_test: training Gram lacks the centering cache");
    }
    require(k_cross.rows() == k_train.values.rows(), "center_test: cross-Gram must have n rows");
    const Vector col_means = k_cross.colwise().mean().transpose();
    Matrix out(k_cross.rows(), k_cross.cols());
    const Vector& mu = k_train.train_row_means;
    for (Index j = 0; j < k_cross.cols(); ++j) {
        for (Index i = 0; i < k_cross.rows(); ++i) {
            out(i, j) = k_cross(i, j) - col_means(j) - mu(i) + k_train.grand_mean;
        }
    }
    return out;
}

double default_sigma(const Matrix& data, SigmaMode mode) {
    require(data.cols() >= 2, "default_sigma: need at least two points");
    check_finite(data, "default_sigma input");
    const Vector norms = squared_norms(data);
    double best = mode == SigmaMode::MaxDistance ? 0.0 : std::numeric_limits<double>::infinity();
    for (Index j = 0; j < data.cols(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const double ab = simd::dot(column(data, i), column(data, j));
            const double d2 = std::max(norms(i) + norms(j) - 2.0 * ab, 0.0);
            if (mode == SigmaMode::MaxDistance) {
                best = std::max(best, d2);
            } else if (d2 > 0.0) {
                best = std::min(best, d2);
            }
        }
    }
    if (mode == SigmaMode::MinDistance && !std::isfinite(best)) {
        fail(ErrorKind::DegenerateData, "default_sigma: all points coincide");
    }
    if (mode == SigmaMode::MaxDistance && best == 0.0) {
        fail(ErrorKind::DegenerateData, "default_sigma: all points coincide");
    }
    return std::sqrt(best);
}

}  // namespace scca
