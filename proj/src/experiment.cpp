#include "scca/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "scca/cca.hpp"
#include "scca/error.hpp"
#include "scca/io.hpp"
#include "scca/kcca.hpp"
#include "scca/kernels.hpp"
#include "scca/synth.hpp"

namespace scca {
namespace {

struct Dataset {
    Matrix x, y;
    Matrix x_test, y_test;
    bool has_test = false;
    bool classification = false;
    std::vector<int> labels, labels_test;
};

Matrix load_matrix(const std::string& path, const DataSource& src) {
    return src.sparse ? load_sparse_triplets(path) : load_dense(path, src.header);
}

// Indicator rows follow the training classes, so test indicators line up.
Matrix indicator_for(const std::vector<int>& labels, const std::vector<int>& classes) {
    Matrix out = Matrix::Zero(static_cast<Index>(classes.size()), static_cast<Index>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), labels[j]);
        if (it != classes.end() && *it == labels[j]) out(it - classes.begin(), static_cast<Index>(j)) = 1.0;
    }
    return out;
}

std::vector<int> distinct(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Dataset load_data(const ExperimentConfig& c) {
    const DataSource& s = c.data;
    Dataset d;
    if (s.synth != SynthKind::None) {
        require(s.n_test >= 0, "data: n_test must be >= 0");
        Matrix x, y;
        if (s.synth == SynthKind::Nonlinear) {
            TwoViews v = synth_nonlinear(s.n + s.n_test, s.noise, c.seed);
            x = std::move(v.x);
            y = std::move(v.y);
        } else {
            PairedTopics v = synth_paired_topics(s.n + s.n_test, s.d1, s.d2, s.topics, s.noise, c.seed);
            x = std::move(v.x);
            y = std::move(v.y);
        }
        d.x = x.leftCols(s.n);
        d.y = y.leftCols(s.n);
        if (s.n_test > 0) {
            d.x_test = x.rightCols(s.n_test);
            d.y_test = y.rightCols(s.n_test);
            d.has_test = true;
        }
        return d;
    }

    require(!s.x.empty(), "data: no x input (give --x or a generator)");
    d.x = load_matrix(s.x, s);
    if (!s.labels.empty()) {
        d.classification = true;
        d.labels = labels_from_matrix(load_dense(s.labels, s.header));
        require(static_cast<Index>(d.labels.size()) == d.x.cols(), "data: one label per training sample required");
    }
    if (!s.y.empty()) {
        d.y = load_matrix(s.y, s);
    } else {
        require(d.classification, "data: no y input and no labels");
        d.y = labels_to_indicator(d.labels);
    }
    if (!s.x_test.empty()) {
        d.has_test = true;
        d.x_test = load_matrix(s.x_test, s);
        if (!s.labels_test.empty()) {
            d.labels_test = labels_from_matrix(load_dense(s.labels_test, s.header));
            require(static_cast<Index>(d.labels_test.size()) == d.x_test.cols(),
                    "data: one label per test sample required");
        }
        if (!s.y_test.empty()) {
            d.y_test = load_matrix(s.y_test, s);
        } else {
            require(d.classification && !d.labels_test.empty(), "data: test x given without test y or labels");
            d.y_test = indicator_for(d.labels_test, distinct(d.labels));
        }
    }
    return d;
}

KernelSpec resolve_kernel(const std::string& text, std::optional<double> sigma, const Matrix& train) {
    if (text == "gaussian") {
        return GaussianKernel{sigma ? *sigma : default_sigma(train, SigmaMode::MaxDistance)};
    }
    if (text == "gaussian:max") return GaussianKernel{default_sigma(train, SigmaMode::MaxDistance)};
    if (text == "gaussian:min") return GaussianKernel{default_sigma(train, SigmaMode::MinDistance)};
    return parse_kernel(text);
}

bool is_precomputed(const KernelSpec& k) { return std::holds_alternative<PrecomputedKernel>(k); }

Index resolve_l(const std::optional<Index>& l, Index m, const char* what) {
    if (!l) {
        if (m < 1) fail(ErrorKind::DegenerateData, std::string(what) + ": no nonzero canonical correlation");
        return m;
    }
    require(*l >= 1, std::string(what) + ": l must be >= 1");
    return *l;
}

using Params = std::vector<std::pair<std::string, std::string>>;

struct Fit {
    bool kernel = false;
    CcaModel linear;
    KccaModel kmodel;
    bool precomputed_x = false;
    bool precomputed_y = false;
    Matrix ref_x, ref_y;  // centered data or centered Grams, for Err
    Matrix train_px, train_py;
    Vector train_corr;
    Params params;
};

Vector lambda_vector(const std::vector<double>& v) {
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i];
    return out;
}

std::string join_numbers(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_number(v[i]);
    }
    return s;
}

Fit fit_model(const ExperimentConfig& c, const Matrix& x, const Matrix& y) {
    Fit fit;
    const char* name = "fit";
    if (!is_kernel_method(c.method)) {
        const CcaFactorization f = factorize(x, y, c.rank_tol);
        const Index l = resolve_l(c.l, f.m, name);
        if (c.method == Method::Cca) {
            fit.linear = cca_exact(f, l);
        } else {
            const Vector lam = lambda_vector(c.lambda);
            fit.linear = scca_ls(f, l, lam, lam, c.fpc).model;
            fit.params.emplace_back("lambda", join_numbers(c.lambda));
        }
        fit.ref_x = f.x;
        fit.ref_y = f.y;
        fit.train_px = fit.linear.wx.transpose() * f.x;
        fit.train_py = fit.linear.wy.transpose() * f.y;
        fit.train_corr = fit.linear.correlations;
        return fit;
    }

    fit.kernel = true;
    const KernelSpec kx = resolve_kernel(c.kernel_x, c.sigma, x);
    const KernelSpec ky = resolve_kernel(c.kernel_y, c.sigma, y);
    fit.precomputed_x = is_precomputed(kx);
    fit.precomputed_y = is_precomputed(ky);
    KccaFactorization f;
    {
        auto build = [&](const KernelSpec& spec, const Matrix& data) {
            return is_precomputed(spec) ? center_train(precomputed_gram(data)) : center_train(gram(spec, data));
        };
        f = kcca_factorize(build(kx, x), build(ky, y), c.rank_tol);
        if (!fit.precomputed_x) f.view_x.train = std::make_shared<const Matrix>(x);
        if (!fit.precomputed_y) f.view_y.train = std::make_shared<const Matrix>(y);
    }
    fit.params.emplace_back("kernel_x", describe(kx));
    fit.params.emplace_back("kernel_y", describe(ky));
    const Index l = resolve_l(c.l, f.m_hat, name);
    switch (c.method) {
        case Method::Kcca:
            fit.kmodel = kcca_exact(f, l);
            break;
        case Method::Rkcca:
            fit.kmodel = rkcca(f, l, *c.rho, *c.rho);
            fit.params.emplace_back("rho", format_number(*c.rho));
            break;
        case Method::Skcca:
            if (c.rho) {
                const Vector r = Vector::Constant(1, *c.rho);
                fit.kmodel = skcca_with_rho(f, l, r, r, c.fpc).model;
                fit.params.emplace_back("rho", format_number(*c.rho));
            } else {
                const double gx = c.gamma_x ? *c.gamma_x : *c.gamma_y;
                const double gy = c.gamma_y ? *c.gamma_y : *c.gamma_x;
                fit.kmodel = skcca(f, l, gx, gy, c.fpc).model;
                fit.params.emplace_back("gamma_x", format_number(gx));
                fit.params.emplace_back("gamma_y", format_number(gy));
            }
            break;
        default:
            break;
    }
    fit.ref_x = f.kx;
    fit.ref_y = f.ky;
    fit.train_px = kcca_training_projection(fit.kmodel, f, View::X);
    fit.train_py = kcca_training_projection(fit.kmodel, f, View::Y);
    fit.train_corr = fit.kmodel.correlations;
    return fit;
}

const Matrix& wx_of(const Fit& f) { return f.kernel ? f.kmodel.dual_x : f.linear.wx; }
const Matrix& wy_of(const Fit& f) { return f.kernel ? f.kmodel.dual_y : f.linear.wy; }

std::pair<Matrix, Matrix> project_fit(const Fit& f, const Matrix& x, const Matrix& y) {
    if (!f.kernel) {
        Projection p = project(f.linear, x, &y);
        return {std::move(p.x), std::move(p.y)};
    }
    Matrix px = f.precomputed_x ? kcca_project_cross(f.kmodel, View::X, x) : kcca_project(f.kmodel, View::X, x);
    Matrix py = f.precomputed_y ? kcca_project_cross(f.kmodel, View::Y, y) : kcca_project(f.kmodel, View::Y, y);
    return {std::move(px), std::move(py)};
}

// Retrieval AROC, or 1-NN accuracy when labels define the task.
void score(ResultRecord& r, const Matrix& px, const Matrix& py, const Matrix& train_px,
           const std::vector<int>& train_labels, const std::vector<int>* truth, bool classification) {
    r.corr_sum = px.cols() >= 2 ? corr_sum(px, py) : 0.0;
    if (classification) {
        if (truth && !truth->empty()) r.accuracy = accuracy(knn1_classify(train_px, train_labels, px), *truth);
    } else {
        r.aroc = paired_retrieval(px, py).mean_aroc;
    }
}

double prefix_score(const Matrix& px, const Matrix& py, Index l, const Matrix& train_px,
                    const std::vector<int>& train_labels, const std::vector<int>* truth, bool classification) {
    ResultRecord r;
    score(r, px.topRows(l), py.topRows(l), train_px.topRows(l), train_labels, truth, classification);
    if (r.accuracy) return *r.accuracy;
    if (r.aroc) return *r.aroc;
    return r.corr_sum;
}

Matrix row_matrix(const std::vector<int>& v) {
    Matrix m(1, static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Index>(i)) = v[i];
    return m;
}

struct Assembled {
    RunOutput out;
    Dataset data;
    Fit fit;
};

Assembled fit_and_score(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    Assembled a;
    a.data = load_data(c);
    const Dataset& d = a.data;
    a.fit = fit_model(c, d.x, d.y);
    const Fit& fit = a.fit;

    RunOutput& out = a.out;
    out.kernel = fit.kernel;
    out.wx = wx_of(fit);
    out.wy = wy_of(fit);
    out.train_proj_x = fit.train_px;
    out.train_proj_y = fit.train_py;
    if (d.has_test) {
        auto [px, py] = project_fit(fit, d.x_test, d.y_test);
        out.eval_proj_x = std::move(px);
        out.eval_proj_y = std::move(py);
    } else {
        out.eval_proj_x = fit.train_px;
        out.eval_proj_y = fit.train_py;
    }

    ResultRecord& r = out.record;
    r.method = to_string(c.method);
    r.evaluated_on = d.has_test ? "test" : "train";
    r.l = out.wx.cols();
    r.parameters = fit.params;
    r.train_correlations = fit.train_corr;
    r.sparsity_x = sparsity(out.wx);
    r.sparsity_y = sparsity(out.wy);
    r.err_x = fit.kernel ? dual_orth_violation(out.wx, fit.ref_x) : orth_violation(out.wx, fit.ref_x);
    r.err_y = fit.kernel ? dual_orth_violation(out.wy, fit.ref_y) : orth_violation(out.wy, fit.ref_y);
    const std::vector<int>* truth = d.has_test ? &d.labels_test : &d.labels;
    score(r, out.eval_proj_x, out.eval_proj_y, fit.train_px, d.labels, truth, d.classification);

    // Model directory contents.
    out.model_keys.emplace_back("method", r.method);
    out.model_keys.emplace_back("l", std::to_string(r.l));
    out.model_keys.emplace_back("classification", d.classification ? "1" : "0");
    out.model_files.emplace_back("wx.csv", out.wx);
    out.model_files.emplace_back("wy.csv", out.wy);
    out.model_files.emplace_back("train_projection_x.csv", fit.train_px);
    if (d.classification) out.model_files.emplace_back("train_labels.csv", row_matrix(d.labels));
    if (fit.kernel) {
        const KccaModel& m = fit.kmodel;
        out.model_keys.emplace_back("kernel_x", describe(m.view_x.spec));
        out.model_keys.emplace_back("kernel_y", describe(m.view_y.spec));
        out.model_keys.emplace_back("grand_mean_x", format_number(m.view_x.grand_mean));
        out.model_keys.emplace_back("grand_mean_y", format_number(m.view_y.grand_mean));
        out.model_files.emplace_back("row_means_x.csv", Matrix(m.view_x.row_means));
        out.model_files.emplace_back("row_means_y.csv", Matrix(m.view_y.row_means));
        if (!fit.precomputed_x) out.model_files.emplace_back("train_x.csv", d.x);
        if (!fit.precomputed_y) out.model_files.emplace_back("train_y.csv", d.y);
    } else {
        out.model_files.emplace_back("mean_x.csv", Matrix(fit.linear.mean_x));
        out.model_files.emplace_back("mean_y.csv", Matrix(fit.linear.mean_y));
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a;
}

void finish(const ExperimentConfig& c, const RunOutput& out) {
    if (!c.out_dir.empty()) write_artifacts(c.out_dir, out);
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "cca") return Method::Cca;
    if (name == "scca") return Method::Scca;
    if (name == "kcca") return Method::Kcca;
    if (name == "rkcca") return Method::Rkcca;
    if (name == "skcca") return Method::Skcca;
    fail(ErrorKind::InvalidInput, "unknown method '" + name + "' (cca, scca, kcca, rkcca, skcca)");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Cca: return "cca";
        case Method::Scca: return "scca";
        case Method::Kcca: return "kcca";
        case Method::Rkcca: return "rkcca";
        case Method::Skcca: return "skcca";
    }
    return "?";
}

bool is_kernel_method(Method m) { return m == Method::Kcca || m == Method::Rkcca || m == Method::Skcca; }

void validate_config(const ExperimentConfig& c, bool cv_mode) {
    const bool has_lambda = !c.lambda.empty();
    const bool has_gamma = c.gamma_x.has_value() || c.gamma_y.has_value();
    const bool has_rho = c.rho.has_value();
    const std::string m = to_string(c.method);
    auto none_except = [&](bool lambda_ok, bool gamma_ok, bool rho_ok) {
        if ((has_lambda && !lambda_ok) || (has_gamma && !gamma_ok) || (has_rho && !rho_ok)) {
            fail(ErrorKind::InvalidInput, m + ": regularizer given that this method does not use");
        }
    };
    if (!is_kernel_method(c.method)) {
        require(c.kernel_x == "linear" && c.kernel_y == "linear", m + ": kernels apply to kcca, rkcca and skcca only");
        require(!c.sigma, m + ": --sigma applies to kernel methods only");
    }
    if (cv_mode) {
        require(c.method != Method::Cca && c.method != Method::Kcca, m + ": nothing to cross-validate");
        require(!c.cv_grid.empty(), "cv: empty grid");
        require(c.cv_folds >= 2, "cv: need at least two folds");
        none_except(false, false, false);
        return;
    }
    switch (c.method) {
        case Method::Cca:
        case Method::Kcca:
            none_except(false, false, false);
            break;
        case Method::Scca:
            none_except(true, false, false);
            require(has_lambda, "scca: --lambda is required");
            for (double v : c.lambda) require(v > 0.0 && std::isfinite(v), "scca: lambda must be positive");
            break;
        case Method::Rkcca:
            none_except(false, false, true);
            require(has_rho, "rkcca: --rho is required");
            require(*c.rho > 0.0 && std::isfinite(*c.rho), "rkcca: rho must be positive");
            break;
        case Method::Skcca:
            none_except(false, true, true);
            require(has_gamma != has_rho, "skcca: give either --gamma-x/--gamma-y or --rho, not both");
            if (has_rho) require(*c.rho > 0.0 && std::isfinite(*c.rho), "skcca: rho must be positive");
            break;
    }
}

RunOutput run(const ExperimentConfig& config) {
    validate_config(config);
    Assembled a = fit_and_score(config);
    finish(config, a.out);
    return std::move(a.out);
}

RunOutput sweep_l(const ExperimentConfig& config) {
    validate_config(config);
    Assembled a = fit_and_score(config);
    const Dataset& d = a.data;
    const std::vector<int>* truth = d.has_test ? &d.labels_test : &d.labels;
    for (Index l = 1; l <= a.out.wx.cols(); ++l) {
        // Column i of every method depends only on target i, so prefixes of
        // the widest fit equal separate fits at each l.
        a.out.sweep.emplace_back(l, prefix_score(a.out.eval_proj_x, a.out.eval_proj_y, l, a.fit.train_px, d.labels,
                                                 truth, d.classification));
    }
    finish(config, a.out);
    return std::move(a.out);
}

RunOutput cross_validate(const ExperimentConfig& config) {
    validate_config(config, true);
    require(config.kernel_x != "precomputed" && config.kernel_y != "precomputed",
            "cv: precomputed kernels cannot be split into folds");
    const Dataset d = load_data(config);

    auto with = [&](double v) {
        ExperimentConfig c = config;
        switch (c.method) {
            case Method::Scca: c.lambda = {v}; break;
            case Method::Rkcca: c.rho = v; break;
            case Method::Skcca: c.gamma_x = v; c.gamma_y = v; break;
            default: break;
        }
        return c;
    };
    const CvObjective objective = [&](const FoldData& fold, double candidate) {
        const Fit fit = fit_model(with(candidate), fold.x_train, fold.y_train);
        auto [px, py] = project_fit(fit, fold.x_test, fold.y_test);
        if (d.classification) {
            std::vector<int> tr, te;
            for (Index i : fold.train_index) tr.push_back(d.labels[static_cast<std::size_t>(i)]);
            for (Index i : fold.test_index) te.push_back(d.labels[static_cast<std::size_t>(i)]);
            return accuracy(knn1_classify(fit.train_px, tr, px), te);
        }
        return corr_sum(px, py);
    };
    const CvOutcome cv = kfold_cv(d.x, d.y, config.cv_grid, config.cv_folds, objective, config.seed);

    ExperimentConfig final_config = with(cv.selected);
    final_config.cv_grid.clear();
    validate_config(final_config);
    Assembled a = fit_and_score(final_config);
    a.out.cv = cv;
    finish(config, a.out);
    return std::move(a.out);
}

std::string result_key_values(const ResultRecord& r) {
    KeyValueWriter w;
    w.add("method", r.method);
    w.add("evaluated_on", r.evaluated_on);
    w.add("l", static_cast<long long>(r.l));
    for (const auto& [k, v] : r.parameters) w.add("param." + k, v);
    w.add("corr_sum", r.corr_sum);
    if (r.aroc) w.add("aroc", *r.aroc);
    if (r.accuracy) w.add("accuracy", *r.accuracy);
    w.add("sparsity_x", r.sparsity_x);
    w.add("sparsity_y", r.sparsity_y);
    w.add("err_x", r.err_x);
    w.add("err_y", r.err_y);
    for (Index i = 0; i < r.train_correlations.size(); ++i) {
        w.add("train_correlation." + std::to_string(i + 1), r.train_correlations(i));
    }
    return w.str();
}

std::string result_table(const ResultRecord& r) {
    auto cell = [](std::string s, std::size_t width) {
        if (s.size() < width) s.insert(0, width - s.size(), ' ');
        return s;
    };
    const std::string score_name = r.accuracy ? "accuracy" : "aroc";
    const std::string score = r.accuracy ? format_fixed(*r.accuracy, 4) : r.aroc ? format_fixed(*r.aroc, 4) : "-";
    std::string params;
    for (const auto& [k, v] : r.parameters) params += (params.empty() ? "" : " ") + k + "=" + v;
    std::string out;
    out += cell("method", 7) + cell("l", 5) + cell(score_name, 10) + cell("corr_sum", 10) + cell("spars_x", 9) +
           cell("spars_y", 9) + cell("err_x", 10) + cell("err_y", 10) + "  params\n";
    out += cell(r.method, 7) + cell(std::to_string(r.l), 5) + cell(score, 10) + cell(format_fixed(r.corr_sum, 4), 10) +
           cell(format_fixed(r.sparsity_x, 4), 9) + cell(format_fixed(r.sparsity_y, 4), 9) +
           cell(format_fixed(r.err_x, 4), 10) + cell(format_fixed(r.err_y, 4), 10) + "  " + params + "\n";
    return out;
}

void write_artifacts(const std::filesystem::path& dir, const RunOutput& out) {
    std::filesystem::create_directories(dir);
    KeyValueWriter model;
    for (const auto& [k, v] : out.model_keys) model.add(k, v);
    model.save(dir / "model.txt");
    for (const auto& [name, m] : out.model_files) save_dense(dir / name, m);
    write_file(dir / "result.txt", result_key_values(out.record));
    write_file(dir / "table.txt", result_table(out.record));

    // First canonical pair on the training data, one sample per line.
    if (out.train_proj_x.rows() >= 1) {
        Matrix pairs(out.train_proj_x.cols(), 2);
        pairs.col(0) = out.train_proj_x.row(0).transpose();
        pairs.col(1) = out.train_proj_y.row(0).transpose();
        save_dense(dir / "canonical_pairs.csv", pairs);
    }
    if (!out.sweep.empty()) {
        Matrix s(static_cast<Index>(out.sweep.size()), 2);
        for (std::size_t i = 0; i < out.sweep.size(); ++i) {
            s(static_cast<Index>(i), 0) = static_cast<double>(out.sweep[i].first);
            s(static_cast<Index>(i), 1) = out.sweep[i].second;
        }
        save_dense(dir / "sweep_l.csv", s);
    }
    if (out.cv) {
        KeyValueWriter w;
        const CvOutcome& cv = *out.cv;
        for (std::size_t i = 0; i < cv.grid.size(); ++i) {
            const std::string p = "candidate." + std::to_string(i + 1);
            w.add(p + ".value", cv.grid[i]);
            w.add(p + ".mean_score", cv.mean_scores[i]);
            for (std::size_t f = 0; f < cv.fold_scores[i].size(); ++f) {
                w.add(p + ".fold." + std::to_string(f + 1), cv.fold_scores[i][f]);
            }
        }
        w.add("selected", cv.selected);
        w.save(dir / "cv.txt");
    }
}

namespace {

struct SavedModel {
    bool kernel = false;
    bool classification = false;
    CcaModel linear;
    KccaModel kmodel;
    Matrix train_px;
    std::vector<int> train_labels;
};

SavedModel load_saved(const std::filesystem::path& dir) {
    const auto keys = load_key_values(dir / "model.txt");
    auto key = [&](const std::string& k) {
        const auto it = keys.find(k);
        if (it == keys.end()) fail(ErrorKind::FormatError, (dir / "model.txt").string() + ": missing key " + k);
        return it->second;
    };
    SavedModel s;
    s.kernel = is_kernel_method(parse_method(key("method")));
    s.classification = key("classification") == "1";
    s.train_px = load_dense(dir / "train_projection_x.csv");
    if (s.classification) s.train_labels = labels_from_matrix(load_dense(dir / "train_labels.csv"));
    const Matrix wx = load_dense(dir / "wx.csv");
    const Matrix wy = load_dense(dir / "wy.csv");
    if (!s.kernel) {
        s.linear.wx = wx;
        s.linear.wy = wy;
        s.linear.l = wx.cols();
        s.linear.mean_x = load_dense(dir / "mean_x.csv").col(0);
        s.linear.mean_y = load_dense(dir / "mean_y.csv").col(0);
        return s;
    }
    auto view = [&](const char* suffix) {
        KernelView v;
        v.spec = parse_kernel(key(std::string("kernel_") + suffix));
        v.grand_mean = parse_double(key(std::string("grand_mean_") + suffix));
        v.row_means = load_dense(dir / (std::string("row_means_") + suffix + ".csv")).col(0);
        if (!is_precomputed(v.spec)) {
            v.train = std::make_shared<const Matrix>(load_dense(dir / (std::string("train_") + suffix + ".csv")));
        }
        return v;
    };
    s.kmodel.dual_x = wx;
    s.kmodel.dual_y = wy;
    s.kmodel.l = wx.cols();
    s.kmodel.view_x = view("x");
    s.kmodel.view_y = view("y");
    return s;
}

SavedProjection project_model(const SavedModel& s, const Matrix& x, const Matrix* y) {
    SavedProjection p;
    if (!s.kernel) {
        Projection q = project(s.linear, x, y);
        p.x = std::move(q.x);
        p.y = std::move(q.y);
        return p;
    }
    auto one = [&](View v, const Matrix& data) {
        const KernelView& kv = v == View::X ? s.kmodel.view_x : s.kmodel.view_y;
        return is_precomputed(kv.spec) ? kcca_project_cross(s.kmodel, v, data) : kcca_project(s.kmodel, v, data);
    };
    p.x = one(View::X, x);
    if (y) p.y = one(View::Y, *y);
    return p;
}

}  // namespace

SavedProjection project_saved(const std::filesystem::path& model_dir, const Matrix& x, const Matrix* y) {
    return project_model(load_saved(model_dir), x, y);
}

ResultRecord evaluate_saved(const std::filesystem::path& model_dir, const Matrix& x_test, const Matrix& y_test,
                            const std::vector<int>* test_labels) {
    const SavedModel s = load_saved(model_dir);
    const auto saved = load_key_values(model_dir / "result.txt");
    ResultRecord r;
    auto num = [&](const std::string& k) {
        const auto it = saved.find(k);
        if (it == saved.end()) fail(ErrorKind::FormatError, "saved result lacks " + k);
        return parse_double(it->second);
    };
    r.method = saved.count("method") ? saved.at("method") : "";
    r.evaluated_on = "test";
    r.sparsity_x = num("sparsity_x");
    r.sparsity_y = num("sparsity_y");
    r.err_x = num("err_x");
    r.err_y = num("err_y");
    for (const auto& [k, v] : saved) {
        if (k.rfind("param.", 0) == 0) r.parameters.emplace_back(k.substr(6), v);
    }
    const SavedProjection p = project_model(s, x_test, &y_test);
    r.l = p.x.rows();
    r.train_correlations.resize(r.l);
    for (Index i = 0; i < r.l; ++i) r.train_correlations(i) = num("train_correlation." + std::to_string(i + 1));
    if (s.classification) {
        require(test_labels != nullptr, "eval: classification model needs test labels");
        score(r, p.x, p.y, s.train_px, s.train_labels, test_labels, true);
    } else {
        score(r, p.x, p.y, s.train_px, {}, nullptr, false);
    }
    return r;
}

void write_synthetic(const DataSource& source, std::uint64_t seed, const std::filesystem::path& dir) {
    require(source.synth != SynthKind::None, "synth: choose a generator");
    ExperimentConfig c;
    c.data = source;
    c.seed = seed;
    const Dataset d = load_data(c);
    std::filesystem::create_directories(dir);
    save_dense(dir / "x.csv", d.x);
    save_dense(dir / "y.csv", d.y);
    if (d.has_test) {
        save_dense(dir / "x_test.csv", d.x_test);
        save_dense(dir / "y_test.csv", d.y_test);
    }
}

std::vector<int> labels_from_matrix(const Matrix& m) {
    require(m.rows() == 1 || m.cols() == 1, "labels: expected a single row or column");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Index i = 0; i < m.size(); ++i) {
        const double v = m.data()[i];
        require(v == std::floor(v) && std::abs(v) < 1e9, "labels: class ids must be integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace scca
