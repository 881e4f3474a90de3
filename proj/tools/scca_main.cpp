// scca: command-line driver for the sparse CCA library.
//
//   scca synth   --synth topics --n 200 --n-test 100 --out data/
//   scca train   --method skcca --x x.csv --y y.csv --kernel-x linear --gamma-x 0.7 --out run/
//   scca project --model run/ --x new_x.csv --out proj/
//   scca eval    --model run/ --x-test xt.csv --y-test yt.csv
//   scca sweep-l --method kcca --synth nonlinear --kernel-x gaussian --kernel-y gaussian --l 5 --out s/
//   scca cv      --method scca --x x.csv --labels lab.csv --grid 1e-4,1e-3,1e-2,1e-1 --out cv/
//
// Exit status: 0 ok, 1 bad input (usage, format, degenerate data, state),
// 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "scca/error.hpp"
#include "scca/experiment.hpp"
#include "scca/io.hpp"
#include "scca/simd/kernels.hpp"

namespace {

int exit_code(scca::ErrorKind k) {
    switch (k) {
        case scca::ErrorKind::NumericalFailure:
        case scca::ErrorKind::NotPositiveSemidefinite:
            return 2;
        default:
            return 1;
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(scca::parse_double(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse CCA and sparse kernel CCA"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI file; keys match long flag names, flags override it");

    scca::ExperimentConfig cfg;
    std::string method = "cca", synth, l_text = "all", lambda_text, grid_text, simd = "auto";
    std::string model_dir;
    std::optional<double> sigma, gamma_x, gamma_y, rho;
    long long n = 500, n_test = 0, d1 = 300, d2 = 250, topics = 10;
    unsigned long long seed = 0;
    int max_iters = cfg.fpc.max_iters;
    double xtol = cfg.fpc.xtol;
    int threads = 1;

    app.add_option("--method", method, "cca | scca | kcca | rkcca | skcca")->capture_default_str();
    app.add_option("--x", cfg.data.x, "x view (features x samples), or Gram for precomputed kernels");
    app.add_option("--y", cfg.data.y, "y view");
    app.add_option("--x-test", cfg.data.x_test, "held-out x view");
    app.add_option("--y-test", cfg.data.y_test, "held-out y view");
    app.add_option("--labels", cfg.data.labels, "class ids for training samples (classification)");
    app.add_option("--labels-test", cfg.data.labels_test, "class ids for held-out samples");
    app.add_flag("--header", cfg.data.header, "input CSV files have a header line");
    app.add_flag("--sparse", cfg.data.sparse, "view files are coordinate triplets");
    app.add_option("--synth", synth, "generate data instead of reading it: nonlinear | topics");
    app.add_option("--n", n, "generated training samples")->capture_default_str();
    app.add_option("--n-test", n_test, "generated held-out samples")->capture_default_str();
    app.add_option("--d1", d1, "topics generator: x dimension")->capture_default_str();
    app.add_option("--d2", d2, "topics generator: y dimension")->capture_default_str();
    app.add_option("--topics", topics, "topics generator: latent dimension")->capture_default_str();
    app.add_option("--noise", cfg.data.noise, "generator noise level")->capture_default_str();
    app.add_option("--kernel-x", cfg.kernel_x, "linear | gaussian[:max|:min|:<sigma>] | poly:g1:g2:deg | precomputed")
        ->capture_default_str();
    app.add_option("--kernel-y", cfg.kernel_y, "as --kernel-x")->capture_default_str();
    app.add_option("--sigma", sigma, "width for bare 'gaussian' kernels (default: max pairwise distance)");
    app.add_option("--l", l_text, "number of directions, or 'all'")->capture_default_str();
    app.add_option("--lambda", lambda_text, "scca: l1 weight, one value or one per direction (comma list)");
    app.add_option("--gamma-x", gamma_x, "skcca: rho_x multiplier in (0,1)");
    app.add_option("--gamma-y", gamma_y, "skcca: rho_y multiplier in (0,1)");
    app.add_option("--rho", rho, "rkcca: Tikhonov weight; skcca: raw l1 weight");
    app.add_option("--grid", grid_text, "cv: candidate values (comma list)");
    app.add_option("--folds", cfg.cv_folds, "cv: number of folds")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--model", model_dir, "project/eval: model directory written by train");
    app.add_option("--max-iters", max_iters, "solver iteration cap per column")->capture_default_str();
    app.add_option("--xtol", xtol, "solver relative-change tolerance")->capture_default_str();
    app.add_option("--threads", threads, "solver threads (columns in parallel)")->capture_default_str();
    app.add_option("--simd", simd, "auto | scalar")->capture_default_str();

    auto* c_synth = app.add_subcommand("synth", "write generated data to --out");
    auto* c_train = app.add_subcommand("train", "fit, score and write the model to --out");
    auto* c_project = app.add_subcommand("project", "project --x (and --y) with --model");
    auto* c_eval = app.add_subcommand("eval", "score held-out data with --model");
    auto* c_sweep = app.add_subcommand("sweep-l", "score every l from 1 to --l");
    auto* c_cv = app.add_subcommand("cv", "k-fold selection of the regularizer over --grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (simd == "scalar") {
            scca::simd::set_level(scca::simd::Level::Scalar);
        } else if (simd != "auto") {
            scca::fail(scca::ErrorKind::InvalidInput, "--simd must be auto or scalar");
        }
        cfg.method = scca::parse_method(method);
        if (synth == "nonlinear") cfg.data.synth = scca::SynthKind::Nonlinear;
        else if (synth == "topics") cfg.data.synth = scca::SynthKind::Topics;
        else if (!synth.empty()) scca::fail(scca::ErrorKind::InvalidInput, "--synth must be nonlinear or topics");
        cfg.data.n = n;
        cfg.data.n_test = n_test;
        cfg.data.d1 = d1;
        cfg.data.d2 = d2;
        cfg.data.topics = topics;
        cfg.sigma = sigma;
        if (l_text != "all") {
            const double v = scca::parse_double(l_text);
            scca::require(v >= 1 && v == static_cast<double>(static_cast<long long>(v)), "--l must be a positive integer or 'all'");
            cfg.l = static_cast<scca::Index>(v);
        }
        if (!lambda_text.empty()) cfg.lambda = parse_list(lambda_text);
        if (!grid_text.empty()) cfg.cv_grid = parse_list(grid_text);
        cfg.gamma_x = gamma_x;
        cfg.gamma_y = gamma_y;
        cfg.rho = rho;
        cfg.seed = seed;
        cfg.fpc.max_iters = max_iters;
        cfg.fpc.xtol = xtol;
        cfg.fpc.threads = threads;

        if (*c_synth) {
            scca::require(!cfg.out_dir.empty(), "synth: --out is required");
            scca::write_synthetic(cfg.data, cfg.seed, cfg.out_dir);
        } else if (*c_train) {
            const auto out = scca::run(cfg);
            std::cout << scca::result_table(out.record);
            std::cout << "time_s=" << scca::format_fixed(out.record.wall_time_seconds, 2) << '\n';
        } else if (*c_sweep) {
            const auto out = scca::sweep_l(cfg);
            std::cout << "l,score\n";
            for (const auto& [l, s] : out.sweep) std::cout << l << ',' << scca::format_fixed(s, 4) << '\n';
        } else if (*c_cv) {
            const auto out = scca::cross_validate(cfg);
            std::cout << "selected=" << scca::format_number(out.cv->selected) << '\n';
            std::cout << scca::result_table(out.record);
        } else if (*c_project) {
            scca::require(!model_dir.empty() && !cfg.data.x.empty(), "project: --model and --x are required");
            scca::require(!cfg.out_dir.empty(), "project: --out is required");
            const auto load = [&](const std::string& p) {
                return cfg.data.sparse ? scca::load_sparse_triplets(p) : scca::load_dense(p, cfg.data.header);
            };
            const scca::Matrix x = load(cfg.data.x);
            std::optional<scca::Matrix> y;
            if (!cfg.data.y.empty()) y = load(cfg.data.y);
            const auto p = scca::project_saved(model_dir, x, y ? &*y : nullptr);
            std::filesystem::create_directories(cfg.out_dir);
            scca::save_dense(std::filesystem::path(cfg.out_dir) / "projection_x.csv", p.x);
            if (y) scca::save_dense(std::filesystem::path(cfg.out_dir) / "projection_y.csv", p.y);
        } else if (*c_eval) {
            scca::require(!model_dir.empty(), "eval: --model is required");
            const std::string xs = !cfg.data.x_test.empty() ? cfg.data.x_test : cfg.data.x;
            const std::string ys = !cfg.data.y_test.empty() ? cfg.data.y_test : cfg.data.y;
            scca::require(!xs.empty() && !ys.empty(), "eval: give --x-test and --y-test");
            const auto load = [&](const std::string& p) {
                return cfg.data.sparse ? scca::load_sparse_triplets(p) : scca::load_dense(p, cfg.data.header);
            };
            std::optional<std::vector<int>> labels;
            if (!cfg.data.labels_test.empty()) {
                labels = scca::labels_from_matrix(scca::load_dense(cfg.data.labels_test, cfg.data.header));
            }
            const auto r = scca::evaluate_saved(model_dir, load(xs), load(ys), labels ? &*labels : nullptr);
            std::cout << scca::result_table(r);
            if (!cfg.out_dir.empty()) {
                scca::write_file(std::filesystem::path(cfg.out_dir) / "eval_result.txt", scca::result_key_values(r));
            }
        }
    } catch (const scca::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (InvalidInput): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
