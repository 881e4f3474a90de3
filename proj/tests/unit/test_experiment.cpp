#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "expect_error.hpp"
#include "scca/experiment.hpp"
#include "scca/io.hpp"
#include "scca/synth.hpp"

using namespace scca;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("scca_exp_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig topics_config(Method m) {
    ExperimentConfig c;
    c.method = m;
    c.data.synth = SynthKind::Topics;
    c.data.n = 60;
    c.data.n_test = 40;
    c.data.d1 = 30;
    c.data.d2 = 25;
    c.data.topics = 4;
    c.seed = 3;
    return c;
}

ExperimentConfig nonlinear_config(Method m) {
    ExperimentConfig c;
    c.method = m;
    c.data.synth = SynthKind::Nonlinear;
    c.data.n = 80;
    c.data.n_test = 40;
    c.seed = 1;
    return c;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(SCCA_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Method, Names) {
    for (Method m : {Method::Cca, Method::Scca, Method::Kcca, Method::Rkcca, Method::Skcca}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_TRUE(is_kernel_method(Method::Skcca));
    EXPECT_FALSE(is_kernel_method(Method::Scca));
    expect_error([] { parse_method("pca"); }, ErrorKind::InvalidInput);
}

TEST(ValidateConfig, RegularizerMatchesMethod) {
    ExperimentConfig c;
    c.method = Method::Cca;
    validate_config(c);
    c.lambda = {0.1};
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);
    c.method = Method::Scca;
    validate_config(c);
    c.lambda.clear();
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);

    c = ExperimentConfig{};
    c.method = Method::Rkcca;
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);
    c.rho = -1.0;
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);
    c.rho = 0.5;
    validate_config(c);

    c = ExperimentConfig{};
    c.method = Method::Skcca;
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);
    c.gamma_x = 0.5;
    validate_config(c);
    c.rho = 0.1;
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);

    c = ExperimentConfig{};
    c.kernel_x = "gaussian";
    expect_error([&] { validate_config(c); }, ErrorKind::InvalidInput);

    c = ExperimentConfig{};
    c.method = Method::Scca;
    expect_error([&] { validate_config(c, true); }, ErrorKind::InvalidInput);
    c.cv_grid = {0.1, 0.2};
    validate_config(c, true);
    c.cv_folds = 1;
    expect_error([&] { validate_config(c, true); }, ErrorKind::InvalidInput);
}

TEST(Run, CcaOnHeldOutTopics) {
    const RunOutput out = run(topics_config(Method::Cca));
    EXPECT_EQ(out.record.method, "cca");
    EXPECT_EQ(out.record.evaluated_on, "test");
    ASSERT_TRUE(out.record.aroc.has_value());
    EXPECT_GT(*out.record.aroc, 0.5);
    EXPECT_EQ(out.record.l, 25);  // all directions: min(rank X, rank Y) with n = 60
    EXPECT_EQ(out.eval_proj_x.cols(), 40);
    EXPECT_LE(out.record.err_x, 1e-8);
}

TEST(Run, SccaIsSparse) {
    ExperimentConfig c = topics_config(Method::Scca);
    c.lambda = {0.5};
    c.l = 4;
    const RunOutput out = run(c);
    EXPECT_GT(out.record.sparsity_x, 0.0);
    EXPECT_EQ(out.record.l, 4);
    EXPECT_EQ(out.wx.cols(), 4);
    EXPECT_EQ(out.record.parameters.front().first, "lambda");
}

TEST(Run, KernelMethods) {
    ExperimentConfig c = nonlinear_config(Method::Rkcca);
    c.kernel_x = "gaussian";
    c.kernel_y = "gaussian";
    c.rho = 0.1;
    c.l = 2;
    const RunOutput r = run(c);
    EXPECT_TRUE(r.kernel);
    EXPECT_EQ(r.wx.rows(), 80);
    EXPECT_GT(r.record.train_correlations(0), 0.8);

    c.method = Method::Skcca;
    c.rho.reset();
    c.gamma_x = 0.3;
    const RunOutput s = run(c);
    EXPECT_GT(s.record.sparsity_x, 0.0);
}

TEST(Run, NoTestDataEvaluatesOnTraining) {
    ExperimentConfig c = nonlinear_config(Method::Cca);
    c.data.n_test = 0;
    const RunOutput out = run(c);
    EXPECT_EQ(out.record.evaluated_on, "train");
    EXPECT_NEAR(out.record.corr_sum, out.record.train_correlations.sum(), 1e-10);
}

TEST(Run, DeterministicResultText) {
    ExperimentConfig c = topics_config(Method::Skcca);
    c.gamma_x = 0.5;
    c.gamma_y = 0.5;
    c.l = 3;
    const std::string once = result_key_values(run(c).record);
    EXPECT_EQ(once, result_key_values(run(c).record));
    c.fpc.threads = 2;
    EXPECT_EQ(once, result_key_values(run(c).record));
}

TEST(Artifacts, SavedModelReproducesProjectionAndScore) {
    for (Method m : {Method::Scca, Method::Rkcca}) {
        ExperimentConfig c = m == Method::Scca ? topics_config(m) : nonlinear_config(m);
        if (m == Method::Scca) c.lambda = {0.2};
        if (m == Method::Rkcca) {
            c.kernel_x = "gaussian:max";
            c.kernel_y = "poly:1:1:2";
            c.rho = 0.5;
        }
        c.l = 3;
        const fs::path dir = scratch("model_" + to_string(m));
        c.out_dir = dir.string();
        const RunOutput out = run(c);
        for (const char* f : {"model.txt", "result.txt", "table.txt", "wx.csv", "wy.csv", "canonical_pairs.csv"}) {
            EXPECT_TRUE(fs::exists(dir / f)) << f;
        }
        EXPECT_EQ(read_file(dir / "result.txt"), result_key_values(out.record));

        // regenerate the held-out data the run used
        Matrix xt, yt;
        if (m == Method::Scca) {
            const PairedTopics t = synth_paired_topics(100, 30, 25, 4, 0.3, 3);
            xt = t.x.rightCols(40);
            yt = t.y.rightCols(40);
        } else {
            const TwoViews t = synth_nonlinear(120, 0.3, 1);
            xt = t.x.rightCols(40);
            yt = t.y.rightCols(40);
        }
        const SavedProjection p = project_saved(dir, xt, &yt);
        EXPECT_LE(max_abs(p.x - out.eval_proj_x), 1e-9 * (1.0 + max_abs(out.eval_proj_x)));
        EXPECT_LE(max_abs(p.y - out.eval_proj_y), 1e-9 * (1.0 + max_abs(out.eval_proj_y)));
        const ResultRecord r = evaluate_saved(dir, xt, yt);
        EXPECT_NEAR(r.corr_sum, out.record.corr_sum, 1e-9);
        ASSERT_TRUE(r.aroc && out.record.aroc);
        EXPECT_NEAR(*r.aroc, *out.record.aroc, 1e-12);
        EXPECT_EQ(r.sparsity_x, out.record.sparsity_x);
        fs::remove_all(dir);
    }
}

TEST(Artifacts, ProjectRejectsWrongDimension) {
    ExperimentConfig c = topics_config(Method::Cca);
    const fs::path dir = scratch("dims");
    c.out_dir = dir.string();
    run(c);
    expect_error([&] { project_saved(dir, Matrix::Ones(7, 3), nullptr); }, ErrorKind::InvalidInput);
    expect_error([&] { project_saved(dir / "missing", Matrix::Ones(30, 3), nullptr); }, ErrorKind::InvalidInput);
    fs::remove_all(dir);
}

TEST(SweepL, PrefixScoresMatchSingleRuns) {
    ExperimentConfig c = topics_config(Method::Cca);
    c.l = 5;
    const RunOutput s = sweep_l(c);
    ASSERT_EQ(s.sweep.size(), 5u);
    for (Index l : {1, 3, 5}) {
        ExperimentConfig one = c;
        one.l = l;
        const RunOutput r = run(one);
        EXPECT_EQ(s.sweep[static_cast<std::size_t>(l - 1)].first, l);
        EXPECT_NEAR(s.sweep[static_cast<std::size_t>(l - 1)].second, *r.record.aroc, 1e-9);
    }
}

TEST(CrossValidate, SelectsFromGrid) {
    ExperimentConfig c = topics_config(Method::Scca);
    c.l = 2;
    c.cv_grid = {0.01, 0.5, 50.0};
    c.cv_folds = 3;
    const RunOutput out = cross_validate(c);
    ASSERT_TRUE(out.cv.has_value());
    EXPECT_EQ(out.cv->mean_scores.size(), 3u);
    EXPECT_EQ(out.cv->selected, c.cv_grid[out.cv->selected_index]);
    // the value that zeroes everything never wins
    EXPECT_NE(out.cv->selected, 50.0);
    EXPECT_EQ(out.record.parameters.front().second, format_number(out.cv->selected));
}

TEST(Classification, LabelsGiveAccuracy) {
    const fs::path dir = scratch("labels");
    // two classes separated along the first feature
    const PairedTopics t = synth_paired_topics(60, 5, 5, 2, 0.2, 4);
    Matrix labels(1, 60), labels_test(1, 20);
    for (Index j = 0; j < 60; ++j) labels(0, j) = t.x(0, j) > 0 ? 1 : 0;
    save_dense(dir / "x.csv", t.x.leftCols(40));
    save_dense(dir / "xt.csv", t.x.rightCols(20));
    save_dense(dir / "lab.csv", labels.leftCols(40));
    save_dense(dir / "labt.csv", labels.rightCols(20));
    ExperimentConfig c;
    c.method = Method::Cca;
    c.data.x = (dir / "x.csv").string();
    c.data.x_test = (dir / "xt.csv").string();
    c.data.labels = (dir / "lab.csv").string();
    c.data.labels_test = (dir / "labt.csv").string();
    const RunOutput out = run(c);
    ASSERT_TRUE(out.record.accuracy.has_value());
    EXPECT_FALSE(out.record.aroc.has_value());
    EXPECT_GE(*out.record.accuracy, 0.7);
    fs::remove_all(dir);
}

TEST(WriteSynthetic, FilesReloadExactly) {
    const fs::path dir = scratch("synth");
    DataSource s;
    s.synth = SynthKind::Nonlinear;
    s.n = 30;
    s.n_test = 10;
    write_synthetic(s, 8, dir);
    const TwoViews ref = synth_nonlinear(40, 0.3, 8);
    EXPECT_EQ(load_dense(dir / "x.csv"), ref.x.leftCols(30));
    EXPECT_EQ(load_dense(dir / "y_test.csv"), ref.y.rightCols(10));
    fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    const fs::path log = dir / "log.txt";
    EXPECT_EQ(run_cli("--help", log), 0);
    EXPECT_EQ(run_cli("", log), 1);
    EXPECT_EQ(run_cli("train --method nope --synth nonlinear --n 20", log), 1);
    EXPECT_EQ(run_cli("train --method cca --x /nonexistent.csv --y /nonexistent.csv", log), 1);
    write_file(dir / "bad.csv", "1,2\n3,zz\n");
    EXPECT_EQ(run_cli("train --x " + (dir / "bad.csv").string() + " --y " + (dir / "bad.csv").string(), log), 1);
    EXPECT_NE(read_file(log).find("FormatError"), std::string::npos) << read_file(log);
    EXPECT_EQ(run_cli("train --method scca --synth nonlinear --n 20", log), 1);  // lambda missing
    EXPECT_EQ(run_cli("train --method rkcca --synth nonlinear --n 20 --kernel-x gaussian --kernel-y gaussian --rho 0.1 --l 2 --out " +
                          (dir / "run").string(),
                      log),
              0)
        << read_file(log);
    EXPECT_TRUE(fs::exists(dir / "run" / "result.txt"));
    fs::remove_all(dir);
}

TEST(Cli, TrainProjectEvalRoundTrip) {
    const fs::path dir = scratch("cli_rt");
    const fs::path log = dir / "log.txt";
    const std::string d = dir.string();
    ASSERT_EQ(run_cli("synth --synth topics --n 60 --n-test 30 --d1 20 --d2 15 --topics 3 --seed 2 --out " + d + "/data", log), 0)
        << read_file(log);
    ASSERT_EQ(run_cli("train --method scca --lambda 0.1 --l 3 --x " + d + "/data/x.csv --y " + d + "/data/y.csv --x-test " + d +
                          "/data/x_test.csv --y-test " + d + "/data/y_test.csv --out " + d + "/model",
                      log),
              0)
        << read_file(log);
    ASSERT_EQ(run_cli("project --model " + d + "/model --x " + d + "/data/x_test.csv --out " + d + "/proj", log), 0)
        << read_file(log);
    EXPECT_EQ(load_dense(dir / "proj" / "projection_x.csv").rows(), 3);
    ASSERT_EQ(run_cli("eval --model " + d + "/model --x-test " + d + "/data/x_test.csv --y-test " + d +
                          "/data/y_test.csv --out " + d + "/ev",
                      log),
              0)
        << read_file(log);
    const auto a = load_key_values(dir / "model" / "result.txt");
    const auto b = load_key_values(dir / "ev" / "eval_result.txt");
    EXPECT_NEAR(parse_double(a.at("aroc")), parse_double(b.at("aroc")), 1e-12);
    fs::remove_all(dir);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = scratch("cli_cfg");
    const fs::path log = dir / "log.txt";
    write_file(dir / "run.ini", "method=scca\nlambda=0.1\nsynth=topics\nn=50\nd1=20\nd2=15\ntopics=3\nl=4\n");
    ASSERT_EQ(run_cli("train --config " + (dir / "run.ini").string() + " --l 2 --out " + (dir / "out").string(), log), 0)
        << read_file(log);
    const auto kv = load_key_values(dir / "out" / "result.txt");
    EXPECT_EQ(kv.at("method"), "scca");
    EXPECT_EQ(kv.at("l"), "2");
    EXPECT_EQ(kv.at("param.lambda"), "0.1");
    fs::remove_all(dir);
}
