#pragma once

// Experiment orchestration behind the command-line tool: load or generate
// data, fit one of the five methods, project, score, and write artifacts.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scca/eval.hpp"
#include "scca/fpc.hpp"
#include "scca/types.hpp"

namespace scca {

enum class Method { Cca, Scca, Kcca, Rkcca, Skcca };

Method parse_method(const std::string& name);
std::string to_string(Method m);
bool is_kernel_method(Method m);

enum class SynthKind { None, Nonlinear, Topics };

struct DataSource {
    SynthKind synth = SynthKind::None;
    // File inputs (dense CSV unless `sparse`, then coordinate triplets).
    // For precomputed kernels x/y hold training Grams and x_test/y_test
    // hold n x N cross-Grams.
    std::string x, y, x_test, y_test;
    // Class ids, one per sample. When set and `y` is empty the second view
    // is the class-indicator matrix and scoring is 1-NN accuracy.
    std::string labels, labels_test;
    bool header = false;
    bool sparse = false;
    // Generator settings.
    Index n = 500;
    Index n_test = 0;
    Index d1 = 300;
    Index d2 = 250;
    Index topics = 10;
    double noise = 0.3;
};

struct ExperimentConfig {
    Method method = Method::Cca;
    DataSource data;
    // "linear", "gaussian" (sigma = max pairwise distance, or --sigma),
    // "gaussian:max", "gaussian:min", "gaussian:<sigma>", "poly:<g1>:<g2>:<deg>",
    // "precomputed".
    std::string kernel_x = "linear";
    std::string kernel_y = "linear";
    std::optional<double> sigma;
    std::optional<Index> l;  // empty means all (l = m)
    std::vector<double> lambda;          // scca: one value or one per column
    std::optional<double> gamma_x, gamma_y;  // skcca multipliers
    std::optional<double> rho;           // rkcca, or raw skcca regularizer
    std::vector<double> cv_grid;
    int cv_folds = 5;
    std::uint64_t seed = 0;
    std::string out_dir;
    FpcConfig fpc;
    double rank_tol = kDefaultRankTol;
};

// Checks that the regularizers given match the method: cca and kcca take
// none, scca takes lambda, rkcca takes rho, skcca takes gamma or raw rho.
void validate_config(const ExperimentConfig& config, bool cv_mode = false);

struct ResultRecord {
    std::string method;
    std::string evaluated_on;  // "train" or "test"
    std::optional<double> aroc;
    std::optional<double> accuracy;
    double corr_sum = 0.0;
    double sparsity_x = 0.0;
    double sparsity_y = 0.0;
    double err_x = 0.0;
    double err_y = 0.0;
    Index l = 0;
    std::vector<std::pair<std::string, std::string>> parameters;
    Vector train_correlations;
    double wall_time_seconds = 0.0;
};

struct RunOutput {
    ResultRecord record;
    bool kernel = false;
    Matrix wx, wy;  // primal transforms, or dual transforms for kernel methods
    Matrix train_proj_x, train_proj_y;
    Matrix eval_proj_x, eval_proj_y;
    std::vector<std::pair<Index, double>> sweep;  // (l, score) when sweeping
    std::optional<CvOutcome> cv;
    // Everything needed to reload the model for projection.
    std::vector<std::pair<std::string, std::string>> model_keys;
    std::vector<std::pair<std::string, Matrix>> model_files;
};

// Fits, projects and scores; writes artifacts when out_dir is set.
RunOutput run(const ExperimentConfig& config);

// Fits once at l (or all) and scores every prefix 1..l.
RunOutput sweep_l(const ExperimentConfig& config);

// k-fold selection of the method's regularizer over cv_grid, then a final
// fit on all training data with the selected value.
RunOutput cross_validate(const ExperimentConfig& config);

// Machine-readable result: key=value lines with 17 significant digits. No
// wall time, so repeated runs compare byte for byte.
std::string result_key_values(const ResultRecord& r);
// Human table: header plus one row, 4 decimals. No timing either, so every
// artifact file is reproducible; the CLI prints the time separately.
std::string result_table(const ResultRecord& r);

void write_artifacts(const std::filesystem::path& dir, const RunOutput& out);

// Projects new data with a model directory written by run(). For
// precomputed kernels the inputs are n x N cross-Grams.
struct SavedProjection {
    Matrix x;
    Matrix y;
};
SavedProjection project_saved(const std::filesystem::path& model_dir, const Matrix& x,
                              const Matrix* y);

// Scores held-out data against a saved model. Training-time fields
// (sparsity, Err, training correlations) are read from the saved result.
// With test labels the score is 1-NN accuracy against the saved training
// projections, otherwise paired-retrieval AROC.
ResultRecord evaluate_saved(const std::filesystem::path& model_dir, const Matrix& x_test,
                            const Matrix& y_test, const std::vector<int>* test_labels = nullptr);

// Synthetic data to files: x.csv, y.csv and, when n_test > 0, x_test.csv, y_test.csv.
void write_synthetic(const DataSource& source, std::uint64_t seed, const std::filesystem::path& dir);

std::vector<int> labels_from_matrix(const Matrix& m);

}  // namespace scca
