#pragma once

// Class-weighted logistic regression with L1/L2 penalties, evaluation,
// grid search, feature-group ablation and the Random/Length baselines.

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blame/corpus.hpp"
#include "blame/features.hpp"

namespace blame {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols);

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Matrix select_columns(std::span<const std::size_t> columns) const;
};

struct Dataset {
  Matrix x;
  std::vector<int> y;
};

enum class Penalty { L1, L2 };
std::string_view to_string(Penalty p);
Penalty parse_penalty(std::string_view s);  // throws std::invalid_argument

struct ClassWeights {
  double w0 = 1.0;
  double w1 = 1.0;
};

// w_c = N / (2 N_c). Throws DataError unless both classes are present.
ClassWeights balanced_weights(std::span<const int> y);

// Column means and population standard deviations (0 becomes 1).
struct Standardizer {
  std::vector<double> means;
  std::vector<double> scales;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
  void apply_row(std::span<const double> in, std::span<double> out) const;
};

inline constexpr double kTolerance = 1e-6;
inline constexpr int kMaxIterations = 5000;

struct TrainOptions {
  Penalty penalty = Penalty::L2;
  double reg_weight = 1e-2;
  std::uint64_t seed = 0;
  double tolerance = kTolerance;
  int max_iterations = kMaxIterations;
  bool standardize = true;
};

struct TrainedModel {
  std::vector<double> coefficients;  // per standardized feature
  double intercept = 0.0;
  Penalty penalty = Penalty::L2;
  double reg_weight = 0.0;
  ClassWeights class_weights;
  std::uint64_t seed = 0;
  bool converged = false;
  int iterations = 0;
  Standardizer standardizer;
  std::string schema_hash;
  std::vector<std::string> feature_names;
};

// Objective on already standardized data, params = [beta..., intercept]:
//   (1/N) sum_i w_{y_i} (log(1 + e^{z_i}) - y_i z_i) + l2 / 2 * |beta|^2
// The gradient is written into `grad` when it is non-empty.
double lr_smooth_loss(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params,
                      double l2, std::span<double> grad);
// Smooth loss plus the penalty for `penalty` (L1 uses reg_weight * |beta|_1).
double lr_objective(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params,
                    Penalty penalty, double reg_weight);
// Weighted negative log-likelihood only.
double lr_data_loss(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params);

// Throws DataError on a single-class y, labels outside {0,1}, size mismatch or
// a non-finite feature (the message names the column).
TrainedModel train_lr(const Matrix& x, std::span<const int> y, const TrainOptions& options,
                      std::span<const std::string> feature_names = {});

struct Prediction {
  double probability = 0.5;
  int label = 1;
};

// Throws DataError on a dimension mismatch.
Prediction predict(const TrainedModel& model, std::span<const double> x);
std::vector<Prediction> predict_all(const TrainedModel& model, const Matrix& x);

struct ClassificationMetrics {
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double precision[2] = {0.0, 0.0};
  double recall[2] = {0.0, 0.0};
  double f1[2] = {0.0, 0.0};
  std::size_t support[2] = {0, 0};
};

// Macro averages over classes 0 and 1; undefined ratios count as 0.
ClassificationMetrics compute_metrics(std::span<const int> truth, std::span<const int> predicted);

struct Metrics {
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double std_precision = 0.0;
  double std_recall = 0.0;
  double std_f1 = 0.0;
  std::vector<ClassificationMetrics> runs;
};

// Mean and sample standard deviation across runs. Throws DataError when empty.
Metrics summarize(std::vector<ClassificationMetrics> runs);

inline constexpr int kDefaultRuns = 10;

// Trains `runs` times on `train` with seeds seed, seed + 1, ... and scores
// each run on `test`. Throws DataError on an empty test set.
Metrics evaluate(const Dataset& train, const Dataset& test, const TrainOptions& options, int runs = kDefaultRuns,
                 int jobs = 1);

struct GridPoint {
  Penalty penalty;
  double reg_weight;
  double dev_f1 = 0.0;
};

struct GridResult {
  TrainedModel best;
  std::size_t best_index = 0;
  std::vector<GridPoint> points;
};

std::vector<Penalty> default_penalties();
std::vector<double> default_reg_weights();  // 1e-4, 1e-3, 1e-2, 1e-1

// Best dev macro F1; ties go to the larger reg_weight, then L1 over L2.
GridResult grid_search(const Dataset& train, const Dataset& dev, std::span<const Penalty> penalties,
                       std::span<const double> reg_weights, std::uint64_t seed, int jobs = 1);

struct AblationResult {
  std::set<FeatureGroup> dropped;
  Penalty penalty;
  double reg_weight;
  Metrics metrics;
};

// Drops the columns of every group in `dropped`, grid-searches on train/dev
// and evaluates the winner on test.
AblationResult ablate(const FeatureSchema& schema, const Dataset& train, const Dataset& dev, const Dataset& test,
                      const std::set<FeatureGroup>& dropped, std::span<const Penalty> penalties,
                      std::span<const double> reg_weights, std::uint64_t seed, int runs = kDefaultRuns,
                      int jobs = 1);
std::set<FeatureGroup> parse_feature_groups(std::span<const std::string> names);

// Uniform Bernoulli(0.5) labels.
std::vector<int> baseline_random(std::size_t n, std::uint64_t seed);
// Random baseline scored `runs` times with seeds seed, seed + 1, ...
Metrics evaluate_random(std::span<const int> truth, std::uint64_t seed, int runs = kDefaultRuns);

// [sentence count, mean tokens per sentence, total tokens].
std::vector<double> length_features(const AnnotatedDoc& doc);
inline const std::vector<std::string>& length_feature_names() {
  static const std::vector<std::string> names = {"sentences", "mean_tokens", "tokens"};
  return names;
}

void write_model(const std::filesystem::path& path, const TrainedModel& model, std::string_view config_hash);
TrainedModel read_model(const std::filesystem::path& path);

}  // namespace blame
