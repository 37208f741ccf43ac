#include "blame/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/kernels.hpp"
#include "blame/parallel.hpp"
#include "blame/random.hpp"
#include "blame/report.hpp"

namespace blame {
namespace {

constexpr double kInitScale = 0.01;
constexpr int kHistory = 10;
constexpr double kArmijo = 1e-4;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double weight_of(ClassWeights w, int y) { return y == 1 ? w.w1 : w.w0; }

void check_inputs(const Matrix& x, std::span<const int> y, std::span<const std::string> names) {
  if (x.rows != y.size()) throw DataError("feature matrix has " + std::to_string(x.rows) + " rows but " +
                                          std::to_string(y.size()) + " labels");
  for (int v : y)
    if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      if (!std::isfinite(x.at(i, j))) {
        const std::string col = j < names.size() ? names[j] : "column " + std::to_string(j);
        throw DataError("non-finite feature value in '" + col + "' (row " + std::to_string(i) + ")");
      }
    }
  }
}

// z_i = x_i . beta + b
std::vector<double> linear_scores(const Matrix& x, std::span<const double> params) {
  const std::span<const double> beta = params.first(x.cols);
  const double b = params[x.cols];
  std::vector<double> z(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) z[i] = kernels::dot(x.row(i), beta) + b;
  return z;
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::sum_squares(v)); }

// Columns that are identically zero start (and stay) at exactly zero.
std::vector<double> initial_params(const Matrix& x, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(x.cols + 1, 0.0);
  for (std::size_t j = 0; j < x.cols; ++j) {
    const double v = kInitScale * rng.normal();
    bool zero = true;
    for (std::size_t i = 0; i < x.rows && zero; ++i) zero = x.at(i, j) == 0.0;
    p[j] = zero ? 0.0 : v;
  }
  return p;
}

struct FitResult {
  std::vector<double> params;
  bool converged = false;
  int iterations = 0;
};

FitResult fit_l2(const Matrix& x, std::span<const int> y, ClassWeights w, const TrainOptions& o) {
  const std::size_t n = x.cols + 1;
  FitResult r;
  r.params = initial_params(x, o.seed);
  std::vector<double> g(n), g_new(n), dir(n), p_new(n);
  double f = lr_smooth_loss(x, y, w, r.params, o.reg_weight, g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(kHistory);

  for (r.iterations = 0; r.iterations < o.max_iterations; ++r.iterations) {
    if (norm2(g) < o.tolerance) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * kernels::dot(s_hist[k], dir);
      kernels::axpy(-alpha[k], y_hist[k], dir);
    }
    if (m > 0) {
      const double gamma = kernels::dot(s_hist.back(), y_hist.back()) / kernels::sum_squares(y_hist.back());
      kernels::scale(dir, gamma);
    } else {
      kernels::scale(dir, 1.0 / std::max(1.0, norm2(g)));
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double b = rho_hist[k] * kernels::dot(y_hist[k], dir);
      kernels::axpy(alpha[k] - b, s_hist[k], dir);
    }
    double slope = kernels::dot(g, dir);
    if (slope >= 0) {
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = -kernels::sum_squares(g);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) p_new[i] = r.params[i] + step * dir[i];
      f_new = lr_smooth_loss(x, y, w, p_new, o.reg_weight, g_new);
      if (f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> s(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = p_new[i] - r.params[i];
      yv[i] = g_new[i] - g[i];
    }
    const double sy = kernels::dot(s, yv);
    if (sy > 1e-16) {
      if (s_hist.size() == kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }
    r.params.swap(p_new);
    g.swap(g_new);
    f = f_new;
  }
  if (!r.converged) r.converged = norm2(g) < o.tolerance;
  return r;
}

// Coordinate descent with per-coordinate Newton steps on the smooth part,
// soft-thresholding for the L1 term and an Armijo backtracking search.
FitResult fit_l1(const Matrix& x, std::span<const int> y, ClassWeights w, const TrainOptions& o) {
  const std::size_t d = x.cols;
  const std::size_t n = x.rows;
  const double inv_n = 1.0 / static_cast<double>(n);
  FitResult r;
  r.params = initial_params(x, o.seed);

  Matrix xt(d + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) xt.at(j, i) = x.at(i, j);
    xt.at(d, i) = 1.0;
  }
  std::vector<double> wi(n);
  for (std::size_t i = 0; i < n; ++i) wi[i] = weight_of(w, y[i]) * inv_n;

  std::vector<bool> zero_column(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = xt.row(j);
    zero_column[j] = std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0; });
  }

  std::vector<double> z = linear_scores(x, r.params);
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(o.seed);
  const double lambda = o.reg_weight;

  auto loss_along = [&](std::span<const double> col, double step) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = z[i] + step * col[i];
      s += wi[i] * (softplus(zi) - y[i] * zi);
    }
    return s;
  };

  // Returns the applied change of coordinate j (j == d is the intercept).
  auto update = [&](std::size_t j) {
    const auto col = xt.row(j);
    const bool penalized = j < d;
    double g = 0.0, h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(z[i]);
      g += wi[i] * (p - y[i]) * col[i];
      h += wi[i] * p * (1.0 - p) * col[i] * col[i];
    }
    double& beta = r.params[j];
    if (penalized && zero_column[j]) {
      const double change = -beta;
      beta = 0.0;
      return change;
    }
    if (h <= 1e-300) return 0.0;
    h = std::max(h, 1e-12);
    double step;
    if (penalized) {
      const double u = beta - g / h;
      const double t = lambda / h;
      step = (u > t ? u - t : (u < -t ? u + t : 0.0)) - beta;
    } else {
      step = -g / h;
    }
    if (step == 0.0) return 0.0;
    const double pen0 = penalized ? lambda * std::abs(beta) : 0.0;
    const double decrease = g * step + (penalized ? lambda * std::abs(beta + step) - pen0 : 0.0);
    const double base = loss_along(col, 0.0);
    double a = 1.0;
    for (int ls = 0; ls < 40; ++ls, a *= 0.5) {
      const double pen = penalized ? lambda * std::abs(beta + a * step) : 0.0;
      if (loss_along(col, a * step) + pen - base - pen0 <= 0.01 * a * decrease) {
        kernels::axpy(a * step, col, z);
        beta += a * step;
        return a * step;
      }
    }
    return 0.0;
  };

  // Full sweeps (counted as iterations) alternate with sweeps over the
  // nonzero coordinates only; convergence is declared on a full sweep.
  auto sweep = [&](std::vector<std::size_t>& coords) {
    double max_change = 0.0;
    rng.shuffle(std::span<std::size_t>(coords));
    for (std::size_t j : coords) max_change = std::max(max_change, std::abs(update(j)));
    return std::max(max_change, std::abs(update(d)));
  };
  std::vector<std::size_t> active;
  while (r.iterations < o.max_iterations) {
    ++r.iterations;
    if (sweep(order) < o.tolerance) {
      r.converged = true;
      break;
    }
    active.clear();
    for (std::size_t j = 0; j < d; ++j)
      if (r.params[j] != 0.0) active.push_back(j);
    for (int inner = 0; inner < o.max_iterations; ++inner)
      if (sweep(active) < o.tolerance) break;
  }
  return r;
}

std::string penalty_token(Penalty p) { return std::string(to_string(p)); }

}  // namespace

// ---- matrix --------------------------------------------------------------------

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DataError("row " + std::to_string(i) + " has the wrong width");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix m(rows, columns.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < columns.size(); ++k) m.at(i, k) = at(i, columns[k]);
  return m;
}

std::string_view to_string(Penalty p) { return p == Penalty::L1 ? "L1" : "L2"; }

Penalty parse_penalty(std::string_view s) {
  if (s == "L1" || s == "l1") return Penalty::L1;
  if (s == "L2" || s == "l2") return Penalty::L2;
  throw std::invalid_argument("unknown penalty '" + std::string(s) + "'");
}

ClassWeights balanced_weights(std::span<const int> y) {
  std::size_t pos = 0;
  for (int v : y) pos += v == 1;
  const std::size_t neg = y.size() - pos;
  if (pos == 0 || neg == 0) throw DataError("training labels contain a single class");
  const double n = static_cast<double>(y.size());
  return {n / (2.0 * static_cast<double>(neg)), n / (2.0 * static_cast<double>(pos))};
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  s.means.assign(x.cols, 0.0);
  s.scales.assign(x.cols, 1.0);
  if (x.rows == 0) return s;
  for (std::size_t j = 0; j < x.cols; ++j) {
    double mean = 0.0;
    bool constant = true;
    for (std::size_t i = 0; i < x.rows; ++i) {
      mean += x.at(i, j);
      constant = constant && x.at(i, j) == x.at(0, j);
    }
    if (constant) {
      s.means[j] = x.at(0, j);
      continue;
    }
    mean /= static_cast<double>(x.rows);
    double var = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) var += (x.at(i, j) - mean) * (x.at(i, j) - mean);
    var /= static_cast<double>(x.rows);
    s.means[j] = mean;
    s.scales[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

void Standardizer::apply_row(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - means[j]) / scales[j];
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols != means.size()) throw DataError("standardizer width mismatch");
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) apply_row(x.row(i), out.row(i));
  return out;
}

// ---- objective ------------------------------------------------------------------

double lr_smooth_loss(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params,
                      double l2, std::span<double> grad) {
  const std::size_t d = x.cols;
  const double inv_n = 1.0 / static_cast<double>(x.rows);
  const auto z = linear_scores(x, params);
  if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double wi = weight_of(w, y[i]) * inv_n;
    loss += wi * (softplus(z[i]) - y[i] * z[i]);
    if (!grad.empty()) {
      const double r = wi * (sigmoid(z[i]) - y[i]);
      kernels::axpy(r, x.row(i), grad.first(d));
      grad[d] += r;
    }
  }
  if (l2 > 0.0) {
    const auto beta = params.first(d);
    loss += 0.5 * l2 * kernels::sum_squares(beta);
    if (!grad.empty()) kernels::axpy(l2, beta, grad.first(d));
  }
  return loss;
}

double lr_data_loss(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params) {
  return lr_smooth_loss(x, y, w, params, 0.0, {});
}

double lr_objective(const Matrix& x, std::span<const int> y, ClassWeights w, std::span<const double> params,
                    Penalty penalty, double reg_weight) {
  if (penalty == Penalty::L2) return lr_smooth_loss(x, y, w, params, reg_weight, {});
  double l1 = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) l1 += std::abs(params[j]);
  return lr_data_loss(x, y, w, params) + reg_weight * l1;
}

// ---- training and prediction ----------------------------------------------------------

TrainedModel train_lr(const Matrix& x, std::span<const int> y, const TrainOptions& options,
                      std::span<const std::string> feature_names) {
  check_inputs(x, y, feature_names);
  if (!(options.reg_weight > 0.0)) throw std::invalid_argument("reg_weight must be > 0");
  TrainedModel m;
  m.class_weights = balanced_weights(y);
  m.penalty = options.penalty;
  m.reg_weight = options.reg_weight;
  m.seed = options.seed;
  m.feature_names.assign(feature_names.begin(), feature_names.end());
  if (options.standardize) {
    m.standardizer = Standardizer::fit(x);
  } else {
    m.standardizer.means.assign(x.cols, 0.0);
    m.standardizer.scales.assign(x.cols, 1.0);
  }
  const Matrix xs = m.standardizer.apply(x);
  const FitResult r = options.penalty == Penalty::L2 ? fit_l2(xs, y, m.class_weights, options)
                                                      : fit_l1(xs, y, m.class_weights, options);
  m.coefficients.assign(r.params.begin(), r.params.end() - 1);
  m.intercept = r.params.back();
  m.converged = r.converged;
  m.iterations = r.iterations;
  return m;
}

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.coefficients.size())
    throw DataError("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                    std::to_string(model.coefficients.size()));
  std::vector<double> xs(x.size());
  model.standardizer.apply_row(x, xs);
  const double z = kernels::dot(xs, model.coefficients) + model.intercept;
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  Prediction p;
  p.probability = std::clamp(sigmoid(z), lo, hi);
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

std::vector<Prediction> predict_all(const TrainedModel& model, const Matrix& x) {
  std::vector<Prediction> out;
  out.reserve(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out.push_back(predict(model, x.row(i)));
  return out;
}

// ---- metrics ------------------------------------------------------------------------

ClassificationMetrics compute_metrics(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw DataError("prediction count does not match label count");
  if (truth.empty()) throw DataError("cannot evaluate on an empty set");
  std::size_t conf[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if ((truth[i] != 0 && truth[i] != 1) || (predicted[i] != 0 && predicted[i] != 1))
      throw DataError("labels must be 0 or 1");
    ++conf[truth[i]][predicted[i]];
  }
  ClassificationMetrics m;
  for (int c = 0; c < 2; ++c) {
    const double tp = static_cast<double>(conf[c][c]);
    const double pred = static_cast<double>(conf[0][c] + conf[1][c]);
    const double sup = static_cast<double>(conf[c][0] + conf[c][1]);
    m.support[c] = conf[c][0] + conf[c][1];
    m.precision[c] = pred > 0 ? tp / pred : 0.0;
    m.recall[c] = sup > 0 ? tp / sup : 0.0;
    const double s = m.precision[c] + m.recall[c];
    m.f1[c] = s > 0 ? 2.0 * m.precision[c] * m.recall[c] / s : 0.0;
  }
  m.macro_precision = (m.precision[0] + m.precision[1]) / 2.0;
  m.macro_recall = (m.recall[0] + m.recall[1]) / 2.0;
  m.macro_f1 = (m.f1[0] + m.f1[1]) / 2.0;
  return m;
}

Metrics summarize(std::vector<ClassificationMetrics> runs) {
  if (runs.empty()) throw DataError("no evaluation runs");
  auto stat = [&](auto field, double& mean, double& sd) {
    mean = 0.0;
    for (const auto& r : runs) mean += r.*field;
    mean /= static_cast<double>(runs.size());
    sd = 0.0;
    if (runs.size() > 1) {
      for (const auto& r : runs) sd += (r.*field - mean) * (r.*field - mean);
      sd = std::sqrt(sd / static_cast<double>(runs.size() - 1));
    }
  };
  Metrics m;
  stat(&ClassificationMetrics::macro_precision, m.macro_precision, m.std_precision);
  stat(&ClassificationMetrics::macro_recall, m.macro_recall, m.std_recall);
  stat(&ClassificationMetrics::macro_f1, m.macro_f1, m.std_f1);
  m.runs = std::move(runs);
  return m;
}

namespace {

std::vector<int> labels_of(const std::vector<Prediction>& preds) {
  std::vector<int> out;
  out.reserve(preds.size());
  for (const auto& p : preds) out.push_back(p.label);
  return out;
}

}  // namespace

Metrics evaluate(const Dataset& train, const Dataset& test, const TrainOptions& options, int runs, int jobs) {
  if (test.y.empty()) throw DataError("cannot evaluate on an empty set");
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  std::vector<ClassificationMetrics> results(static_cast<std::size_t>(runs));
  parallel_for(results.size(), jobs, [&](std::size_t r) {
    TrainOptions o = options;
    o.seed = options.seed + r;
    const TrainedModel m = train_lr(train.x, train.y, o);
    results[r] = compute_metrics(test.y, labels_of(predict_all(m, test.x)));
  });
  return summarize(std::move(results));
}

std::vector<Penalty> default_penalties() { return {Penalty::L1, Penalty::L2}; }
std::vector<double> default_reg_weights() { return {1e-4, 1e-3, 1e-2, 1e-1}; }

GridResult grid_search(const Dataset& train, const Dataset& dev, std::span<const Penalty> penalties,
                       std::span<const double> reg_weights, std::uint64_t seed, int jobs) {
  if (penalties.empty() || reg_weights.empty()) throw std::invalid_argument("empty hyperparameter grid");
  if (dev.y.empty()) throw DataError("cannot grid-search with an empty dev set");
  GridResult out;
  for (Penalty p : penalties)
    for (double w : reg_weights) out.points.push_back({p, w, 0.0});
  std::vector<TrainedModel> models(out.points.size());
  parallel_for(out.points.size(), jobs, [&](std::size_t i) {
    TrainOptions o;
    o.penalty = out.points[i].penalty;
    o.reg_weight = out.points[i].reg_weight;
    o.seed = seed;
    models[i] = train_lr(train.x, train.y, o);
    out.points[i].dev_f1 = compute_metrics(dev.y, labels_of(predict_all(models[i], dev.x))).macro_f1;
  });
  auto better = [](const GridPoint& a, const GridPoint& b) {
    if (a.dev_f1 != b.dev_f1) return a.dev_f1 > b.dev_f1;
    if (a.reg_weight != b.reg_weight) return a.reg_weight > b.reg_weight;
    return a.penalty == Penalty::L1 && b.penalty == Penalty::L2;
  };
  for (std::size_t i = 1; i < out.points.size(); ++i)
    if (better(out.points[i], out.points[out.best_index])) out.best_index = i;
  out.best = std::move(models[out.best_index]);
  return out;
}

std::set<FeatureGroup> parse_feature_groups(std::span<const std::string> names) {
  std::set<FeatureGroup> out;
  for (const auto& n : names) out.insert(parse_feature_group(n));
  return out;
}

AblationResult ablate(const FeatureSchema& schema, const Dataset& train, const Dataset& dev, const Dataset& test,
                      const std::set<FeatureGroup>& dropped, std::span<const Penalty> penalties,
                      std::span<const double> reg_weights, std::uint64_t seed, int runs, int jobs) {
  if (train.x.cols != schema.size()) throw DataError("training matrix does not match the feature schema");
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < schema.size(); ++j)
    if (!dropped.contains(schema.groups[j])) keep.push_back(j);
  const Dataset tr{train.x.select_columns(keep), train.y};
  const Dataset dv{dev.x.select_columns(keep), dev.y};
  const Dataset te{test.x.select_columns(keep), test.y};
  const GridResult grid = grid_search(tr, dv, penalties, reg_weights, seed, jobs);
  AblationResult r;
  r.dropped = dropped;
  r.penalty = grid.best.penalty;
  r.reg_weight = grid.best.reg_weight;
  TrainOptions o;
  o.penalty = r.penalty;
  o.reg_weight = r.reg_weight;
  o.seed = seed;
  r.metrics = evaluate(tr, te, o, runs, jobs);
  return r;
}

// ---- baselines -----------------------------------------------------------------------

std::vector<int> baseline_random(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> out(n);
  for (auto& v : out) v = static_cast<int>(rng.below(2));
  return out;
}

Metrics evaluate_random(std::span<const int> truth, std::uint64_t seed, int runs) {
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  std::vector<ClassificationMetrics> results;
  for (int r = 0; r < runs; ++r)
    results.push_back(compute_metrics(truth, baseline_random(truth.size(), seed + static_cast<std::uint64_t>(r))));
  return summarize(std::move(results));
}

std::vector<double> length_features(const AnnotatedDoc& doc) {
  double tokens = 0.0;
  for (const auto& s : doc.sentences) tokens += static_cast<double>(s.tokens.size());
  const double sentences = static_cast<double>(doc.sentences.size());
  return {sentences, sentences > 0 ? tokens / sentences : 0.0, tokens};
}

// ---- model file ----------------------------------------------------------------------

void write_model(const std::filesystem::path& path, const TrainedModel& m, std::string_view config_hash) {
  std::ostringstream os;
  os << "blamekit-model 1\n";
  os << "config_hash " << config_hash << "\n";
  os << "schema_hash " << (m.schema_hash.empty() ? "-" : m.schema_hash) << "\n";
  os << "penalty " << penalty_token(m.penalty) << "\n";
  os << "reg_weight " << format_double(m.reg_weight) << "\n";
  os << "seed " << m.seed << "\n";
  os << "class_weights " << format_double(m.class_weights.w0) << " " << format_double(m.class_weights.w1) << "\n";
  os << "converged " << (m.converged ? 1 : 0) << "\n";
  os << "iterations " << m.iterations << "\n";
  os << "intercept " << format_double(m.intercept) << "\n";
  os << "features " << m.coefficients.size() << "\n";
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    const std::string name = j < m.feature_names.size() ? m.feature_names[j] : "f" + std::to_string(j);
    os << name << "\t" << format_double(m.coefficients[j]) << "\t" << format_double(m.standardizer.means[j]) << "\t"
       << format_double(m.standardizer.scales[j]) << "\n";
  }
  write_file_atomic(path, os.str());
}

TrainedModel read_model(const std::filesystem::path& path) {
  std::istringstream is(read_file(path));
  std::string line;
  auto fail = [&](const std::string& why) { throw DataError(path.string() + ": " + why); };
  if (!std::getline(is, line) || line != "blamekit-model 1") fail("not a model file (version 1)");
  TrainedModel m;
  std::size_t count = 0;
  auto field = [&](std::string_view key) {
    if (!std::getline(is, line) || line.rfind(std::string(key) + " ", 0) != 0) fail("expected '" + std::string(key) + "'");
    return line.substr(key.size() + 1);
  };
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
    return 0.0;
  };
  field("config_hash");
  m.schema_hash = field("schema_hash");
  if (m.schema_hash == "-") m.schema_hash.clear();
  m.penalty = parse_penalty(field("penalty"));
  m.reg_weight = num(field("reg_weight"));
  m.seed = std::stoull(field("seed"));
  {
    std::istringstream cw(field("class_weights"));
    std::string a, b;
    cw >> a >> b;
    m.class_weights = {num(a), num(b)};
  }
  m.converged = field("converged") == "1";
  m.iterations = static_cast<int>(num(field("iterations")));
  m.intercept = num(field("intercept"));
  count = static_cast<std::size_t>(num(field("features")));
  for (std::size_t j = 0; j < count; ++j) {
    if (!std::getline(is, line)) fail("truncated coefficient list");
    const auto parts = split_tab(line);
    if (parts.size() != 4) fail("bad coefficient line");
    m.feature_names.push_back(parts[0]);
    m.coefficients.push_back(num(parts[1]));
    m.standardizer.means.push_back(num(parts[2]));
    m.standardizer.scales.push_back(num(parts[3]));
  }
  return m;
}

}  // namespace blame
