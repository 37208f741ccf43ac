#pragma once

// Odds ratios, Spearman correlation, chi-square tests, Cramer's phi,
// gender log-odds and age bucketing.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blame/model.hpp"

namespace blame {

// ---- special functions --------------------------------------------------------

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);
// Upper tail of the chi-square distribution.
double chi2_sf(double chi2, int dof);
// Two-sided p-value of Student's t.
double student_t_two_sided(double t, double dof);

// ---- odds ratios ------------------------------------------------------------------

struct OrRow {
  std::string name;
  double beta = 0.0;
  double or_value = 1.0;
  bool positive = false;  // OR > 1
  double spearman_rho = 0.0;
  double p_value = 1.0;
};

// One row per coefficient; Spearman fields are left at 0 / 1.
std::vector<OrRow> odds_ratios(const TrainedModel& model);

// ---- Spearman ----------------------------------------------------------------------

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

inline constexpr std::size_t kExactSpearmanBelow = 10;

// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> x);
// Throws DataError for n < 3, unequal lengths or "undefined correlation".
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// ---- contingency tables -------------------------------------------------------------

struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  std::size_t rows() const { return counts.size(); }
  std::size_t cols() const { return counts.empty() ? 0 : counts.front().size(); }
  std::int64_t total() const;
};

struct Chi2Result {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::int64_t n = 0;
};

// Throws DataError on ragged or negative tables, shapes below 2 x 2 and zero
// marginals.
Chi2Result chi2_test(const ContingencyTable& table);

double cramers_phi(double chi2, std::int64_t n, int r, int c);

enum class EffectSize { negligible, small, moderate, strong };
EffectSize effect_size(double phi);  // 0.07 / 0.21 / 0.35
std::string_view to_string(EffectSize e);

// "***" below 0.001, "**" below 0.05, otherwise "".
std::string_view significance_stars(double p);

// ---- gender log-odds ------------------------------------------------------------------

struct GenderBlameCounts {
  double male_blamed = 0;
  double male_not = 0;
  double female_blamed = 0;
  double female_not = 0;
};

struct LogOdds {
  double log_odds = 0.0;
  double percent_more_likely = 0.0;  // exp(log_odds) - 1
  bool haldane = false;
};

inline constexpr double kHaldane = 0.5;

// ln[(mb / mn) / (fb / fn)]. A zero cell throws DataError unless `haldane`
// is set, which adds 0.5 to every cell.
LogOdds log_odds_blame(const GenderBlameCounts& counts, bool haldane = false);

// ---- ages -----------------------------------------------------------------------------

enum class AgeBucket { age_15_25, age_26_35, age_36_45, age_46_55, out_of_range };
AgeBucket bucket_age(int age);
std::string_view to_string(AgeBucket b);
inline constexpr AgeBucket kAgeBuckets[] = {AgeBucket::age_15_25, AgeBucket::age_26_35, AgeBucket::age_36_45,
                                            AgeBucket::age_46_55};

}  // namespace blame
