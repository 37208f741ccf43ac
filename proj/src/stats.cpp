#include "blame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blame/error.hpp"

namespace blame {
namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 10000;

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxTerms; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("incomplete gamma needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("incomplete gamma needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_continued_fraction(a, x);
}

double regularized_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double chi2_sf(double chi2, int dof) {
  if (dof < 1) throw std::domain_error("chi-square needs dof >= 1");
  if (chi2 <= 0.0) return 1.0;
  return regularized_gamma_q(dof / 2.0, chi2 / 2.0);
}

double student_t_two_sided(double t, double dof) {
  if (!std::isfinite(t)) return 0.0;
  return regularized_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

// ---- odds ratios ------------------------------------------------------------------

std::vector<OrRow> odds_ratios(const TrainedModel& model) {
  std::vector<OrRow> out;
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
    OrRow r;
    r.name = j < model.feature_names.size() ? model.feature_names[j] : "f" + std::to_string(j);
    r.beta = model.coefficients[j];
    r.or_value = std::exp(r.beta);
    r.positive = r.or_value > 1.0;
    out.push_back(std::move(r));
  }
  return out;
}

// ---- Spearman ----------------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman inputs differ in length");
  if (x.size() < 3) throw DataError("spearman needs at least 3 observations");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("spearman inputs must be finite");
  if (is_constant(x) || is_constant(y)) throw DataError("undefined correlation");
  const auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  SpearmanResult r;
  r.rho = pearson(rx, ry);
  const std::size_t n = x.size();
  if (n < kExactSpearmanBelow) {
    std::sort(ry.begin(), ry.end());
    std::size_t extreme = 0, total = 0;
    const double cutoff = std::abs(r.rho) - 1e-12;
    do {
      ++total;
      if (std::abs(pearson(rx, ry)) >= cutoff) ++extreme;
    } while (std::next_permutation(ry.begin(), ry.end()));
    // Tied ranks repeat values; next_permutation walks distinct orderings,
    // each of which stands for the same number of raw permutations.
    r.p_value = static_cast<double>(extreme) / static_cast<double>(total);
  } else {
    const double df = static_cast<double>(n - 2);
    if (std::abs(r.rho) >= 1.0) {
      r.p_value = 0.0;
    } else {
      const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
      r.p_value = std::clamp(student_t_two_sided(t, df), 0.0, 1.0);
    }
  }
  return r;
}

// ---- contingency tables -------------------------------------------------------------

std::int64_t ContingencyTable::total() const {
  std::int64_t n = 0;
  for (const auto& row : counts)
    for (auto v : row) n += v;
  return n;
}

Chi2Result chi2_test(const ContingencyTable& table) {
  const std::size_t r = table.rows();
  const std::size_t c = table.cols();
  if (r < 2 || c < 2) throw DataError("contingency table must be at least 2 x 2");
  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    if (table.counts[i].size() != c) throw DataError("contingency table rows differ in length");
    for (std::size_t j = 0; j < c; ++j) {
      if (table.counts[i][j] < 0) throw DataError("contingency table has a negative count");
      row_sum[i] += static_cast<double>(table.counts[i][j]);
      col_sum[j] += static_cast<double>(table.counts[i][j]);
    }
  }
  for (std::size_t i = 0; i < r; ++i)
    if (row_sum[i] == 0) throw DataError("zero marginal in row " + std::to_string(i));
  for (std::size_t j = 0; j < c; ++j)
    if (col_sum[j] == 0) throw DataError("zero marginal in column " + std::to_string(j));
  Chi2Result out;
  out.n = table.total();
  const double n = static_cast<double>(out.n);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row_sum[i] * col_sum[j] / n;
      const double d = static_cast<double>(table.counts[i][j]) - e;
      out.chi2 += d * d / e;
    }
  }
  out.dof = static_cast<int>((r - 1) * (c - 1));
  out.p_value = chi2_sf(out.chi2, out.dof);
  return out;
}

double cramers_phi(double chi2, std::int64_t n, int r, int c) {
  if (n < 1) throw std::domain_error("cramers_phi needs n >= 1");
  const int k = std::min(r - 1, c - 1);
  if (k < 1) throw std::domain_error("cramers_phi needs r, c >= 2");
  return std::sqrt(std::max(chi2, 0.0) / (static_cast<double>(n) * k));
}

EffectSize effect_size(double phi) {
  if (phi > 0.35) return EffectSize::strong;
  if (phi >= 0.21) return EffectSize::moderate;
  if (phi >= 0.07) return EffectSize::small;
  return EffectSize::negligible;
}

std::string_view to_string(EffectSize e) {
  switch (e) {
    case EffectSize::negligible: return "negligible";
    case EffectSize::small: return "small";
    case EffectSize::moderate: return "moderate";
    case EffectSize::strong: return "strong";
  }
  return "negligible";
}

std::string_view significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.05) return "**";
  return "";
}

// ---- gender log-odds ------------------------------------------------------------------

LogOdds log_odds_blame(const GenderBlameCounts& k, bool haldane) {
  GenderBlameCounts c = k;
  for (double v : {c.male_blamed, c.male_not, c.female_blamed, c.female_not})
    if (v < 0 || !std::isfinite(v)) throw DataError("gender-blame counts must be non-negative");
  const bool zero = c.male_blamed == 0 || c.male_not == 0 || c.female_blamed == 0 || c.female_not == 0;
  if (zero && !haldane) throw DataError("zero cell in gender-blame counts; use the Haldane correction (+0.5)");
  LogOdds out;
  if (haldane) {
    c.male_blamed += kHaldane;
    c.male_not += kHaldane;
    c.female_blamed += kHaldane;
    c.female_not += kHaldane;
    out.haldane = true;
  }
  out.log_odds = std::log((c.male_blamed / c.male_not) / (c.female_blamed / c.female_not));
  out.percent_more_likely = std::expm1(out.log_odds);
  return out;
}

// ---- ages -----------------------------------------------------------------------------

AgeBucket bucket_age(int age) {
  if (age >= 15 && age <= 25) return AgeBucket::age_15_25;
  if (age >= 26 && age <= 35) return AgeBucket::age_26_35;
  if (age >= 36 && age <= 45) return AgeBucket::age_36_45;
  if (age >= 46 && age <= 55) return AgeBucket::age_46_55;
  return AgeBucket::out_of_range;
}

std::string_view to_string(AgeBucket b) {
  switch (b) {
    case AgeBucket::age_15_25: return "15-25";
    case AgeBucket::age_26_35: return "26-35";
    case AgeBucket::age_36_45: return "36-45";
    case AgeBucket::age_46_55: return "46-55";
    case AgeBucket::out_of_range: return "out_of_range";
  }
  return "out_of_range";
}

}  // namespace blame
