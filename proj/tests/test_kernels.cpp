#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "blame/kernels.hpp"
#include "blame/random.hpp"

using namespace blame;
namespace k = blame::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal() * 3.0;
  return v;
}

std::vector<int> random_counts(Rng& rng, std::size_t n, int hi) {
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(rng.below(hi));
  return v;
}

struct IsaGuard {
  k::Isa saved = k::active_isa();
  ~IsaGuard() { k::force_isa(saved); }
};

}  // namespace

TEST_CASE("scalar is always available and forcing it sticks") {
  IsaGuard g;
  CHECK(k::isa_available(k::Isa::scalar));
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(k::isa_name(k::Isa::scalar) == "scalar");
  CHECK(k::isa_name(k::Isa::avx2) == "avx2");
}

TEST_CASE("scalar kernels against direct loops") {
  IsaGuard g;
  k::force_isa(k::Isa::scalar);
  Rng rng(1);
  auto x = random_vec(rng, 13), y = random_vec(rng, 13);
  double d = 0, s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += x[i] * y[i];
    s += x[i] * x[i];
  }
  CHECK(k::dot(x, y) == doctest::Approx(d).epsilon(1e-14));
  CHECK(k::sum_squares(x) == doctest::Approx(s).epsilon(1e-14));
  auto y2 = y;
  k::axpy(0.5, x, y2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y2[i] == y[i] + 0.5 * x[i]);
  k::scale(y2, 2.0);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y2[i] == 2.0 * (y[i] + 0.5 * x[i]));
}

TEST_CASE("empty spans") {
  std::vector<double> e;
  CHECK(k::dot(e, e) == 0.0);
  CHECK(k::sum_squares(e) == 0.0);
}

TEST_CASE("avx2 matches scalar") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("avx2 not available; equivalence skipped");
    CHECK_THROWS_AS(k::force_isa(k::Isa::avx2), std::invalid_argument);
    return;
  }
  IsaGuard g;
  Rng rng(42);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 100u, 1027u}) {
    CAPTURE(n);
    const auto x = random_vec(rng, n), y = random_vec(rng, n);

    k::force_isa(k::Isa::scalar);
    const double d0 = k::dot(x, y), s0 = k::sum_squares(x);
    auto a0 = y;
    k::axpy(-1.25, x, a0);
    auto c0 = x;
    k::scale(c0, 0.3);

    k::force_isa(k::Isa::avx2);
    const double d1 = k::dot(x, y), s1 = k::sum_squares(x);
    auto a1 = y;
    k::axpy(-1.25, x, a1);
    auto c1 = x;
    k::scale(c1, 0.3);

    CHECK(d1 == doctest::Approx(d0).epsilon(1e-12).scale(1.0));
    CHECK(s1 == doctest::Approx(s0).epsilon(1e-12));
    CHECK(a0 == a1);
    CHECK(c0 == c1);
  }

  for (int kk : {1, 2, 3, 4, 5, 8, 11, 30, 55}) {
    CAPTURE(kk);
    const auto dt = random_counts(rng, kk, 20), wt = random_counts(rng, kk, 50), tt = random_counts(rng, kk, 500);
    std::vector<double> o0(kk), o1(kk);
    k::force_isa(k::Isa::scalar);
    k::topic_weights(dt, wt, tt, 50.0 / kk, 0.01, 0.01 * 300, o0);
    k::force_isa(k::Isa::avx2);
    k::topic_weights(dt, wt, tt, 50.0 / kk, 0.01, 0.01 * 300, o1);
    CHECK(o0 == o1);
    for (int t = 0; t < kk; ++t) {
      const double want = (dt[t] + 50.0 / kk) * (wt[t] + 0.01) / (tt[t] + 3.0);
      CHECK(o0[t] == doctest::Approx(want).epsilon(1e-15));
    }
  }
}
