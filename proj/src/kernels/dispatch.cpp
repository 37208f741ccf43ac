#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "blame/kernels.hpp"
#include "kernels_impl.hpp"

namespace blame::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(BLAME_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept {
  const bool avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("BLAME_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && avx2) return Isa::avx2;
  }
  return avx2 ? Isa::avx2 : Isa::scalar;
}

const KernelTable* table_for(Isa isa) noexcept {
#if defined(BLAME_HAVE_AVX2)
  if (isa == Isa::avx2) return &avx2::table;
#endif
  (void)isa;
  return &scalar::table;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> t{table_for(detect())};
  return t;
}

const KernelTable& k() noexcept { return *current().load(std::memory_order_relaxed); }

}  // namespace

Isa active_isa() noexcept {
#if defined(BLAME_HAVE_AVX2)
  if (&k() == &avx2::table) return Isa::avx2;
#endif
  return Isa::scalar;
}

bool isa_available(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("ISA not available on this CPU: " + std::string(isa_name(isa)));
  }
  current().store(table_for(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  assert(x.size() == y.size());
  return k().dot(x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) noexcept { return k().sum_squares(x.data(), x.size()); }

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  assert(x.size() == y.size());
  k().axpy(a, x.data(), y.data(), x.size());
}

void scale(std::span<double> x, double a) noexcept { k().scale(x.data(), a, x.size()); }

void topic_weights(std::span<const int> doc_topic, std::span<const int> word_topic,
                   std::span<const int> topic_total, double alpha, double beta, double vbeta,
                   std::span<double> out) noexcept {
  assert(doc_topic.size() == out.size() && word_topic.size() == out.size() &&
         topic_total.size() == out.size());
  k().topic_weights(doc_topic.data(), word_topic.data(), topic_total.data(), alpha, beta, vbeta,
                    out.data(), out.size());
}

}  // namespace blame::kernels
