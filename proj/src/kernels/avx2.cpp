// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace blame::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // mul then add, not fmadd: keeps results identical to the scalar kernel.
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  for (; i < n; ++i) x[i] *= a;
}

void topic_weights(const int* doc_topic, const int* word_topic, const int* topic_total,
                   double alpha, double beta, double vbeta, double* out, std::size_t k) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vv = _mm256_set1_pd(vbeta);
  std::size_t i = 0;
  for (; i + 4 <= k; i += 4) {
    const __m256d nd = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(doc_topic + i)));
    const __m256d nw = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(word_topic + i)));
    const __m256d nt = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(topic_total + i)));
    const __m256d num = _mm256_mul_pd(_mm256_add_pd(nd, va), _mm256_add_pd(nw, vb));
    _mm256_storeu_pd(out + i, _mm256_div_pd(num, _mm256_add_pd(nt, vv)));
  }
  for (; i < k; ++i) {
    const double a = static_cast<double>(doc_topic[i]) + alpha;
    const double b = static_cast<double>(word_topic[i]) + beta;
    const double c = static_cast<double>(topic_total[i]) + vbeta;
    out[i] = (a * b) / c;
  }
}

}  // namespace

const KernelTable table{dot, sum_squares, axpy, scale, topic_weights};

}  // namespace blame::kernels::avx2
