#pragma once

// Data-parallel inner loops used by the classifier, the TF-IDF vectorizer and
// the topic sampler. Each kernel has a scalar reference implementation and an
// AVX2 variant; the variant is picked once at startup from CPUID and can be
// pinned with BLAME_SIMD=scalar|avx2 or force_isa().
//
// Elementwise kernels (axpy, scale, topic_weights) are bit-identical across
// ISAs. Reductions (dot, sum_squares) differ only in summation order.

#include <span>
#include <string_view>

namespace blame::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa() noexcept;
bool isa_available(Isa isa) noexcept;
// Throws std::invalid_argument when the ISA is not supported on this CPU.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

double dot(std::span<const double> x, std::span<const double> y) noexcept;
double sum_squares(std::span<const double> x) noexcept;
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void scale(std::span<double> x, double a) noexcept;

// Unnormalized collapsed-Gibbs conditional for every topic k:
//   out[k] = (doc_topic[k] + alpha) * (word_topic[k] + beta) / (topic_total[k] + vbeta)
void topic_weights(std::span<const int> doc_topic, std::span<const int> word_topic,
                   std::span<const int> topic_total, double alpha, double beta, double vbeta,
                   std::span<double> out) noexcept;

}  // namespace blame::kernels
