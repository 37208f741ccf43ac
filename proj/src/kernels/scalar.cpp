#include "kernels_impl.hpp"

namespace blame::kernels::scalar {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void topic_weights(const int* doc_topic, const int* word_topic, const int* topic_total,
                   double alpha, double beta, double vbeta, double* out, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    const double a = static_cast<double>(doc_topic[i]) + alpha;
    const double b = static_cast<double>(word_topic[i]) + beta;
    const double c = static_cast<double>(topic_total[i]) + vbeta;
    out[i] = (a * b) / c;
  }
}

}  // namespace

const KernelTable table{dot, sum_squares, axpy, scale, topic_weights};

}  // namespace blame::kernels::scalar
