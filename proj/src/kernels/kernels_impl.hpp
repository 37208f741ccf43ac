#pragma once

#include <cstddef>

namespace blame::kernels {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, double, std::size_t);
  void (*topic_weights)(const int*, const int*, const int*, double, double, double, double*,
                        std::size_t);
};

namespace scalar {
extern const KernelTable table;
}

#if defined(BLAME_HAVE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace blame::kernels
