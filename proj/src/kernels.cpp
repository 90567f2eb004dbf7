#include "srsw/kernels.hpp"

#include <omp.h>

#include <cmath>

namespace srsw::kernels {

void fill(double* x, double value, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) x[i] = value;
}

void copy(const double* x, double* y, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] = x[i];
}

void scale(double alpha, double* x, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) x[i] *= alpha;
}

void add(const double* a, const double* b, double* out, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] += alpha * x[i];
}

void mul_add(const double* a, const double* b, double* out, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] += a[i] * b[i];
}

double dot(const double* a, const double* b, std::ptrdiff_t m) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < m; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* x, std::ptrdiff_t m) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < m; ++i) s += x[i];
  return s;
}

double absmax(const double* x, std::ptrdiff_t m) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < m; ++i) s = std::max(s, std::abs(x[i]));
  return s;
}

bool all_finite(const double* x, std::ptrdiff_t m) {
  for (std::ptrdiff_t i = 0; i < m; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

void spectral_scale(double* spec, const double* mult, std::ptrdiff_t m) {
#pragma omp parallel for schedule(static) if (m >= par_threshold && !omp_in_parallel())
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    spec[2 * i] *= mult[i];
    spec[2 * i + 1] *= mult[i];
  }
}

} // namespace srsw::kernels
