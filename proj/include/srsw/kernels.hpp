#pragma once

#include <cstddef>

// Flat array kernels shared by all field operations. Pointwise loops are
// OpenMP-parallel above a size threshold; element i of the output never
// depends on any other element, so results are bitwise identical for any
// thread count. Reductions (dot, absmax) stay serial: at simulation grid
// sizes they are memory-bound anyway, and a fixed summation order keeps
// artifacts byte-reproducible.

namespace srsw::kernels {

inline constexpr std::ptrdiff_t par_threshold = 1 << 16;

void fill(double* x, double value, std::ptrdiff_t m);
void copy(const double* x, double* y, std::ptrdiff_t m);
void scale(double alpha, double* x, std::ptrdiff_t m);
void add(const double* a, const double* b, double* out, std::ptrdiff_t m);
void sub(const double* a, const double* b, double* out, std::ptrdiff_t m);
void mul(const double* a, const double* b, double* out, std::ptrdiff_t m);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::ptrdiff_t m);
// out += a * b
void mul_add(const double* a, const double* b, double* out, std::ptrdiff_t m);

double dot(const double* a, const double* b, std::ptrdiff_t m);
double sum(const double* x, std::ptrdiff_t m);
double absmax(const double* x, std::ptrdiff_t m);
bool all_finite(const double* x, std::ptrdiff_t m);

// Multiply interleaved complex spectrum (2*m doubles) by a real multiplier
// per complex entry.
void spectral_scale(double* spec_interleaved, const double* mult, std::ptrdiff_t m);

} // namespace srsw::kernels
