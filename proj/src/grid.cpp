#include "srsw/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "srsw/kernels.hpp"

namespace srsw {

namespace {
// FFTW plan creation is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Scratch {
  std::vector<double> real;
  std::vector<std::complex<double>> spec;
  std::vector<std::complex<double>> spec_c2r; // clobbered by c2r execution
};

Scratch& scratch_for(int n) {
  thread_local Scratch s;
  s.real.resize(static_cast<size_t>(n) * n);
  s.spec.resize(static_cast<size_t>(n) * (n / 2 + 1));
  s.spec_c2r.resize(static_cast<size_t>(n) * (n / 2 + 1));
  return s;
}
} // namespace

GridPtr TorusGrid::make(int n, double length) {
  return GridPtr(new TorusGrid(n, length));
}

TorusGrid::TorusGrid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("TorusGrid: n must be even and >= 8");
  if (!(length > 0.0)) throw std::invalid_argument("TorusGrid: length must be > 0");

  const int nky = n / 2 + 1;
  kx_.resize(nk());
  ky_.resize(nk());
  k2_.resize(nk());
  mask_.resize(nk());
  hweight_.resize(nk());
  const double s2 = kscale() * kscale();
  const int kcut = n / 3; // keep max(|kx|,|ky|) <= n/3
  for (int ix = 0; ix < n; ++ix) {
    const int kx = (ix <= n / 2) ? ix : ix - n;
    for (int iy = 0; iy < nky; ++iy) {
      const int si = ix * nky + iy;
      kx_[si] = kx;
      ky_[si] = iy;
      k2_[si] = (static_cast<double>(kx) * kx + static_cast<double>(iy) * iy) * s2;
      mask_[si] = (std::abs(kx) <= kcut && iy <= kcut) ? 1 : 0;
      hweight_[si] = (iy == 0 || iy == n / 2) ? 1.0 : 2.0;
    }
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps plan selection deterministic run to run;
  // FFTW_UNALIGNED lets plans execute on ordinary vector storage.
  std::vector<double> rbuf(static_cast<size_t>(n) * n);
  std::vector<std::complex<double>> cbuf(static_cast<size_t>(n) * nky);
  plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, rbuf.data(),
                                   reinterpret_cast<fftw_complex*>(cbuf.data()),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inv_ = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                   rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("TorusGrid: FFTW planning failed");
}

TorusGrid::~TorusGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void TorusGrid::forward(const double* in, std::complex<double>* out) const {
  // Out-of-place r2c preserves its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void TorusGrid::inverse(const std::complex<double>* in, double* out) const {
  // c2r destroys its input, so run on a copy.
  Scratch& s = scratch_for(n_);
  std::copy(in, in + nk(), s.spec_c2r.data());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                       reinterpret_cast<fftw_complex*>(s.spec_c2r.data()), out);
  kernels::scale(1.0 / size(), out, size());
}

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), v_(static_cast<size_t>(grid_->size()), value) {}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::add(v_.data(), o.v_.data(), v_.data(), size());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::sub(v_.data(), o.v_.data(), v_.data(), size());
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  kernels::scale(a, v_.data(), size());
  return *this;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("field without grid");
  if (&a.grid() != &b.grid() && !a.grid().compatible(b.grid()))
    throw std::invalid_argument("mismatched grids");
}

namespace {

// Apply a per-mode complex multiplier given by (re, im) tables.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::vector<std::complex<double>>& mult) {
  const TorusGrid& g = f.grid();
  Scratch& s = scratch_for(g.n());
  g.forward(f.data(), s.spec.data());
  const int m = g.nk();
  for (int i = 0; i < m; ++i) s.spec[i] *= mult[i];
  ScalarField out(f.grid_ptr());
  g.inverse(s.spec.data(), out.data());
  return out;
}

std::vector<std::complex<double>> derivative_multiplier(const TorusGrid& g, Axis axis,
                                                        int order) {
  const int n = g.n();
  std::vector<std::complex<double>> mult(g.nk());
  const double ks = g.kscale();
  const bool odd = (order % 2) != 0;
  for (int i = 0; i < g.nk(); ++i) {
    const int k = (axis == Axis::x) ? g.kx()[i] : g.ky()[i];
    if (odd && std::abs(k) == n / 2) {
      // Nyquist line carries no sign information for odd derivatives.
      mult[i] = 0.0;
      continue;
    }
    mult[i] = std::pow(std::complex<double>(0.0, k * ks), order);
  }
  return mult;
}

} // namespace

ScalarField derivative(const ScalarField& f, Axis axis, int order) {
  if (f.empty()) throw std::invalid_argument("derivative: field without grid");
  if (order < 1) throw std::invalid_argument("derivative: order must be >= 1");
  return apply_multiplier(f, derivative_multiplier(f.grid(), axis, order));
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  const int n = g.n();
  const int m = g.nk();
  Scratch& s = scratch_for(n);
  g.forward(f.data(), s.spec.data());
  std::vector<std::complex<double>> dx(m), dy(m);
  const double ks = g.kscale();
  for (int i = 0; i < m; ++i) {
    const int kx = g.kx()[i];
    const int ky = g.ky()[i];
    const std::complex<double> v = s.spec[i];
    dx[i] = (std::abs(kx) == n / 2) ? 0.0 : std::complex<double>(0.0, kx * ks) * v;
    dy[i] = (ky == n / 2) ? 0.0 : std::complex<double>(0.0, ky * ks) * v;
  }
  std::pair<ScalarField, ScalarField> out{ScalarField(f.grid_ptr()), ScalarField(f.grid_ptr())};
  g.inverse(dx.data(), out.first.data());
  g.inverse(dy.data(), out.second.data());
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  if (f.empty()) throw std::invalid_argument("laplacian: field without grid");
  const TorusGrid& g = f.grid();
  std::vector<std::complex<double>> mult(g.nk());
  for (int i = 0; i < g.nk(); ++i) mult[i] = -g.k2()[i];
  return apply_multiplier(f, mult);
}

ScalarField dealias(const ScalarField& f) {
  ScalarField out = f;
  dealias_in_place(out);
  return out;
}

void dealias_in_place(ScalarField& f) {
  const TorusGrid& g = f.grid();
  Scratch& s = scratch_for(g.n());
  g.forward(f.data(), s.spec.data());
  for (int i = 0; i < g.nk(); ++i)
    if (!g.dealias_mask()[i]) s.spec[i] = 0.0;
  g.inverse(s.spec.data(), f.data());
}

void dealias_in_place(VectorField& f) {
  dealias_in_place(f.x);
  dealias_in_place(f.y);
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  return kernels::dot(f.data(), g.data(), f.size()) * f.grid().cell_area();
}

double inner_product(const VectorField& f, const VectorField& g) {
  return inner_product(f.x, g.x) + inner_product(f.y, g.y);
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }

double mean(const ScalarField& f) {
  return kernels::sum(f.data(), f.size()) / f.size();
}

double sobolev_norm(std::span<const ScalarField* const> fields, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("sobolev_norm: k must be in {0,1,2}");
  double acc = 0.0;
  for (const ScalarField* f : fields) {
    const TorusGrid& g = f->grid();
    Scratch& s = scratch_for(g.n());
    g.forward(f->data(), s.spec.data());
    // Parseval: ||f||^2 = (L^2/n^4) sum_k w_k |fhat_k|^2.
    const double scale = g.area() / (static_cast<double>(g.size()) * g.size());
    double e = 0.0;
    for (int i = 0; i < g.nk(); ++i) {
      double w = 1.0;
      for (int kk = 0; kk < k; ++kk) w *= 1.0 + g.k2()[i];
      e += g.hermitian_weight()[i] * w * std::norm(s.spec[i]);
    }
    acc += scale * e;
  }
  return std::sqrt(acc);
}

double sobolev_norm(const ScalarField& f, int k) {
  const ScalarField* p[] = {&f};
  return sobolev_norm(p, k);
}

double sobolev_norm(const VectorField& f, int k) {
  const ScalarField* p[] = {&f.x, &f.y};
  return sobolev_norm(p, k);
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid_ptr());
  kernels::mul(a.data(), b.data(), out.data(), out.size());
  return out;
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out = multiply(a, b);
  dealias_in_place(out);
  return out;
}

ScalarField add_scaled(const ScalarField& a, double alpha, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out = a;
  kernels::axpy(alpha, b.data(), out.data(), out.size());
  return out;
}

void axpy(double alpha, const ScalarField& x, ScalarField& y) {
  require_same_grid(x, y);
  kernels::axpy(alpha, x.data(), y.data(), y.size());
}

void axpy(double alpha, const VectorField& x, VectorField& y) {
  axpy(alpha, x.x, y.x);
  axpy(alpha, x.y, y.y);
}

double absmax(const ScalarField& f) { return kernels::absmax(f.data(), f.size()); }

bool all_finite(const ScalarField& f) { return kernels::all_finite(f.data(), f.size()); }

bool all_finite(const VectorField& f) { return all_finite(f.x) && all_finite(f.y); }

} // namespace srsw
