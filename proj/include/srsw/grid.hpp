#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace srsw {

inline constexpr double two_pi = 6.283185307179586476925286766559;

enum class Axis { x, y };

class TorusGrid;
using GridPtr = std::shared_ptr<const TorusGrid>;

/// Uniform n x n discretization of the periodic square [0,length)^2 with
/// half-spectrum real FFT plans (FFTW, deterministic FFTW_ESTIMATE planning).
///
/// Spectral conventions, fixed and relied on throughout:
///  - forward() is the unnormalized DFT; mode (0,0) therefore carries
///    mean(field) * n^2. inverse() divides by n^2, so inverse(forward(f)) == f
///    up to rounding.
///  - storage of the half spectrum is row-major [n][n/2+1]; row index ix maps
///    to kx = ix for ix <= n/2 and ix - n otherwise, column index iy maps to
///    ky = iy in [0, n/2].
///  - odd-order derivatives zero the Nyquist line of their axis to keep
///    outputs real-valued and skew-adjointness exact.
///  - dealias keeps exactly the modes with max(|kx|,|ky|) <= n/3.
///
/// Grids are immutable after construction and shareable across threads;
/// transform execution is thread-safe (each call uses its own scratch).
class TorusGrid {
public:
  static GridPtr make(int n, double length = two_pi);
  ~TorusGrid();

  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  int n() const { return n_; }
  int size() const { return n_ * n_; }
  int nk() const { return n_ * (n_ / 2 + 1); }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  double cell_area() const { return dx() * dx(); }
  double area() const { return length_ * length_; }
  double x(int ix) const { return ix * dx(); }
  double y(int iy) const { return iy * dx(); }
  /// 2*pi/length: converts integer wavenumbers to physical ones.
  double kscale() const { return two_pi / length_; }

  /// Integer wavenumbers per spectral index.
  std::span<const int> kx() const { return kx_; }
  std::span<const int> ky() const { return ky_; }
  /// Physical |k|^2 per spectral index (Nyquist included at |n/2|).
  std::span<const double> k2() const { return k2_; }
  /// Two-thirds-rule mask, true where the mode is kept.
  std::span<const unsigned char> dealias_mask() const { return mask_; }
  /// Parseval weight (2 for modes whose conjugate twin is not stored).
  std::span<const double> hermitian_weight() const { return hweight_; }

  /// Unnormalized r2c transform; input is preserved.
  void forward(const double* in, std::complex<double>* out) const;
  /// c2r transform including the 1/n^2 normalization; input is preserved.
  void inverse(const std::complex<double>* in, double* out) const;

  bool compatible(const TorusGrid& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

private:
  TorusGrid(int n, double length);

  int n_ = 0;
  double length_ = two_pi;
  std::vector<int> kx_, ky_;
  std::vector<double> k2_;
  std::vector<unsigned char> mask_;
  std::vector<double> hweight_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

/// Real scalar field on a TorusGrid, stored row-major (x outer, y inner).
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return !grid_; }
  int size() const { return static_cast<int>(v_.size()); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator()(int ix, int iy) { return v_[ix * grid_->n() + iy]; }
  double operator()(int ix, int iy) const { return v_[ix * grid_->n() + iy]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

private:
  GridPtr grid_;
  std::vector<double> v_;
};

/// Pair of scalar fields forming a 2-vector field.
struct VectorField {
  ScalarField x, y;

  VectorField() = default;
  explicit VectorField(GridPtr grid, double vx = 0.0, double vy = 0.0)
      : x(grid, vx), y(grid, vy) {}

  const TorusGrid& grid() const { return x.grid(); }
  const GridPtr& grid_ptr() const { return x.grid_ptr(); }
  bool empty() const { return x.empty(); }

  VectorField& operator+=(const VectorField& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  VectorField& operator*=(double a) {
    x *= a;
    y *= a;
    return *this;
  }
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Fill from an analytic function of (x, y).
template <class F>
ScalarField make_field(GridPtr grid, F&& f) {
  ScalarField out(grid);
  const int n = grid->n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) out(ix, iy) = f(grid->x(ix), grid->y(iy));
  return out;
}

// --- spectral calculus ---

/// Spectral partial derivative; exact for resolved modes.
ScalarField derivative(const ScalarField& f, Axis axis, int order);
/// d/dx and d/dy in one forward transform.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
/// Zero the modes masked by the two-thirds rule; idempotent.
ScalarField dealias(const ScalarField& f);
void dealias_in_place(ScalarField& f);
void dealias_in_place(VectorField& f);

// --- quadrature and norms ---

/// Uniform quadrature of the integral of f*g over the torus.
double inner_product(const ScalarField& f, const ScalarField& g);
double inner_product(const VectorField& f, const VectorField& g);
double l2_norm(const ScalarField& f);
double mean(const ScalarField& f);

/// W^{k,2} norm with spectral weight (1+|k|^2)^k summed over the listed
/// component fields in quadrature; k in {0,1,2}. Exact multi-index norm at
/// k <= 1, equivalent within [1,2] on the squares at k = 2.
double sobolev_norm(std::span<const ScalarField* const> fields, int k);
double sobolev_norm(const ScalarField& f, int k);
double sobolev_norm(const VectorField& f, int k);

// --- pointwise algebra ---

ScalarField multiply(const ScalarField& a, const ScalarField& b);
/// Pointwise product followed by dealiasing (every quadratic nonlinearity
/// goes through this).
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);
ScalarField add_scaled(const ScalarField& a, double alpha, const ScalarField& b);
void axpy(double alpha, const ScalarField& x, ScalarField& y);
void axpy(double alpha, const VectorField& x, VectorField& y);

double absmax(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

} // namespace srsw
