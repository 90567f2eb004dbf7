#include "reference.hpp"

#include <cmath>

namespace ref {

using srsw::Axis;
using srsw::ScalarField;
using srsw::State;
using srsw::VectorField;

void mul(const double* a, const double* b, double* out, std::ptrdiff_t m) {
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = a[i] * b[i];
}

void add(const double* a, const double* b, double* out, std::ptrdiff_t m) {
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = a[i] + b[i];
}

void axpy(double alpha, const double* x, double* y, std::ptrdiff_t m) {
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::ptrdiff_t m) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < m; ++i) s += a[i] * b[i];
  return s;
}

ScalarField fd_derivative(const ScalarField& f, Axis axis) {
  const int n = f.grid().n();
  const double h = f.grid().dx();
  ScalarField out(f.grid_ptr());
  auto at = [&](int ix, int iy) {
    return f(((ix % n) + n) % n, ((iy % n) + n) % n);
  };
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      double v;
      if (axis == Axis::x)
        v = (-at(ix + 2, iy) + 8.0 * at(ix + 1, iy) - 8.0 * at(ix - 1, iy) + at(ix - 2, iy)) /
            (12.0 * h);
      else
        v = (-at(ix, iy + 2) + 8.0 * at(ix, iy + 1) - 8.0 * at(ix, iy - 1) + at(ix, iy - 2)) /
            (12.0 * h);
      out(ix, iy) = v;
    }
  return out;
}

ScalarField fd_laplacian(const ScalarField& f) {
  const int n = f.grid().n();
  const double h2 = f.grid().dx() * f.grid().dx();
  ScalarField out(f.grid_ptr());
  auto at = [&](int ix, int iy) {
    return f(((ix % n) + n) % n, ((iy % n) + n) % n);
  };
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double dxx = (-at(ix + 2, iy) + 16.0 * at(ix + 1, iy) - 30.0 * at(ix, iy) +
                          16.0 * at(ix - 1, iy) - at(ix - 2, iy)) /
                         (12.0 * h2);
      const double dyy = (-at(ix, iy + 2) + 16.0 * at(ix, iy + 1) - 30.0 * at(ix, iy) +
                          16.0 * at(ix, iy - 1) - at(ix, iy - 2)) /
                         (12.0 * h2);
      out(ix, iy) = dxx + dyy;
    }
  return out;
}

ScalarField fd_advection(const VectorField& xi, const ScalarField& f) {
  const ScalarField fx = fd_derivative(f, Axis::x);
  const ScalarField fy = fd_derivative(f, Axis::y);
  ScalarField out(f.grid_ptr());
  for (int i = 0; i < out.size(); ++i)
    out.data()[i] = xi.x.data()[i] * fx.data()[i] + xi.y.data()[i] * fy.data()[i];
  return out;
}

void fd_drift(const State& state, const srsw::PhysicalParams& params, VectorField& dv,
              ScalarField& dh) {
  const auto grid = state.grid_ptr();
  const int m = state.h.size();
  const VectorField u = srsw::velocity(state, params);
  const ScalarField p = srsw::pressure(state, params);

  dv = VectorField(grid);
  dh = ScalarField(grid);

  const ScalarField adv1 = fd_advection(u, state.v.x);
  const ScalarField adv2 = fd_advection(u, state.v.y);
  const ScalarField px = fd_derivative(p, Axis::x);
  const ScalarField py = fd_derivative(p, Axis::y);
  const ScalarField lv1 = fd_laplacian(state.v.x);
  const ScalarField lv2 = fd_laplacian(state.v.y);
  for (int i = 0; i < m; ++i) {
    dv.x.data()[i] = -adv1.data()[i] + params.coriolis_f * u.y.data()[i] - px.data()[i] +
                     params.nu * lv1.data()[i];
    dv.y.data()[i] = -adv2.data()[i] - params.coriolis_f * u.x.data()[i] - py.data()[i] +
                     params.nu * lv2.data()[i];
  }

  ScalarField hu1(grid), hu2(grid);
  for (int i = 0; i < m; ++i) {
    hu1.data()[i] = state.h.data()[i] * u.x.data()[i];
    hu2.data()[i] = state.h.data()[i] * u.y.data()[i];
  }
  const ScalarField fx = fd_derivative(hu1, Axis::x);
  const ScalarField fy = fd_derivative(hu2, Axis::y);
  const ScalarField lh = fd_laplacian(state.h);
  for (int i = 0; i < m; ++i)
    dh.data()[i] = -(fx.data()[i] + fy.data()[i]) + params.eta * lh.data()[i];
}

double quadrature_inner_product(const ScalarField& f, const ScalarField& g) {
  const int n = f.grid().n();
  double s = 0.0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) s += f(ix, iy) * g(ix, iy);
  return s * f.grid().cell_area();
}

double multiindex_sobolev_sq(const ScalarField& f, int k) {
  double acc = 0.0;
  for (int a1 = 0; a1 <= k; ++a1)
    for (int a2 = 0; a2 + a1 <= k; ++a2) {
      ScalarField d = f;
      if (a1 > 0) d = srsw::derivative(d, Axis::x, a1);
      if (a2 > 0) d = srsw::derivative(d, Axis::y, a2);
      acc += quadrature_inner_product(d, d);
    }
  return acc;
}

std::vector<std::complex<double>> naive_dft(const ScalarField& f) {
  const int n = f.grid().n();
  std::vector<std::complex<double>> out(static_cast<size_t>(n) * n);
  for (int kx = 0; kx < n; ++kx)
    for (int ky = 0; ky < n; ++ky) {
      std::complex<double> acc = 0.0;
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const double phase = -srsw::two_pi * (static_cast<double>(kx) * ix + static_cast<double>(ky) * iy) / n;
          acc += f(ix, iy) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
      out[static_cast<size_t>(kx) * n + ky] = acc;
    }
  return out;
}

} // namespace ref
