#include "srsw/dynamics.hpp"

#include <cmath>

#include "srsw/kernels.hpp"

namespace srsw {

void axpy(double alpha, const Tendency& t, State& s) {
  axpy(alpha, t.dv, s.v);
  axpy(alpha, t.dh, s.h);
}

double truncation_value(double x, double R) {
  if (x < 0.0) throw std::invalid_argument("truncation_value: x must be >= 0");
  if (!(R > 0.0)) throw std::invalid_argument("truncation_value: R must be > 0");
  if (x <= R) return 1.0;
  if (x >= R + 1.0) return 0.0;
  const double t = x - R;
  const double q = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  return 1.0 - q;
}

namespace {

void check_term(const ScalarField& f, const char* term) {
  if (!all_finite(f)) throw DiagnosticError(term, std::string("non-finite values in ") + term);
}

void check_term(const VectorField& f, const char* term) {
  if (!all_finite(f)) throw DiagnosticError(term, std::string("non-finite values in ") + term);
}

} // namespace

Tendency assemble_drift(const State& state, const PhysicalParams& params, double fr,
                        const StateGradients& grads) {
  const GridPtr& grid = state.grid_ptr();
  const int m = state.h.size();
  Tendency out(grid);

  const VectorField u = velocity(state, params);
  check_term(u, "velocity");

  if (fr != 0.0) {
    // advective term u . grad v
    VectorField adv(grid);
    kernels::mul(u.x.data(), grads.dv1dx.data(), adv.x.data(), m);
    kernels::mul_add(u.y.data(), grads.dv1dy.data(), adv.x.data(), m);
    kernels::mul(u.x.data(), grads.dv2dx.data(), adv.y.data(), m);
    kernels::mul_add(u.y.data(), grads.dv2dy.data(), adv.y.data(), m);
    dealias_in_place(adv);
    check_term(adv, "advection_v");
    if (fr != 1.0) adv *= fr;
    out.dv -= adv;

    // flux divergence div(h u)
    ScalarField flux = derivative(dealiased_product(state.h, u.x), Axis::x, 1);
    flux += derivative(dealiased_product(state.h, u.y), Axis::y, 1);
    check_term(flux, "flux_div_h");
    if (fr != 1.0) flux *= fr;
    out.dh -= flux;
  }

  const VectorField cor = coriolis(u, params.coriolis_f);
  check_term(cor, "coriolis");
  out.dv -= cor;

  const ScalarField p = pressure(state, params);
  auto [dpdx, dpdy] = gradient(p);
  check_term(dpdx, "pressure_gradient");
  check_term(dpdy, "pressure_gradient");
  out.dv.x -= dpdx;
  out.dv.y -= dpdy;

  // dissipative sign convention: dv = ... + nu Lap v, dh = ... + eta Lap h
  if (params.nu != 0.0) {
    ScalarField lap = laplacian(state.v.x);
    check_term(lap, "viscous_v");
    kernels::axpy(params.nu, lap.data(), out.dv.x.data(), m);
    lap = laplacian(state.v.y);
    check_term(lap, "viscous_v");
    kernels::axpy(params.nu, lap.data(), out.dv.y.data(), m);
  }
  if (params.eta != 0.0) {
    ScalarField lap = laplacian(state.h);
    check_term(lap, "viscous_h");
    kernels::axpy(params.eta, lap.data(), out.dh.data(), m);
  }

  return out;
}

Tendency drift_deterministic(const State& state, const PhysicalParams& params) {
  return assemble_drift(state, params, 1.0, StateGradients::of(state));
}

Tendency drift_truncated(const State& state, const PhysicalParams& params, double R) {
  const double fr = truncation_value(additive_w12_norm(state), R);
  return assemble_drift(state, params, fr, StateGradients::of(state));
}

Tendency ito_rhs(const State& state, const PhysicalParams& params, const NoiseBasis& basis,
                 double R) {
  const StateGradients grads = StateGradients::of(state);
  const double fr = truncation_value(additive_w12_norm(state), R);
  Tendency out = assemble_drift(state, params, fr, grads);
  if (basis.count() > 0) {
    const State corr = ito_correction(basis, state, grads);
    check_term(corr.v, "ito_correction");
    check_term(corr.h, "ito_correction");
    out.dv += corr.v;
    out.dh += corr.h;
  }
  return out;
}

NonlinearBoundReport nonlinear_l2_bound_check(std::span<const State> states,
                                              const PhysicalParams& params, double R) {
  NonlinearBoundReport rep;
  rep.samples = static_cast<int>(states.size());
  for (const State& a : states) {
    rep.resolution = a.grid().n();
    const double fr = truncation_value(additive_w12_norm(a), R);
    if (fr == 0.0) continue;
    const VectorField u = velocity(a, params);
    const VectorField transport = lie_transport(u, a.v);
    const double lhs_u = fr * fr * inner_product(transport, transport);
    const double v22 = sobolev_norm(a.v, 2);

    ScalarField flux = derivative(dealiased_product(a.h, a.v.x), Axis::x, 1);
    flux += derivative(dealiased_product(a.h, a.v.y), Axis::y, 1);
    const double lhs_h = fr * fr * inner_product(flux, flux);
    const double h22 = sobolev_norm(a.h, 2);

    rep.ratio_transport = std::max(rep.ratio_transport, lhs_u / (v22 * v22 + 1.0));
    rep.ratio_flux = std::max(rep.ratio_flux, lhs_h / (v22 * v22 + h22 * h22 + 1.0));
  }
  return rep;
}

} // namespace srsw
