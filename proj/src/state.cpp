#include "srsw/state.hpp"

#include "srsw/kernels.hpp"

namespace srsw {

void PhysicalParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("params.epsilon must be > 0");
  if (!(froude > 0.0)) throw std::invalid_argument("params.froude must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("params.nu must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("params.eta must be > 0");
}

VectorField velocity(const State& state, const PhysicalParams& params) {
  VectorField u = state.v;
  if (!params.rotation_R.empty()) u -= params.rotation_R;
  u *= 1.0 / params.epsilon;
  return u;
}

ScalarField pressure(const State& state, const PhysicalParams& params) {
  ScalarField p = state.h;
  if (!params.topography_b.empty()) p -= params.topography_b;
  p *= 1.0 / (params.epsilon * params.froude);
  return p;
}

VectorField coriolis(const VectorField& u, double f) {
  VectorField out(u.grid_ptr());
  const int m = u.x.size();
  kernels::copy(u.y.data(), out.x.data(), m);
  kernels::scale(-f, out.x.data(), m);
  kernels::copy(u.x.data(), out.y.data(), m);
  kernels::scale(f, out.y.data(), m);
  return out;
}

double mass(const State& state) {
  return kernels::sum(state.h.data(), state.h.size()) * state.grid().cell_area();
}

double additive_w12_norm(const State& state) {
  return sobolev_norm(state.v, 1) + sobolev_norm(state.h, 1);
}

double state_norm(const State& state, int k) {
  const ScalarField* p[] = {&state.v.x, &state.v.y, &state.h};
  return sobolev_norm(p, k);
}

double state_l2_norm(const State& state) { return state_norm(state, 0); }

void axpy(double alpha, const State& x, State& y) {
  axpy(alpha, x.v, y.v);
  axpy(alpha, x.h, y.h);
}

bool all_finite(const State& state) { return all_finite(state.v) && all_finite(state.h); }

} // namespace srsw
