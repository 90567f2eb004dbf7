#pragma once

#include <span>

#include "srsw/noise.hpp"
#include "srsw/state.hpp"

namespace srsw {

/// Thrown when a tendency term or an integration step produces NaN/Inf;
/// carries the name of the offending term.
class DiagnosticError : public std::runtime_error {
public:
  DiagnosticError(std::string term, const std::string& what)
      : std::runtime_error(what), term_(std::move(term)) {}
  const std::string& term() const { return term_; }

private:
  std::string term_;
};

/// Time-derivative contributions, per unit time.
struct Tendency {
  VectorField dv;
  ScalarField dh;

  Tendency() = default;
  explicit Tendency(GridPtr grid) : dv(grid), dh(grid) {}

  Tendency& operator+=(const Tendency& o) {
    dv += o.dv;
    dh += o.dh;
    return *this;
  }
};

void axpy(double alpha, const Tendency& t, State& s);

/// Smooth cutoff f_R: exactly 1 on [0,R], exactly 0 on [R+1,inf), quintic
/// smoothstep in between (C^2, monotone). R = inf gives 1 for all finite x.
double truncation_value(double x, double R);

/// Shared tendency assembly:
///   dv = -fr (u.grad v) - f zhat x u - grad p + nu Lap v
///   dh = -fr div(h u)   + eta Lap h
/// with quadratic products dealiased. The truncated and untruncated drifts
/// are this one code path with different fr, which is what makes them
/// bitwise identical while f_R evaluates to 1.
Tendency assemble_drift(const State& state, const PhysicalParams& params, double fr,
                        const StateGradients& grads);

Tendency drift_deterministic(const State& state, const PhysicalParams& params);
/// Advective nonlinearities scaled by f_R(||v||_{1,2} + ||h||_{1,2});
/// Coriolis, pressure and viscosity untouched.
Tendency drift_truncated(const State& state, const PhysicalParams& params, double R);
/// drift_truncated plus the Ito correction 1/2 sum_i G_i^2.
Tendency ito_rhs(const State& state, const PhysicalParams& params, const NoiseBasis& basis,
                 double R);

/// Empirical check of the truncated-nonlinearity L^2 bounds
///   f_R^2 ||L_u v||^2     <= C(R) (||v||_{2,2}^2 + 1)
///   f_R^2 ||div(h v)||^2  <= C(R) (||v||_{2,2}^2 + ||h||_{2,2}^2 + 1)
/// over a state ensemble; reports the two sup ratios (the fitted C(R)).
struct NonlinearBoundReport {
  double ratio_transport = 0.0;
  double ratio_flux = 0.0;
  int samples = 0;
  int resolution = 0;
};

NonlinearBoundReport nonlinear_l2_bound_check(std::span<const State> states,
                                              const PhysicalParams& params, double R);

} // namespace srsw
