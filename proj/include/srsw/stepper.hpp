#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srsw/dynamics.hpp"

namespace srsw {

inline constexpr double R_infinite = std::numeric_limits<double>::infinity();

// em_ito_if is the integrating-factor variant of em_ito: the viscous flow is
// applied exactly in spectral space, lifting the diffusive step-size bound
// for stiff runs; drift, Ito correction and noise stay explicit.
enum class Scheme { em_ito, heun_strat, em_ito_if };

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// Explicit-scheme step-size limits evaluated on the initial state:
///   dt <= min(0.2 dx^2 / max(nu,eta), 0.5 dx / max|u|, 0.1 / sum_i ||xi_i||_inf^2)
struct StabilityReport {
  double diffusive = 0.0;
  double advective = 0.0;
  double noise = 0.0;
  double dt_max = 0.0;
  const char* binding = "";
};

StabilityReport stability_limits(const State& a0, const PhysicalParams& params,
                                 const NoiseBasis& basis);

struct MonitorConfig {
  std::vector<double> R_levels; // tau^R on ||v||_{1,2}+||h||_{1,2}
  std::vector<double> M_levels; // tau-hat^M on the ||.||_{t,2,2} accumulator
  double ceiling = 1e6;         // hard blow-up proxy on the additive norm
};

struct IntegrateConfig {
  Scheme scheme = Scheme::em_ito;
  double T = 1.0;
  double dt = 1e-2;
  double R = R_infinite;
  MonitorConfig monitors;
  bool record_states = false;
  int state_stride = 1;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Per-step time series of an integration. norm12_add is the additive norm
/// the truncation and tau^R reference; norm12/norm22 are the canonical
/// quadrature norms of the triple; t22 is the running
/// sup_{s<=t} ||a_s||_{1,2}^2 + int_0^t ||a_s||_{2,2}^2 ds with left-endpoint
/// quadrature (nondecreasing by construction).
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> norm12_add;
  std::vector<double> norm12;
  std::vector<double> norm22;
  std::vector<double> t22;
  std::vector<double> fr_value;
  std::vector<double> mass_series;

  std::vector<State> states; // only when record_states; thinned by stride
  std::vector<int> state_steps;

  std::map<double, double> tau_R_hits;     // level -> first hitting time
  std::map<double, double> tau_hat_M_hits; // level -> first hitting time

  bool blown_up = false;
  std::string blowup_term;

  Scheme scheme = Scheme::em_ito;
  double dt = 0.0;
  double R = R_infinite;
  std::uint64_t seed = 0;
  std::string config_hash;

  State final_state;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double last_time() const { return times.empty() ? 0.0 : times.back(); }
};

/// One Euler-Maruyama step of the Ito form:
///   a+ = a + dt [drift_truncated(a) + ito_correction(a)] - sum_i G_i(a) dW_i
/// (the dW term enters negatively: the noise terms sit on the left-hand side
/// of the evolution equations). The result is projected onto the two-thirds
/// band; states are band-invariant throughout an integration, so the
/// stability rule's diffusive bound covers every mode the state carries.
State step_em_ito(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                  double R, double dt, std::span<const double> dw);

/// Heun predictor-corrector for the Stratonovich form: drift and noise
/// coefficients averaged between the base point and the Euler predictor; no
/// Ito correction term.
State step_heun_strat(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                      double R, double dt, std::span<const double> dw);

/// Integrating-factor Euler-Maruyama: the nonviscous tendency and noise are
/// stepped explicitly, then the exact viscous decay exp(-nu k^2 dt) /
/// exp(-eta k^2 dt) is applied mode by mode.
State step_em_ito_if(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                     double R, double dt, std::span<const double> dw);

/// Step to T (or to blow-up), recording norms and evaluating the tau^R /
/// tau-hat^M monitors at every step boundary. Blow-up (non-finite state or
/// additive norm above the ceiling) returns the partial record flagged
/// blown_up with the last finite time.
TrajectoryRecord integrate(const State& initial, const PhysicalParams& params,
                           const NoiseBasis& basis, const NoisePath& path,
                           const IntegrateConfig& config);

} // namespace srsw
