#include "srsw/stepper.hpp"

#include <cmath>

#include "srsw/kernels.hpp"

namespace srsw {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::em_ito: return "em_ito";
    case Scheme::heun_strat: return "heun_strat";
    case Scheme::em_ito_if: return "em_ito_if";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "em_ito") return Scheme::em_ito;
  if (name == "heun_strat") return Scheme::heun_strat;
  if (name == "em_ito_if") return Scheme::em_ito_if;
  return std::nullopt;
}

StabilityReport stability_limits(const State& a0, const PhysicalParams& params,
                                 const NoiseBasis& basis) {
  StabilityReport rep;
  const double dx = a0.grid().dx();
  rep.diffusive = 0.2 * dx * dx / std::max(params.nu, params.eta);
  const VectorField u = velocity(a0, params);
  const double umax = std::max(absmax(u.x), absmax(u.y));
  rep.advective = umax > 0.0 ? 0.5 * dx / umax : R_infinite;
  const double xsum = basis.linf_sq_sum();
  rep.noise = xsum > 0.0 ? 0.1 / xsum : R_infinite;
  rep.dt_max = rep.diffusive;
  rep.binding = "diffusive (0.2*dx^2/max(nu,eta))";
  if (rep.advective < rep.dt_max) {
    rep.dt_max = rep.advective;
    rep.binding = "advective (0.5*dx/max|u|)";
  }
  if (rep.noise < rep.dt_max) {
    rep.dt_max = rep.noise;
    rep.binding = "noise (0.1/sum ||xi||_inf^2)";
  }
  return rep;
}

namespace {

// States live on the two-thirds band: every step ends with a projection so
// rounding cannot seed modes whose viscous factor nu k^2 dt exceeds the
// explicit-Euler bound (the stability rule only covers the dealiased band).
void project_band(State& s) {
  dealias_in_place(s.v);
  dealias_in_place(s.h);
}

// exp(-coef k^2 dt) per mode, masked to the two-thirds band
void apply_viscous_factor(ScalarField& f, double coef, double dt) {
  const TorusGrid& g = f.grid();
  thread_local std::vector<std::complex<double>> spec;
  spec.resize(g.nk());
  g.forward(f.data(), spec.data());
  for (int i = 0; i < g.nk(); ++i) {
    if (!g.dealias_mask()[i]) {
      spec[i] = 0.0;
      continue;
    }
    spec[i] *= std::exp(-coef * g.k2()[i] * dt);
  }
  g.inverse(spec.data(), f.data());
}

} // namespace

State step_em_ito(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                  double R, double dt, std::span<const double> dw) {
  const StateGradients grads = StateGradients::of(a);
  const double fr = truncation_value(additive_w12_norm(a), R);
  Tendency drift = assemble_drift(a, params, fr, grads);
  State out = a;
  if (basis.count() > 0) {
    const State corr = ito_correction(basis, a, grads);
    axpy(dt, corr, out);
    const State noise = noise_sum(basis, a, grads, dw);
    axpy(-1.0, noise, out);
  }
  axpy(dt, drift, out);
  project_band(out);
  return out;
}

State step_heun_strat(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                      double R, double dt, std::span<const double> dw) {
  const StateGradients grads_a = StateGradients::of(a);
  const double fr_a = truncation_value(additive_w12_norm(a), R);
  const Tendency drift_a = assemble_drift(a, params, fr_a, grads_a);

  State pred = a;
  axpy(dt, drift_a, pred);
  State noise_a;
  if (basis.count() > 0) {
    noise_a = noise_sum(basis, a, grads_a, dw);
    axpy(-1.0, noise_a, pred);
  }
  project_band(pred);

  const StateGradients grads_p = StateGradients::of(pred);
  const double fr_p = truncation_value(additive_w12_norm(pred), R);
  const Tendency drift_p = assemble_drift(pred, params, fr_p, grads_p);

  State out = a;
  axpy(0.5 * dt, drift_a, out);
  axpy(0.5 * dt, drift_p, out);
  if (basis.count() > 0) {
    const State noise_p = noise_sum(basis, pred, grads_p, dw);
    axpy(-0.5, noise_a, out);
    axpy(-0.5, noise_p, out);
  }
  project_band(out);
  return out;
}

State step_em_ito_if(const State& a, const PhysicalParams& params, const NoiseBasis& basis,
                     double R, double dt, std::span<const double> dw) {
  const StateGradients grads = StateGradients::of(a);
  const double fr = truncation_value(additive_w12_norm(a), R);
  PhysicalParams inviscid = params;
  inviscid.nu = 0.0;
  inviscid.eta = 0.0;
  Tendency drift = assemble_drift(a, inviscid, fr, grads);
  State out = a;
  if (basis.count() > 0) {
    const State corr = ito_correction(basis, a, grads);
    axpy(dt, corr, out);
    const State noise = noise_sum(basis, a, grads, dw);
    axpy(-1.0, noise, out);
  }
  axpy(dt, drift, out);
  apply_viscous_factor(out.v.x, params.nu, dt);
  apply_viscous_factor(out.v.y, params.nu, dt);
  apply_viscous_factor(out.h, params.eta, dt);
  return out;
}

namespace {

struct StepObservables {
  double norm12_add, norm12, norm22, fr, mass_h;
};

StepObservables observe(const State& a, double R) {
  StepObservables o;
  o.norm12_add = additive_w12_norm(a);
  o.norm12 = state_norm(a, 1);
  o.norm22 = state_norm(a, 2);
  o.fr = truncation_value(o.norm12_add, R);
  o.mass_h = mass(a);
  return o;
}

} // namespace

TrajectoryRecord integrate(const State& initial, const PhysicalParams& params,
                           const NoiseBasis& basis, const NoisePath& path,
                           const IntegrateConfig& config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  const int steps = static_cast<int>(std::llround(config.T / config.dt));
  if (basis.count() > 0) {
    if (path.modes != basis.count())
      throw std::invalid_argument("integrate: noise path mode count does not match basis");
    if (path.steps < steps)
      throw std::invalid_argument("integrate: noise path shorter than requested horizon");
  }

  TrajectoryRecord rec;
  rec.scheme = config.scheme;
  rec.dt = config.dt;
  rec.R = config.R;
  rec.seed = config.seed;
  rec.config_hash = config.config_hash;

  State a = initial;
  dealias_in_place(a.v);
  dealias_in_place(a.h);

  double sup_sq = 0.0;
  double time_int = 0.0;
  const std::vector<double> empty_dw(static_cast<size_t>(std::max(basis.count(), 1)), 0.0);

  auto record_step = [&](int j, const State& s) {
    const double t = j * config.dt;
    const StepObservables o = observe(s, config.R);
    sup_sq = std::max(sup_sq, o.norm12 * o.norm12);
    rec.times.push_back(t);
    rec.norm12_add.push_back(o.norm12_add);
    rec.norm12.push_back(o.norm12);
    rec.norm22.push_back(o.norm22);
    rec.t22.push_back(sup_sq + time_int);
    rec.fr_value.push_back(o.fr);
    rec.mass_series.push_back(o.mass_h);
    for (double level : config.monitors.R_levels)
      if (!rec.tau_R_hits.count(level) && o.norm12_add >= level) rec.tau_R_hits[level] = t;
    for (double level : config.monitors.M_levels)
      if (!rec.tau_hat_M_hits.count(level) && rec.t22.back() >= level)
        rec.tau_hat_M_hits[level] = t;
    if (config.record_states && j % config.state_stride == 0) {
      rec.states.push_back(s);
      rec.state_steps.push_back(j);
    }
    // left-endpoint quadrature of int ||a||_{2,2}^2 ds
    time_int += o.norm22 * o.norm22 * config.dt;
    return o.norm12_add;
  };

  double norm_add = record_step(0, a);
  if (norm_add > config.monitors.ceiling) {
    rec.blown_up = true;
    rec.blowup_term = "norm_ceiling";
    rec.final_state = a;
    return rec;
  }

  for (int j = 0; j < steps; ++j) {
    std::span<const double> dw =
        basis.count() > 0 ? path.step_increments(j) : std::span<const double>(empty_dw);
    try {
      switch (config.scheme) {
        case Scheme::em_ito: a = step_em_ito(a, params, basis, config.R, config.dt, dw); break;
        case Scheme::heun_strat:
          a = step_heun_strat(a, params, basis, config.R, config.dt, dw);
          break;
        case Scheme::em_ito_if:
          a = step_em_ito_if(a, params, basis, config.R, config.dt, dw);
          break;
      }
    } catch (const DiagnosticError& e) {
      rec.blown_up = true;
      rec.blowup_term = e.term();
      break;
    }
    if (!all_finite(a)) {
      rec.blown_up = true;
      rec.blowup_term = "state";
      break;
    }
    norm_add = record_step(j + 1, a);
    if (norm_add > config.monitors.ceiling) {
      rec.blown_up = true;
      rec.blowup_term = "norm_ceiling";
      break;
    }
  }

  rec.final_state = a;
  return rec;
}

} // namespace srsw
