#include "srsw/picard.hpp"

#include <cmath>

#include "srsw/kernels.hpp"

namespace srsw {

ForcingSeries ForcingSeries::scaled(double factor) const {
  ForcingSeries out = *this;
  for (VectorField& f : out.fv) f *= factor;
  for (ScalarField& f : out.fh) f *= factor;
  return out;
}

ForcingSeries frozen_forcing(const TrajectoryRecord& prev, const PhysicalParams& params,
                             double R) {
  if (prev.states.empty())
    throw std::invalid_argument("frozen_forcing: previous record carries no states");
  ForcingSeries out;
  out.fv.reserve(prev.states.size());
  out.fh.reserve(prev.states.size());
  for (const State& a : prev.states) {
    const double fr = truncation_value(additive_w12_norm(a), R);
    VectorField fv(a.grid_ptr());
    ScalarField fh(a.grid_ptr());
    if (fr != 0.0) {
      const VectorField u = velocity(a, params);
      fv = lie_transport(u, a.v);
      fv *= -fr;
      fh = derivative(dealiased_product(a.h, u.x), Axis::x, 1);
      fh += derivative(dealiased_product(a.h, u.y), Axis::y, 1);
      fh *= -fr;
    }
    out.fv.push_back(std::move(fv));
    out.fh.push_back(std::move(fh));
  }
  return out;
}

TrajectoryRecord integrate_linear_spde(const State& a0, const PhysicalParams& params,
                                       const NoiseBasis& basis, const NoisePath& path,
                                       const IntegrateConfig& config,
                                       const ForcingSeries& forcing) {
  const int steps = static_cast<int>(std::llround(config.T / config.dt));
  if (forcing.steps() < steps)
    throw std::invalid_argument("integrate_linear_spde: forcing series shorter than horizon");
  if (basis.count() > 0 && path.steps < steps)
    throw std::invalid_argument("integrate_linear_spde: noise path shorter than horizon");

  TrajectoryRecord rec;
  rec.scheme = Scheme::em_ito;
  rec.dt = config.dt;
  rec.R = config.R;
  rec.seed = config.seed;
  rec.config_hash = config.config_hash;

  State a = a0;
  dealias_in_place(a.v);
  dealias_in_place(a.h);

  double sup_sq = 0.0;
  double time_int = 0.0;
  auto record_step = [&](int j, const State& s) {
    const double t = j * config.dt;
    const double n12a = additive_w12_norm(s);
    const double n12 = state_norm(s, 1);
    const double n22 = state_norm(s, 2);
    sup_sq = std::max(sup_sq, n12 * n12);
    rec.times.push_back(t);
    rec.norm12_add.push_back(n12a);
    rec.norm12.push_back(n12);
    rec.norm22.push_back(n22);
    rec.t22.push_back(sup_sq + time_int);
    rec.fr_value.push_back(truncation_value(n12a, config.R));
    rec.mass_series.push_back(mass(s));
    rec.states.push_back(s);
    rec.state_steps.push_back(j);
    time_int += n22 * n22 * config.dt;
  };

  record_step(0, a);
  const std::vector<double> empty_dw(static_cast<size_t>(std::max(basis.count(), 1)), 0.0);

  for (int j = 0; j < steps; ++j) {
    const StateGradients grads = StateGradients::of(a);
    // current-iterate terms: everything linear in a (fr = 0 shuts the
    // advective nonlinearities off inside the shared assembly)
    Tendency drift = assemble_drift(a, params, 0.0, grads);
    drift.dv += forcing.fv[j];
    drift.dh += forcing.fh[j];
    State next = a;
    if (basis.count() > 0) {
      const State corr = ito_correction(basis, a, grads);
      axpy(config.dt, corr, next);
      const State noise = noise_sum(basis, a, grads, path.step_increments(j));
      axpy(-1.0, noise, next);
    }
    axpy(config.dt, drift, next);
    dealias_in_place(next.v);
    dealias_in_place(next.h);
    if (!all_finite(next)) {
      rec.blown_up = true;
      rec.blowup_term = "state";
      break;
    }
    a = std::move(next);
    record_step(j + 1, a);
  }
  rec.final_state = a;
  return rec;
}

TrajectoryRecord picard_step(const TrajectoryRecord& prev, const State& a0,
                             const PhysicalParams& params, const NoiseBasis& basis,
                             const NoisePath& path, const IntegrateConfig& config) {
  const int steps = static_cast<int>(std::llround(config.T / config.dt));
  if (static_cast<int>(prev.states.size()) != steps + 1 || prev.dt != config.dt)
    throw std::invalid_argument("picard_step: previous iterate not on the same time grid");
  return integrate_linear_spde(a0, params, basis, path, config,
                               frozen_forcing(prev, params, config.R));
}

TrajectoryRecord constant_record(const State& a0, const PhysicalParams& params, double T,
                                 double dt, double R) {
  (void)params;
  const int steps = static_cast<int>(std::llround(T / dt));
  State a = a0;
  dealias_in_place(a.v);
  dealias_in_place(a.h);
  TrajectoryRecord rec;
  rec.dt = dt;
  rec.R = R;
  const double n12a = additive_w12_norm(a);
  const double n12 = state_norm(a, 1);
  const double n22 = state_norm(a, 2);
  const double m = mass(a);
  for (int j = 0; j <= steps; ++j) {
    rec.times.push_back(j * dt);
    rec.norm12_add.push_back(n12a);
    rec.norm12.push_back(n12);
    rec.norm22.push_back(n22);
    rec.t22.push_back(n12 * n12 + n22 * n22 * (j * dt));
    rec.fr_value.push_back(truncation_value(n12a, R));
    rec.mass_series.push_back(m);
    rec.states.push_back(a);
    rec.state_steps.push_back(j);
  }
  rec.final_state = a;
  return rec;
}

namespace {

double l2_distance(const State& a, const State& b) {
  double acc = 0.0;
  const double w = a.grid().cell_area();
  const int m = a.h.size();
  const double* pa[3] = {a.v.x.data(), a.v.y.data(), a.h.data()};
  const double* pb[3] = {b.v.x.data(), b.v.y.data(), b.h.data()};
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = pa[c][i] - pb[c][i];
      s += d * d;
    }
    acc += s * w;
  }
  return std::sqrt(acc);
}

} // namespace

double sup_l2_distance(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  const size_t m = std::min(a.states.size(), b.states.size());
  if (m == 0) throw std::invalid_argument("sup_l2_distance: records carry no states");
  double best = 0.0;
  for (size_t j = 0; j < m; ++j) best = std::max(best, l2_distance(a.states[j], b.states[j]));
  return best;
}

double frac_sobolev_norm(const TrajectoryRecord& traj, double alpha, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("frac_sobolev_norm: p must be in (2,inf)");
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw std::invalid_argument("frac_sobolev_norm: alpha must be in [0,1/2)");
  const size_t m = traj.states.size();
  if (m < 3) throw std::invalid_argument("frac_sobolev_norm: need at least 3 time samples");
  const double dt = traj.dt * (m > 1 ? traj.state_steps[1] - traj.state_steps[0] : 1);
  // trapezoidal endpoint weights in both quadratures
  auto w = [&](size_t j) { return (j == 0 || j + 1 == m) ? 0.5 * dt : dt; };

  double value = 0.0;
  for (size_t j = 0; j < m; ++j)
    value += std::pow(state_l2_norm(traj.states[j]), p) * w(j);
  const double expo = 1.0 + alpha * p;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      const double ts = dt * static_cast<double>(j - i);
      const double d = l2_distance(traj.states[i], traj.states[j]);
      value += 2.0 * std::pow(d, p) / std::pow(ts, expo) * w(i) * w(j);
    }
  }
  return value;
}

PicardResult picard_solve(const State& a0, const PhysicalParams& params,
                          const NoiseBasis& basis, const NoisePath& path,
                          const PicardConfig& config) {
  IntegrateConfig icfg;
  icfg.scheme = Scheme::em_ito;
  icfg.T = config.T;
  icfg.dt = config.dt;
  icfg.R = config.R;
  icfg.record_states = true;
  icfg.seed = config.seed;
  icfg.config_hash = config.config_hash;

  PicardResult result;
  TrajectoryRecord prev = constant_record(a0, params, config.T, config.dt, config.R);
  for (int n = 1; n <= config.max_iter; ++n) {
    TrajectoryRecord cur = picard_step(prev, a0, params, basis, path, icfg);
    IterateRecord rec;
    rec.n = n;
    rec.dist_prev_sup_l2 = sup_l2_distance(cur, prev);
    rec.t22_norm = std::sqrt(cur.t22.back());
    rec.frac_norm = frac_sobolev_norm(cur, config.frac_alpha, config.frac_p);
    rec.traj = cur;
    rec.traj.states.clear(); // keep iterate records light
    rec.traj.state_steps.clear();
    result.iterates.push_back(std::move(rec));
    prev = std::move(cur);
    if (result.iterates.back().dist_prev_sup_l2 < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.final_traj = std::move(prev);

  const TrajectoryRecord direct = integrate(a0, params, basis, path, icfg);
  result.residual_vs_direct = sup_l2_distance(result.final_traj, direct);
  return result;
}

} // namespace srsw
