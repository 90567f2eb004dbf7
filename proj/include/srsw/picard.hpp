#pragma once

#include "srsw/stepper.hpp"

namespace srsw {

/// Frozen forcing for one linear-SPDE solve: per step j,
///   fv_j = -f_R(||a^{n-1}_j||) u^{n-1}_j . grad v^{n-1}_j
///   fh_j = -f_R(||a^{n-1}_j||) div(h^{n-1}_j u^{n-1}_j)
/// held piecewise-constant (left endpoint) over the step.
struct ForcingSeries {
  std::vector<VectorField> fv;
  std::vector<ScalarField> fh;

  int steps() const { return static_cast<int>(fv.size()); }
  ForcingSeries scaled(double factor) const;
};

ForcingSeries frozen_forcing(const TrajectoryRecord& prev, const PhysicalParams& params,
                             double R);

/// Euler-Maruyama integration of the linear SPDE
///   dv = [nu Lap v - f zhat x u - grad p + 1/2 sum (L_i+A_i)^2 v + fv] dt
///        - sum (L_i+A_i) v dW_i
///   dh = [eta Lap h + 1/2 sum L_i^2 h + fh] dt - sum L_i h dW_i
/// with a prescribed forcing series; the advective nonlinearities never see
/// the current iterate.
TrajectoryRecord integrate_linear_spde(const State& a0, const PhysicalParams& params,
                                       const NoiseBasis& basis, const NoisePath& path,
                                       const IntegrateConfig& config,
                                       const ForcingSeries& forcing);

/// One iterate of the approximating sequence: previous trajectory frozen
/// into the forcing, same noise path, same time grid.
TrajectoryRecord picard_step(const TrajectoryRecord& prev, const State& a0,
                             const PhysicalParams& params, const NoiseBasis& basis,
                             const NoisePath& path, const IntegrateConfig& config);

struct PicardConfig {
  double T = 0.25;
  double dt = 0.005;
  double R = 1.0;
  double tol = 1e-6;
  int max_iter = 12;
  double frac_alpha = 0.25;
  double frac_p = 4.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct IterateRecord {
  int n = 0;
  TrajectoryRecord traj; // states stripped; norm series kept
  double dist_prev_sup_l2 = 0.0;
  double t22_norm = 0.0;  // ||a^n||_{T,2,2}
  double frac_norm = 0.0; // ||a^n||^p_{W^{alpha,p}(0,T;L^2)}
};

struct PicardResult {
  std::vector<IterateRecord> iterates;
  bool converged = false;
  TrajectoryRecord final_traj; // with states
  double residual_vs_direct = 0.0;
};

/// Iterate from the constant-in-time initial datum until the sup-in-time L^2
/// distance between successive iterates drops below tol (or max_iter);
/// reports the residual of the limit against the direct truncated solve on
/// the same path.
PicardResult picard_solve(const State& a0, const PhysicalParams& params,
                          const NoiseBasis& basis, const NoisePath& path,
                          const PicardConfig& config);

/// Discrete W^{alpha,p}(0,T;L^2) seminorm-plus-integral, returned as the
/// p-th power of the norm:
///   sum_j ||a_j||^p dt + sum_{i != j} ||a_i - a_j||^p / |t_i-t_j|^{1+alpha p} dt^2.
/// Requires a record with states at uniform times (>= 3 samples).
double frac_sobolev_norm(const TrajectoryRecord& traj, double alpha, double p);

/// sup over shared time indices of the L^2 distance between the two
/// recorded state sequences.
double sup_l2_distance(const TrajectoryRecord& a, const TrajectoryRecord& b);

/// Constant-in-time record of the initial datum (iterate 0).
TrajectoryRecord constant_record(const State& a0, const PhysicalParams& params, double T,
                                 double dt, double R);

} // namespace srsw
