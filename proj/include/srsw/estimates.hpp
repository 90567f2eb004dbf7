#pragma once

#include <map>
#include <random>

#include "srsw/picard.hpp"

namespace srsw {

/// Outcome of one inequality check. Constants are fitted on a training half
/// and verified on a held-out half: pass means the worst held-out ratio of
/// lhs to the fitted rhs stays <= 1.
struct EstimateReport {
  std::string id;
  std::map<std::string, double> constants;
  double worst_ratio = 0.0;
  int samples = 0;
  int resolution = 0;
  int paths = 0;
  bool pass = false;
  std::string note;
};

double standard_gaussian(std::mt19937_64& eng);

/// Band-limited random state described by its trig modes, so the same sample
/// can be realized exactly on grids of different resolution.
struct AnalyticState {
  struct Term {
    int comp; // 0 = v1, 1 = v2, 2 = h
    int k1, k2;
    double c_cos, c_sin;
  };
  std::vector<Term> terms;
  State realize(const GridPtr& grid) const;
  AnalyticState scaled(double factor) const;
};

struct SamplerSpec {
  double amplitude = 0.4;
  int kmax = 4;
  double decay = 1.0; // coefficient std ~ amplitude / |k|^decay
};

AnalyticState sample_analytic_state(std::uint64_t seed, const SamplerSpec& spec = {});

// ---- lemma lhs assemblies ----

/// Difference of truncated flux nonlinearities, exactly in the
/// T1 + T2 + T3 decomposition with X = h and Y = u:
///   Q = f_R(a1) div(u1 hbar) + f_R(a2) div(ubar h2)
///     + (f_R(a1) - f_R(a2)) div(u1 h2).
ScalarField advective_difference_q(const State& a1, const State& a2,
                                   const PhysicalParams& params, double R);

/// max_{|alpha| <= k} |<d^alpha hbar, d^alpha Q>|.
double advective_pairing_lhs(const State& a1, const State& a2, const PhysicalParams& params,
                             double R, int k);

/// |<v, u . grad v>| summed over components (transport growth lhs).
double transport_growth_lhs(const VectorField& transporter, const VectorField& v);
/// |<Lap h, div(h u)>| (flux growth lhs).
double flux_growth_lhs(const ScalarField& h, const VectorField& u);

/// Drift/diffusion decomposition of d||a||_{1,2}^2 for the untruncated Ito
/// system: nonviscous drift pairing, viscous dissipation pairing (<= 0), and
/// the per-mode diffusion coefficients
///   Gtilde_i = 2(<v,G_i v> + <h,L_i h> + <Lap v,G_i v> + <Lap h,L_i h>).
struct NormDriftParts {
  double nonviscous = 0.0;
  double viscous = 0.0;
  double gtilde_sq_sum = 0.0;
};

NormDriftParts norm_drift_parts(const State& a, const PhysicalParams& params,
                                const NoiseBasis& basis);

// ---- fit / verify checks ----

struct AdvectiveCheckConfig {
  int k = 1;
  double zeta = 0.1;
  double R = 2.0;
  double fit_margin = 2.0;
};

EstimateReport check_advective_estimate(std::span<const std::pair<State, State>> samples,
                                        const PhysicalParams& params,
                                        const AdvectiveCheckConfig& cfg);

struct GrowthCheckConfig {
  double fit_margin = 2.0;
};

/// Two reports: "growth-transport" (part a) and "growth-flux" (part b).
std::pair<EstimateReport, EstimateReport> check_nonlinear_growth(
    std::span<const State> samples, const PhysicalParams& params, const GrowthCheckConfig& cfg);

/// Log-log slopes of the two growth lhs under scaling: part (a) scales v
/// with the transporter held fixed, part (b) scales (h, u) jointly.
std::pair<double, double> growth_scaling_slopes(const State& base,
                                                const PhysicalParams& params,
                                                std::span<const double> lambdas);

/// Cubic-envelope check on a deterministic trajectory: fits r(s) = b s^3 - c s
/// to dominate the observed derivative of ||a||_{1,2}^2, integrates the
/// envelope ODE on the recorded time grid, and verifies domination.
struct EnvelopeReport {
  double b = 0.0, c = 0.0;
  double q_fixed_point = 0.0; // sqrt(c/b), inf if b == 0
  double max_violation = 0.0; // max (s_j - q_j) / max(q_j, tiny)
  bool dominated = false;
  bool decayed = false; // monotone decay after the initial transient
};

EnvelopeReport check_energy_envelope(const TrajectoryRecord& deterministic_traj);

struct FgBoundsConfig {
  double fit_margin = 2.0;
};

/// Fits C1 (cubic growth of the nonviscous drift), C2 (quadratic dissipation
/// of the viscous part) and C3 (diffusion bound sum |Gtilde_i|^2 <=
/// C3 ||a||_{1,2}^2) on half the states; verifies the three bounds held-out.
EstimateReport check_drift_diffusion_bounds(std::span<const State> samples,
                                            const PhysicalParams& params,
                                            const NoiseBasis& basis,
                                            const FgBoundsConfig& cfg);

// ---- trajectory-ensemble checks ----

struct ContinuityConfig {
  AnalyticState base_ic;
  AnalyticState perturbation; // unit-ish direction, scaled by each delta
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  int paths = 32;
  std::uint64_t base_seed = 2024;
  int grid_n = 64;
  double T = 0.5;
  double dt = 0.01;
  double R = 4.0;
  double M = 50.0;
  int basis_K = 8;
  double basis_A = 0.05;
  double basis_s = 3.0;
};

struct ContinuityReport {
  std::vector<double> times;
  std::map<double, std::vector<double>> mean_sq_ratio; // delta -> E||abar_t||^2/||abar_0||^2
  bool zero_delta_exact = false;  // delta = 0 gives abar identically 0
  double delta_ratio_worst = 0.0; // worst pointwise ratio between delta curves
  double gronwall_c = 0.0;        // slope of the affine fit to log rho
  double gronwall_log_c0 = 0.0;   // intercept
  double regression_residual_fraction = 0.0;
  bool pass = false;
};

ContinuityReport check_continuity_in_ic(const ContinuityConfig& cfg,
                                        const PhysicalParams& params);

struct BlowupConfig {
  AnalyticState ic_shape;
  std::vector<double> norm12_sq_levels; // ||a_0||_{1,2}^2 sweep
  double ceiling_c = 1.0;               // C, on the squared norm
  int paths = 200;
  std::uint64_t base_seed = 77;
  int grid_n = 64;
  double T = 2.0;
  double dt = 0.0; // 0 = use stability limit * 0.9
  int basis_K = 8;
  double basis_A = 0.02;
  double basis_s = 3.0;
};

struct BlowupEstimate {
  double norm12_sq = 0.0;
  double stay_probability = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  int paths = 0;
};

std::vector<BlowupEstimate> blowup_probability(const BlowupConfig& cfg,
                                               const PhysicalParams& params);

/// Wilson score interval at 95%.
void wilson_interval(int successes, int trials, double& lo, double& hi);

} // namespace srsw
