#include "srsw/verify.hpp"

#include <cmath>
#include <sstream>

#include "srsw/config.hpp"

namespace srsw {

namespace {

double uniform01(std::uint64_t seed) {
  return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;
}

// Sample scaled so the chosen norm of the realized state hits the target;
// scaling an AnalyticState is exact at every resolution.
AnalyticState sample_with_norm(std::uint64_t seed, const SamplerSpec& spec,
                               const GridPtr& probe, double target, bool additive) {
  AnalyticState s = sample_analytic_state(seed, spec);
  const State r = s.realize(probe);
  const double n = additive ? additive_w12_norm(r) : state_norm(r, 1);
  return n > 0.0 ? s.scaled(target / n) : s;
}

double drift_fraction(double lo, double hi) {
  return std::abs(hi - lo) / std::max(std::abs(lo), 1e-300);
}

void append_stability(EstimateReport& rep, const std::string& name, double lo, double hi) {
  const double drift = drift_fraction(lo, hi);
  rep.constants[name + "_hi"] = hi;
  rep.constants[name + "_drift"] = drift;
  if (drift >= 0.25) {
    rep.pass = false;
    rep.note += "discretization-sensitive " + name + "; ";
  }
}

std::vector<EstimateReport> advective_suite(const VerifyOptions& opts) {
  GridPtr lo = TorusGrid::make(opts.n_lo);
  GridPtr hi = TorusGrid::make(opts.n_hi);
  PhysicalParams params;
  const double R = 2.0;

  SamplerSpec spec;
  spec.amplitude = 0.1;
  spec.kmax = 4;
  spec.decay = 1.5;

  std::vector<std::pair<AnalyticState, AnalyticState>> analytic;
  analytic.reserve(opts.samples);
  for (int i = 0; i < opts.samples; ++i) {
    const double t1 = 1.0 + 2.4 * uniform01(opts.seed + 2 * i);
    const double t2 = 1.0 + 2.4 * uniform01(opts.seed + 2 * i + 1);
    analytic.emplace_back(
        sample_with_norm(derive_seed(opts.seed, 2 * i), spec, lo, t1, true),
        sample_with_norm(derive_seed(opts.seed, 2 * i + 1), spec, lo, t2, true));
  }
  auto realize_pairs = [&](const GridPtr& g) {
    std::vector<std::pair<State, State>> out;
    out.reserve(analytic.size());
    for (const auto& [s1, s2] : analytic) out.emplace_back(s1.realize(g), s2.realize(g));
    return out;
  };
  const auto pairs_lo = realize_pairs(lo);
  const auto pairs_hi = realize_pairs(hi);

  std::vector<EstimateReport> reps;
  for (int k = 0; k <= 1; ++k) {
    AdvectiveCheckConfig cfg;
    cfg.k = k;
    cfg.R = R;
    EstimateReport rep = check_advective_estimate(pairs_lo, params, cfg);
    const EstimateReport rep_hi = check_advective_estimate(pairs_hi, params, cfg);
    append_stability(rep, "C", rep.constants["C"], rep_hi.constants.at("C"));
    reps.push_back(rep);
  }
  return reps;
}

std::vector<EstimateReport> growth_suite(const VerifyOptions& opts) {
  GridPtr lo = TorusGrid::make(opts.n_lo);
  GridPtr hi = TorusGrid::make(opts.n_hi);
  PhysicalParams params;

  SamplerSpec spec;
  spec.amplitude = 0.1;
  spec.kmax = 4;
  spec.decay = 1.5;

  std::vector<AnalyticState> analytic;
  for (int i = 0; i < opts.samples; ++i) {
    const double target = 0.5 + 2.0 * uniform01(opts.seed ^ (0xabcdULL + i));
    analytic.push_back(sample_with_norm(derive_seed(opts.seed + 7, i), spec, lo, target, false));
  }
  auto realize_all = [&](const GridPtr& g) {
    std::vector<State> out;
    out.reserve(analytic.size());
    for (const AnalyticState& s : analytic) out.push_back(s.realize(g));
    return out;
  };
  const auto states_lo = realize_all(lo);
  const auto states_hi = realize_all(hi);

  GrowthCheckConfig gcfg;
  auto [ta, tb] = check_nonlinear_growth(states_lo, params, gcfg);
  auto [ha, hb] = check_nonlinear_growth(states_hi, params, gcfg);
  append_stability(ta, "C1", ta.constants["C1"], ha.constants.at("C1"));
  append_stability(ta, "C2", ta.constants["C2"], ha.constants.at("C2"));
  append_stability(tb, "C3", tb.constants["C3"], hb.constants.at("C3"));
  append_stability(tb, "C4", tb.constants["C4"], hb.constants.at("C4"));
  append_stability(tb, "C5", tb.constants["C5"], hb.constants.at("C5"));

  EstimateReport scal;
  scal.id = "growth-scaling";
  scal.samples = 5;
  scal.resolution = opts.n_lo;
  const std::vector<double> lambdas{0.5, 0.7, 1.0, 1.4, 2.0};
  auto [sa, sb] = growth_scaling_slopes(states_lo[0], params, lambdas);
  scal.constants["slope_transport"] = sa;
  scal.constants["slope_flux"] = sb;
  scal.worst_ratio = std::max(sa, sb) / 3.1;
  scal.pass = sa >= 1.9 && sa <= 3.1 && sb >= 1.9 && sb <= 3.1;
  return {ta, tb, scal};
}

EstimateReport envelope_ode_report(const VerifyOptions& opts) {
  PhysicalParams params;
  AnalyticState ic = sample_analytic_state(derive_seed(opts.seed, 99), {0.1, 3, 1.0});
  // momentum-only small data: height perturbations excite inertia-gravity
  // oscillations whose transient can sit above the initial norm for a while
  std::erase_if(ic.terms, [](const AnalyticState::Term& t) { return t.comp == 2; });

  auto run_at = [&](int n) {
    GridPtr grid = TorusGrid::make(n);
    State a0 = ic.realize(grid);
    const double n12 = state_norm(a0, 1);
    if (n12 > 0.0) a0 *= 0.1 / n12;
    NoiseBasis empty;
    IntegrateConfig icfg;
    icfg.scheme = Scheme::em_ito;
    icfg.T = 1.0;
    icfg.dt = 0.9 * stability_limits(a0, params, empty).dt_max;
    icfg.R = R_infinite;
    NoisePath nopath;
    const TrajectoryRecord rec = integrate(a0, params, empty, nopath, icfg);
    return check_energy_envelope(rec);
  };

  const EnvelopeReport lo = run_at(opts.n_lo);
  const EnvelopeReport hi = run_at(opts.n_hi);

  EstimateReport rep;
  rep.id = "envelope-ode";
  rep.samples = 1;
  rep.resolution = opts.n_lo;
  rep.constants["b"] = lo.b;
  rep.constants["c"] = lo.c;
  rep.constants["q_fixed_point"] = lo.q_fixed_point;
  rep.worst_ratio = lo.max_violation;
  rep.pass = lo.dominated && lo.decayed && hi.dominated && hi.decayed;
  append_stability(rep, "c", lo.c, hi.c);
  rep.note += lo.decayed ? "decayed; " : "no decay; ";
  return rep;
}

EstimateReport envelope_fg_report(const VerifyOptions& opts) {
  PhysicalParams params;
  SamplerSpec spec;
  spec.amplitude = 0.1;
  spec.kmax = 4;
  spec.decay = 1.5;

  GridPtr lo = TorusGrid::make(opts.n_lo);
  GridPtr hi = TorusGrid::make(opts.n_hi);
  const int nsamples = std::max(10, opts.samples / 2);
  std::vector<AnalyticState> analytic;
  for (int i = 0; i < nsamples; ++i) {
    const double target = 0.5 + 1.5 * uniform01(opts.seed ^ (0x5151ULL + i));
    analytic.push_back(sample_with_norm(derive_seed(opts.seed + 13, i), spec, lo, target, false));
  }
  auto run_at = [&](const GridPtr& g) {
    std::vector<State> states;
    states.reserve(analytic.size());
    for (const AnalyticState& s : analytic) states.push_back(s.realize(g));
    const NoiseBasis basis = NoiseBasis::standard(g, 8, 0.05, 3.0);
    return check_drift_diffusion_bounds(states, params, basis, {});
  };
  EstimateReport rep = run_at(lo);
  const EstimateReport rep_hi = run_at(hi);
  append_stability(rep, "C1", rep.constants["C1"], rep_hi.constants.at("C1"));
  append_stability(rep, "C2", rep.constants["C2"], rep_hi.constants.at("C2"));
  append_stability(rep, "C3", rep.constants["C3"], rep_hi.constants.at("C3"));
  return rep;
}

EstimateReport continuity_report(const VerifyOptions& opts) {
  PhysicalParams params;
  ContinuityConfig cfg;
  cfg.base_seed = opts.seed;
  cfg.grid_n = opts.n_lo;

  GridPtr grid = TorusGrid::make(cfg.grid_n);
  SamplerSpec spec;
  spec.amplitude = 0.1;
  spec.kmax = 3;
  spec.decay = 1.5;
  cfg.base_ic = sample_with_norm(derive_seed(opts.seed, 401), spec, grid, 0.25, false);
  // momentum-only perturbation: a height component would ride the
  // inertia-gravity oscillation and obscure the Gronwall envelope
  AnalyticState pert = sample_analytic_state(derive_seed(opts.seed, 402), spec);
  std::erase_if(pert.terms, [](const AnalyticState::Term& t) { return t.comp == 2; });
  const double pn = state_norm(pert.realize(grid), 1);
  cfg.perturbation = pn > 0.0 ? pert.scaled(1.0 / pn) : pert;
  cfg.deltas = {1e-2, 1e-3, 1e-4};
  cfg.paths = 32;
  cfg.T = 1.0;
  cfg.dt = 0.01;
  cfg.R = 4.0;
  cfg.M = 50.0;

  const ContinuityReport rep = check_continuity_in_ic(cfg, params);
  EstimateReport out;
  out.id = "continuity-ic";
  out.samples = static_cast<int>(cfg.deltas.size());
  out.paths = cfg.paths;
  out.resolution = cfg.grid_n;
  out.constants["gronwall_C"] = rep.gronwall_c;
  out.constants["gronwall_logC0"] = rep.gronwall_log_c0;
  out.constants["delta_ratio_worst"] = rep.delta_ratio_worst;
  out.constants["residual_fraction"] = rep.regression_residual_fraction;
  out.constants["zero_delta_exact"] = rep.zero_delta_exact ? 1.0 : 0.0;
  out.worst_ratio = std::max(rep.delta_ratio_worst / 2.0, rep.regression_residual_fraction / 0.10);
  out.pass = rep.pass;
  return out;
}

} // namespace

std::vector<EstimateReport> run_verify_suite(const std::string& name,
                                             const VerifyOptions& opts) {
  std::vector<EstimateReport> reps;
  bool known = false;
  if (name == "advective" || name == "all") {
    known = true;
    for (EstimateReport& r : advective_suite(opts)) reps.push_back(std::move(r));
  }
  if (name == "growth" || name == "all") {
    known = true;
    for (EstimateReport& r : growth_suite(opts)) reps.push_back(std::move(r));
  }
  if (name == "envelope" || name == "all") {
    known = true;
    reps.push_back(envelope_ode_report(opts));
    reps.push_back(envelope_fg_report(opts));
  }
  if (name == "continuity" || name == "all") {
    known = true;
    reps.push_back(continuity_report(opts));
  }
  if (!known) throw ConfigError("config error: unknown verify suite \"" + name + "\"");
  return reps;
}

nlohmann::json report_to_json(const EstimateReport& rep) {
  return nlohmann::json{
      {"id", rep.id},          {"constants", rep.constants}, {"worst_ratio", rep.worst_ratio},
      {"n", rep.resolution},   {"samples", rep.samples},     {"paths", rep.paths},
      {"pass", rep.pass},      {"note", rep.note},
  };
}

std::string reports_table(std::span<const EstimateReport> reps) {
  std::ostringstream out;
  out << "id                    worst_ratio    n      samples  pass\n";
  for (const EstimateReport& r : reps) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-21s %-14.6g %-6d %-8d %s\n", r.id.c_str(),
                  r.worst_ratio, r.resolution, r.samples, r.pass ? "PASS" : "FAIL");
    out << line;
  }
  return out.str();
}

} // namespace srsw
