#include "srsw/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "srsw/kernels.hpp"

namespace srsw {

double standard_gaussian(std::mt19937_64& eng) {
  // Box-Muller on 53-bit uniforms; bit-reproducible across platforms.
  const double u1 = 1.0 - static_cast<double>(eng() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

State AnalyticState::realize(const GridPtr& grid) const {
  State a(grid);
  const double ks = grid->kscale();
  const int n = grid->n();
  for (const Term& t : terms) {
    ScalarField* target = t.comp == 0 ? &a.v.x : (t.comp == 1 ? &a.v.y : &a.h);
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        const double phase = ks * (t.k1 * grid->x(ix) + t.k2 * grid->y(iy));
        (*target)(ix, iy) += t.c_cos * std::cos(phase) + t.c_sin * std::sin(phase);
      }
  }
  return a;
}

AnalyticState AnalyticState::scaled(double factor) const {
  AnalyticState out = *this;
  for (Term& t : out.terms) {
    t.c_cos *= factor;
    t.c_sin *= factor;
  }
  return out;
}

AnalyticState sample_analytic_state(std::uint64_t seed, const SamplerSpec& spec) {
  std::mt19937_64 eng(seed);
  AnalyticState out;
  for (int comp = 0; comp < 3; ++comp) {
    for (int k1 = -spec.kmax; k1 <= spec.kmax; ++k1) {
      for (int k2 = 0; k2 <= spec.kmax; ++k2) {
        if (k2 == 0 && k1 <= 0) continue;
        const double kn = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
        const double sd = spec.amplitude / std::pow(kn, spec.decay);
        AnalyticState::Term t;
        t.comp = comp;
        t.k1 = k1;
        t.k2 = k2;
        t.c_cos = sd * standard_gaussian(eng);
        t.c_sin = sd * standard_gaussian(eng);
        out.terms.push_back(t);
      }
    }
  }
  return out;
}

namespace {

ScalarField divergence_of_product(const ScalarField& scalar, const VectorField& vec) {
  ScalarField out = derivative(dealiased_product(scalar, vec.x), Axis::x, 1);
  out += derivative(dealiased_product(scalar, vec.y), Axis::y, 1);
  return out;
}

} // namespace

ScalarField advective_difference_q(const State& a1, const State& a2,
                                   const PhysicalParams& params, double R) {
  const double fr1 = truncation_value(additive_w12_norm(a1), R);
  const double fr2 = truncation_value(additive_w12_norm(a2), R);
  const VectorField u1 = velocity(a1, params);
  const VectorField u2 = velocity(a2, params);
  VectorField ubar = u1;
  ubar -= u2;
  ScalarField hbar = a1.h;
  hbar -= a2.h;

  ScalarField t1 = divergence_of_product(hbar, u1);
  t1 *= fr1;
  ScalarField t2 = divergence_of_product(a2.h, ubar);
  t2 *= fr2;
  ScalarField t3 = divergence_of_product(a2.h, u1);
  t3 *= fr1 - fr2;
  t1 += t2;
  t1 += t3;
  return t1;
}

double advective_pairing_lhs(const State& a1, const State& a2, const PhysicalParams& params,
                             double R, int k) {
  if (k < 0 || k > 1) throw std::invalid_argument("advective_pairing_lhs: k must be 0 or 1");
  ScalarField q = advective_difference_q(a1, a2, params, R);
  ScalarField hbar = a1.h;
  hbar -= a2.h;
  double lhs = std::abs(inner_product(hbar, q));
  if (k == 1) {
    auto [hx, hy] = gradient(hbar);
    auto [qx, qy] = gradient(q);
    lhs = std::max(lhs, std::abs(inner_product(hx, qx)));
    lhs = std::max(lhs, std::abs(inner_product(hy, qy)));
  }
  return lhs;
}

double transport_growth_lhs(const VectorField& transporter, const VectorField& v) {
  const VectorField t = lie_transport(transporter, v);
  return std::abs(inner_product(v, t));
}

double flux_growth_lhs(const ScalarField& h, const VectorField& u) {
  const ScalarField flux = divergence_of_product(h, u);
  return std::abs(inner_product(laplacian(h), flux));
}

EstimateReport check_advective_estimate(std::span<const std::pair<State, State>> samples,
                                        const PhysicalParams& params,
                                        const AdvectiveCheckConfig& cfg) {
  EstimateReport rep;
  rep.id = "advective-k" + std::to_string(cfg.k);
  rep.samples = static_cast<int>(samples.size());
  if (!samples.empty()) rep.resolution = samples[0].first.grid().n();

  struct Row {
    double lhs, za, zb;
  };
  std::vector<Row> rows;
  for (const auto& [a1, a2] : samples) {
    State bar = a1;
    bar -= a2;
    const double bark = state_norm(bar, cfg.k);
    if (bark == 0.0) continue; // degenerate sample (abar = 0)
    const double bark1 = state_norm(bar, cfg.k + 1);
    const double n1 = state_norm(a1, cfg.k);
    const double n2 = state_norm(a2, cfg.k);
    Row r;
    r.lhs = advective_pairing_lhs(a1, a2, params, cfg.R, cfg.k);
    r.za = bark1 * bark1;
    r.zb = (n1 * n1 * n1 * n1 + n2 * n2 * n2 * n2) * bark * bark;
    rows.push_back(r);
  }

  const size_t half = rows.size() / 2;
  double c_fit = 0.0;
  for (size_t i = 0; i < half; ++i) {
    const Row& r = rows[i];
    if (r.zb > 0.0) c_fit = std::max(c_fit, std::max(0.0, r.lhs - cfg.zeta * r.za) / r.zb);
  }
  c_fit *= cfg.fit_margin;

  double worst = 0.0;
  for (size_t i = half; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double rhs = cfg.zeta * r.za + c_fit * r.zb;
    if (rhs > 0.0) worst = std::max(worst, r.lhs / rhs);
  }
  rep.constants["zeta"] = cfg.zeta;
  rep.constants["C"] = c_fit;
  rep.constants["R"] = cfg.R;
  rep.worst_ratio = worst;
  rep.pass = worst <= 1.0;
  return rep;
}

std::pair<EstimateReport, EstimateReport> check_nonlinear_growth(
    std::span<const State> samples, const PhysicalParams& params,
    const GrowthCheckConfig& cfg) {
  struct RowA {
    double lhs, f1, f2;
  };
  struct RowB {
    double lhs, g1, g2, g3;
  };
  std::vector<RowA> ra;
  std::vector<RowB> rb;
  int resolution = 0;
  for (const State& a : samples) {
    resolution = a.grid().n();
    const VectorField u = velocity(a, params);
    RowA A;
    A.lhs = transport_growth_lhs(u, a.v);
    const double v22 = sobolev_norm(a.v, 2);
    const double v12 = sobolev_norm(a.v, 1);
    A.f1 = v22 * v22;
    A.f2 = std::pow(v12, 6.0);
    ra.push_back(A);

    RowB B;
    B.lhs = flux_growth_lhs(a.h, u);
    const ScalarField lh = laplacian(a.h);
    B.g1 = inner_product(lh, lh);
    const ScalarField lux = laplacian(u.x);
    const ScalarField luy = laplacian(u.y);
    B.g2 = inner_product(lux, lux) + inner_product(luy, luy);
    const double h12 = sobolev_norm(a.h, 1);
    const double u12 = sobolev_norm(u, 1);
    B.g3 = std::pow(h12, 6.0) + std::pow(u12, 6.0);
    rb.push_back(B);
  }

  EstimateReport repa, repb;
  repa.id = "growth-transport";
  repb.id = "growth-flux";
  repa.samples = repb.samples = static_cast<int>(samples.size());
  repa.resolution = repb.resolution = resolution;

  const size_t half_a = ra.size() / 2;
  double c1 = 0.0, c2 = 0.0;
  for (size_t i = 0; i < half_a; ++i) {
    if (ra[i].f1 > 0.0) c1 = std::max(c1, ra[i].lhs / (2.0 * ra[i].f1));
    if (ra[i].f2 > 0.0) c2 = std::max(c2, ra[i].lhs / (2.0 * ra[i].f2));
  }
  c1 *= cfg.fit_margin;
  c2 *= cfg.fit_margin;
  double worst_a = 0.0;
  for (size_t i = half_a; i < ra.size(); ++i) {
    const double rhs = c1 * ra[i].f1 + c2 * ra[i].f2;
    if (rhs > 0.0) worst_a = std::max(worst_a, ra[i].lhs / rhs);
  }
  repa.constants["C1"] = c1;
  repa.constants["C2"] = c2;
  repa.worst_ratio = worst_a;
  repa.pass = worst_a <= 1.0;

  const size_t half_b = rb.size() / 2;
  double c3 = 0.0, c4 = 0.0, c5 = 0.0;
  for (size_t i = 0; i < half_b; ++i) {
    if (rb[i].g1 > 0.0) c3 = std::max(c3, rb[i].lhs / (3.0 * rb[i].g1));
    if (rb[i].g2 > 0.0) c4 = std::max(c4, rb[i].lhs / (3.0 * rb[i].g2));
    if (rb[i].g3 > 0.0) c5 = std::max(c5, rb[i].lhs / (3.0 * rb[i].g3));
  }
  c3 *= cfg.fit_margin;
  c4 *= cfg.fit_margin;
  c5 *= cfg.fit_margin;
  double worst_b = 0.0;
  for (size_t i = half_b; i < rb.size(); ++i) {
    const double rhs = c3 * rb[i].g1 + c4 * rb[i].g2 + c5 * rb[i].g3;
    if (rhs > 0.0) worst_b = std::max(worst_b, rb[i].lhs / rhs);
  }
  repb.constants["C3"] = c3;
  repb.constants["C4"] = c4;
  repb.constants["C5"] = c5;
  repb.worst_ratio = worst_b;
  repb.pass = worst_b <= 1.0;
  return {repa, repb};
}

namespace {

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  const size_t m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

std::pair<double, double> growth_scaling_slopes(const State& base,
                                                const PhysicalParams& params,
                                                std::span<const double> lambdas) {
  const VectorField u_fixed = velocity(base, params);
  std::vector<double> la(lambdas.begin(), lambdas.end());
  std::vector<double> lhs_a, lhs_b;
  for (double lam : la) {
    VectorField v = base.v;
    v *= lam;
    lhs_a.push_back(transport_growth_lhs(u_fixed, v));
    ScalarField h = base.h;
    h *= lam;
    VectorField u = u_fixed;
    u *= lam;
    lhs_b.push_back(flux_growth_lhs(h, u));
  }
  return {loglog_slope(la, lhs_a), loglog_slope(la, lhs_b)};
}

namespace {

// <f - Lap f, g> pairing per component: the W^{1,2} inner product.
double w12_pairing(const State& a, const VectorField& tv, const ScalarField& th) {
  double acc = 0.0;
  const ScalarField* ac[3] = {&a.v.x, &a.v.y, &a.h};
  const ScalarField* tc[3] = {&tv.x, &tv.y, &th};
  for (int c = 0; c < 3; ++c) {
    ScalarField am = *ac[c];
    am -= laplacian(*ac[c]);
    acc += inner_product(am, *tc[c]);
  }
  return acc;
}

double w12_self(const ScalarField& f) {
  ScalarField fm = f;
  fm -= laplacian(f);
  return inner_product(fm, f);
}

} // namespace

NormDriftParts norm_drift_parts(const State& a, const PhysicalParams& params,
                                const NoiseBasis& basis) {
  const StateGradients grads = StateGradients::of(a);
  NormDriftParts parts;

  PhysicalParams inviscid = params;
  inviscid.nu = 0.0;
  inviscid.eta = 0.0;
  Tendency rest = assemble_drift(a, inviscid, 1.0, grads);
  if (basis.count() > 0) {
    const State corr = ito_correction(basis, a, grads);
    rest.dv += corr.v;
    rest.dh += corr.h;
  }
  parts.nonviscous = 2.0 * w12_pairing(a, rest.dv, rest.dh);

  const ScalarField lv1 = laplacian(a.v.x);
  const ScalarField lv2 = laplacian(a.v.y);
  const ScalarField lh = laplacian(a.h);
  parts.viscous =
      2.0 * (params.nu * (inner_product(a.v.x, lv1) - inner_product(lv1, lv1)) +
             params.nu * (inner_product(a.v.y, lv2) - inner_product(lv2, lv2)) +
             params.eta * (inner_product(a.h, lh) - inner_product(lh, lh)));

  for (int i = 0; i < basis.count(); ++i) {
    const State gi = g_op(basis, i, a, grads);
    // Ito quadratic variation of the W^{1,2} norm enters the drift.
    parts.nonviscous += w12_self(gi.v.x) + w12_self(gi.v.y) + w12_self(gi.h);
    const double gt = 2.0 * (inner_product(a.v, gi.v) + inner_product(a.h, gi.h) +
                             inner_product(lv1, gi.v.x) + inner_product(lv2, gi.v.y) +
                             inner_product(lh, gi.h));
    parts.gtilde_sq_sum += gt * gt;
  }
  return parts;
}

EstimateReport check_drift_diffusion_bounds(std::span<const State> samples,
                                            const PhysicalParams& params,
                                            const NoiseBasis& basis,
                                            const FgBoundsConfig& cfg) {
  EstimateReport rep;
  rep.id = "envelope-fg";
  rep.samples = static_cast<int>(samples.size());

  struct Row {
    double nl, diss, gsum, n12;
  };
  std::vector<Row> rows;
  for (const State& a : samples) {
    rep.resolution = a.grid().n();
    const double n12 = state_norm(a, 1);
    if (n12 == 0.0) continue;
    const NormDriftParts p = norm_drift_parts(a, params, basis);
    rows.push_back({std::abs(p.nonviscous), -p.viscous, p.gtilde_sq_sum, n12});
  }

  const size_t half = rows.size() / 2;
  double c1 = 0.0, c2 = std::numeric_limits<double>::infinity(), c3 = 0.0;
  for (size_t i = 0; i < half; ++i) {
    const Row& r = rows[i];
    c1 = std::max(c1, r.nl / (r.n12 * r.n12 * r.n12));
    c2 = std::min(c2, r.diss / (r.n12 * r.n12));
    c3 = std::max(c3, r.gsum / (r.n12 * r.n12));
  }
  c1 *= cfg.fit_margin;
  c2 /= cfg.fit_margin;
  c3 *= cfg.fit_margin;

  double worst = 0.0;
  for (size_t i = half; i < rows.size(); ++i) {
    const Row& r = rows[i];
    worst = std::max(worst, r.nl / (c1 * r.n12 * r.n12 * r.n12));
    if (r.diss > 0.0) worst = std::max(worst, (c2 * r.n12 * r.n12) / r.diss);
    worst = std::max(worst, r.gsum / (c3 * r.n12 * r.n12));
  }
  rep.constants["C1"] = c1;
  rep.constants["C2"] = c2;
  rep.constants["C3"] = c3;
  rep.worst_ratio = worst;
  rep.pass = worst <= 1.0;
  return rep;
}

EnvelopeReport check_energy_envelope(const TrajectoryRecord& traj) {
  EnvelopeReport rep;
  const size_t m = traj.times.size();
  if (m < 3) throw std::invalid_argument("check_energy_envelope: record too short");
  const double dt = traj.times[1] - traj.times[0];

  std::vector<double> s(m);
  for (size_t j = 0; j < m; ++j) s[j] = traj.norm12[j] * traj.norm12[j];

  // derivative ratio samples y = ds/dt / s against x = s^2
  std::vector<double> xs, ys;
  for (size_t j = 0; j + 1 < m; ++j) {
    if (s[j] <= 0.0) continue;
    xs.push_back(s[j] * s[j]);
    ys.push_back((s[j + 1] - s[j]) / dt / s[j]);
  }

  if (xs.empty()) { // identically zero trajectory
    rep.dominated = true;
    rep.decayed = true;
    rep.q_fixed_point = 0.0;
    return rep;
  }

  // least-squares slope for b, then c chosen so b*x - c dominates every sample
  const size_t mm = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < mm; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = mm * sxx - sx * sx;
  double b = denom > 0.0 ? (mm * sxy - sx * sy) / denom : 0.0;
  b = std::max(b, 0.0);
  double c = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < mm; ++i) c = std::min(c, b * xs[i] - ys[i]);
  c = (c > 0.0) ? c * (1.0 - 1e-9) : c * (1.0 + 1e-9);

  rep.b = b;
  rep.c = c;
  rep.q_fixed_point = (b > 0.0 && c > 0.0) ? std::sqrt(c / b) : R_infinite;

  // envelope ODE dq = b q^3 - c q on the recorded grid, substepped when stiff
  const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(c) * dt / 0.05)));
  const double h = dt / nsub;
  double q = s[0];
  double violation = 0.0;
  const double scale = std::max(s[0], 1e-300);
  for (size_t j = 0; j + 1 < m; ++j) {
    for (int k = 0; k < nsub; ++k) q += h * (b * q * q * q - c * q);
    violation = std::max(violation, (s[j + 1] - q) / scale);
  }
  rep.max_violation = violation;
  rep.dominated = violation <= 1e-6;

  // monotone decay after the initial transient
  const size_t transient = std::max<size_t>(1, m / 10);
  rep.decayed = true;
  for (size_t j = transient; j + 1 < m; ++j)
    if (s[j + 1] > s[j] * (1.0 + 1e-9)) rep.decayed = false;
  return rep;
}

void wilson_interval(int successes, int trials, double& lo, double& hi) {
  const double z = 1.959963984540054;
  const double nn = trials;
  const double p = successes / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  lo = std::max(0.0, center - half);
  hi = std::min(1.0, center + half);
}

ContinuityReport check_continuity_in_ic(const ContinuityConfig& cfg,
                                        const PhysicalParams& params) {
  ContinuityReport rep;
  GridPtr grid = TorusGrid::make(cfg.grid_n);
  const NoiseBasis basis = NoiseBasis::standard(grid, cfg.basis_K, cfg.basis_A, cfg.basis_s);
  const State a0 = cfg.base_ic.realize(grid);
  const State phi = cfg.perturbation.realize(grid);
  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));

  rep.times.resize(steps + 1);
  for (int j = 0; j <= steps; ++j) rep.times[j] = j * cfg.dt;

  IntegrateConfig icfg;
  icfg.scheme = Scheme::em_ito;
  icfg.T = cfg.T;
  icfg.dt = cfg.dt;
  icfg.R = cfg.R;
  icfg.record_states = true;

  // zero-delta pathwise uniqueness: bitwise identical trajectories
  {
    const NoisePath path = sample_path(basis.count(), cfg.dt, steps, derive_seed(cfg.base_seed, 0));
    State b0 = a0;
    axpy(0.0, phi, b0);
    const TrajectoryRecord r1 = integrate(a0, params, basis, path, icfg);
    const TrajectoryRecord r2 = integrate(b0, params, basis, path, icfg);
    rep.zero_delta_exact = sup_l2_distance(r1, r2) == 0.0;
  }

  // per-(path, delta) squared-difference series, stopped at tau_M
  const size_t nd = cfg.deltas.size();
  std::vector<std::vector<double>> sums(nd, std::vector<double>(steps + 1, 0.0));
  std::vector<std::vector<std::vector<double>>> per_path(
      cfg.paths, std::vector<std::vector<double>>(nd));

#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < cfg.paths; ++p) {
    const NoisePath path = sample_path(basis.count(), cfg.dt, steps, derive_seed(cfg.base_seed, p));
    const TrajectoryRecord base_rec = integrate(a0, params, basis, path, icfg);
    for (size_t d = 0; d < nd; ++d) {
      State b0 = a0;
      axpy(cfg.deltas[d], phi, b0);
      const TrajectoryRecord pert_rec = integrate(b0, params, basis, path, icfg);
      std::vector<double>& series = per_path[p][d];
      series.assign(steps + 1, 0.0);
      int stop = steps;
      for (int j = 0; j <= steps; ++j)
        if (base_rec.t22[j] >= cfg.M || pert_rec.t22[j] >= cfg.M) {
          stop = j;
          break;
        }
      double frozen = 0.0;
      for (int j = 0; j <= steps; ++j) {
        if (j <= stop) {
          State bar = base_rec.states[j];
          bar -= pert_rec.states[j];
          const double n = state_norm(bar, 1);
          frozen = n * n;
        }
        series[j] = frozen;
      }
    }
  }
  for (int p = 0; p < cfg.paths; ++p)
    for (size_t d = 0; d < nd; ++d)
      for (int j = 0; j <= steps; ++j) sums[d][j] += per_path[p][d][j];

  for (size_t d = 0; d < nd; ++d) {
    std::vector<double> rho(steps + 1);
    const double denom = sums[d][0] / cfg.paths; // = ||abar_0||^2, path-independent
    for (int j = 0; j <= steps; ++j) rho[j] = (sums[d][j] / cfg.paths) / denom;
    rep.mean_sq_ratio[cfg.deltas[d]] = std::move(rho);
  }

  // linear-response check between the two smallest deltas
  if (nd >= 2) {
    std::vector<double> ds = cfg.deltas;
    std::sort(ds.begin(), ds.end());
    const auto& ra = rep.mean_sq_ratio.at(ds[0]);
    const auto& rb = rep.mean_sq_ratio.at(ds[1]);
    for (int j = 1; j <= steps; ++j) {
      const double r = ra[j] / rb[j];
      rep.delta_ratio_worst = std::max(rep.delta_ratio_worst, std::max(r, 1.0 / r));
    }
  }

  // Gronwall envelope: affine fit of log rho(t) for the smallest delta
  {
    const double dmin = *std::min_element(cfg.deltas.begin(), cfg.deltas.end());
    const auto& rho = rep.mean_sq_ratio.at(dmin);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int mm = steps + 1;
    std::vector<double> ylog(mm);
    for (int j = 0; j < mm; ++j) {
      ylog[j] = std::log(rho[j]);
      sx += rep.times[j];
      sy += ylog[j];
      sxx += rep.times[j] * rep.times[j];
      sxy += rep.times[j] * ylog[j];
    }
    const double slope = (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / mm;
    rep.gronwall_c = slope;
    rep.gronwall_log_c0 = intercept;
    double res = 0.0, ymin = ylog[0], ymax = ylog[0];
    for (int j = 0; j < mm; ++j) {
      res = std::max(res, std::abs(ylog[j] - (intercept + slope * rep.times[j])));
      ymin = std::min(ymin, ylog[j]);
      ymax = std::max(ymax, ylog[j]);
    }
    rep.regression_residual_fraction = res / std::max(ymax - ymin, 1e-12);
  }

  rep.pass = rep.zero_delta_exact && rep.delta_ratio_worst <= 2.0 &&
             rep.regression_residual_fraction < 0.10;
  return rep;
}

std::vector<BlowupEstimate> blowup_probability(const BlowupConfig& cfg,
                                               const PhysicalParams& params) {
  GridPtr grid = TorusGrid::make(cfg.grid_n);
  const NoiseBasis basis = NoiseBasis::standard(grid, cfg.basis_K, cfg.basis_A, cfg.basis_s);
  const State shape = cfg.ic_shape.realize(grid);
  const double shape_norm = state_norm(shape, 1);

  std::vector<BlowupEstimate> out;
  for (double level : cfg.norm12_sq_levels) {
    State a0 = shape;
    if (shape_norm > 0.0) a0 *= std::sqrt(level) / shape_norm;

    double dt = cfg.dt;
    if (dt <= 0.0) dt = 0.9 * stability_limits(a0, params, basis).dt_max;
    const int steps = static_cast<int>(std::llround(cfg.T / dt));

    IntegrateConfig icfg;
    icfg.scheme = Scheme::em_ito;
    icfg.T = cfg.T;
    icfg.dt = dt;
    icfg.R = R_infinite;

    std::vector<int> stayed(cfg.paths, 0);
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < cfg.paths; ++p) {
      const NoisePath path = sample_path(basis.count(), dt, steps, derive_seed(cfg.base_seed, p));
      const TrajectoryRecord rec = integrate(a0, params, basis, path, icfg);
      bool ok = !rec.blown_up;
      if (ok)
        for (double n12 : rec.norm12)
          if (n12 * n12 >= cfg.ceiling_c) {
            ok = false;
            break;
          }
      stayed[p] = ok ? 1 : 0;
    }
    int count = 0;
    for (int s : stayed) count += s;

    BlowupEstimate est;
    est.norm12_sq = level;
    est.paths = cfg.paths;
    est.stay_probability = static_cast<double>(count) / cfg.paths;
    wilson_interval(count, cfg.paths, est.wilson_lo, est.wilson_hi);
    out.push_back(est);
  }
  return out;
}

} // namespace srsw
