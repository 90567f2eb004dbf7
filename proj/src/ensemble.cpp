#include "srsw/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "srsw/estimates.hpp"
#include "srsw/io.hpp"

namespace srsw {

namespace {

IntegrateConfig integrate_config(const RunConfig& cfg, std::uint64_t path_seed) {
  IntegrateConfig icfg;
  icfg.scheme = cfg.scheme;
  icfg.T = cfg.T;
  icfg.dt = cfg.dt;
  icfg.R = cfg.R;
  icfg.monitors = cfg.monitors;
  icfg.record_states = cfg.record_states;
  icfg.seed = path_seed;
  icfg.config_hash = cfg.hash();
  return icfg;
}

MemberRow summarize(const TrajectoryRecord& rec, int index, std::uint64_t seed,
                    std::optional<double> stay_level_sq, double ceiling) {
  MemberRow row;
  row.index = index;
  row.seed = seed;
  row.blown_up = rec.blown_up;
  for (double n12 : rec.norm12) row.sup_norm12 = std::max(row.sup_norm12, n12);
  row.final_norm12 = rec.norm12.empty() ? 0.0 : rec.norm12.back();
  row.final_norm22 = rec.norm22.empty() ? 0.0 : rec.norm22.back();
  row.final_mass = rec.mass_series.empty() ? 0.0 : rec.mass_series.back();
  if (!rec.mass_series.empty()) {
    const double m0 = rec.mass_series.front();
    double dev = 0.0;
    for (double m : rec.mass_series) dev = std::max(dev, std::abs(m - m0));
    row.mass_drift_rel = dev / std::max(std::abs(m0), 1e-300);
  }
  row.tau_R_hits = rec.tau_R_hits;
  row.tau_hat_M_hits = rec.tau_hat_M_hits;
  if (stay_level_sq) {
    row.stayed = !rec.blown_up && row.sup_norm12 * row.sup_norm12 < *stay_level_sq;
  } else {
    bool below = true;
    for (double n : rec.norm12_add)
      if (n >= ceiling) below = false;
    row.stayed = !rec.blown_up && below;
  }
  return row;
}

} // namespace

TrajectoryRecord run_single(const RunConfig& cfg, std::optional<std::uint64_t> seed_override) {
  GridPtr grid = TorusGrid::make(cfg.n, cfg.length);
  const PhysicalParams params = cfg.physical_params(grid);
  const NoiseBasis basis = build_basis(cfg, grid);
  const State a0 = build_initial_state(cfg, grid);
  validate_stability(cfg, a0, basis);

  const std::uint64_t base = seed_override ? *seed_override : cfg.ensemble.base_seed;
  const std::uint64_t path_seed = derive_seed(base, 0);
  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  const NoisePath path = sample_path(basis.count(), cfg.dt, steps, path_seed);
  return integrate(a0, params, basis, path, integrate_config(cfg, path_seed));
}

EnsembleStats run_ensemble(const RunConfig& cfg, std::optional<double> stay_level_sq) {
  GridPtr grid = TorusGrid::make(cfg.n, cfg.length);
  const PhysicalParams params = cfg.physical_params(grid);
  const NoiseBasis basis = build_basis(cfg, grid);
  const State a0 = build_initial_state(cfg, grid);
  validate_stability(cfg, a0, basis);

  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  EnsembleStats stats;
  stats.paths = cfg.ensemble.paths;
  stats.rows.resize(cfg.ensemble.paths);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < cfg.ensemble.paths; ++i) {
    const std::uint64_t seed = derive_seed(cfg.ensemble.base_seed, i);
    const NoisePath path = sample_path(basis.count(), cfg.dt, steps, seed);
    const TrajectoryRecord rec = integrate(a0, params, basis, path, integrate_config(cfg, seed));
    stats.rows[i] = summarize(rec, i, seed, stay_level_sq, cfg.monitors.ceiling);
  }

  // aggregates from index-ordered rows only
  int stayed = 0;
  double sup_sum = 0.0, fin_sum = 0.0;
  std::vector<double> sups;
  for (const MemberRow& r : stats.rows) {
    stayed += r.stayed ? 1 : 0;
    stats.blowups += r.blown_up ? 1 : 0;
    sup_sum += r.sup_norm12;
    fin_sum += r.final_norm12;
    sups.push_back(r.sup_norm12);
  }
  stats.stay_probability = static_cast<double>(stayed) / stats.paths;
  wilson_interval(stayed, stats.paths, stats.wilson_lo, stats.wilson_hi);
  stats.mean_sup_norm12 = sup_sum / stats.paths;
  stats.mean_final_norm12 = fin_sum / stats.paths;
  std::sort(sups.begin(), sups.end());
  auto quantile = [&](double q) {
    const double pos = q * (sups.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sups.size() - 1);
    const double w = pos - lo;
    return sups[lo] * (1.0 - w) + sups[hi] * w;
  };
  stats.sup_norm12_q25 = quantile(0.25);
  stats.sup_norm12_median = quantile(0.5);
  stats.sup_norm12_q75 = quantile(0.75);
  return stats;
}

void write_members_csv(const EnsembleStats& stats, const RunConfig& cfg,
                       const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out << "index,seed,blown_up,stayed,sup_norm12,final_norm12,final_norm22,final_mass,"
         "mass_drift_rel";
  for (double level : cfg.monitors.R_levels) out << ",tauR_" << io::format_double(level);
  for (double level : cfg.monitors.M_levels) out << ",tauM_" << io::format_double(level);
  out << "\n";
  for (const MemberRow& r : stats.rows) {
    out << r.index << ',' << r.seed << ',' << (r.blown_up ? 1 : 0) << ',' << (r.stayed ? 1 : 0)
        << ',' << io::format_double(r.sup_norm12) << ',' << io::format_double(r.final_norm12)
        << ',' << io::format_double(r.final_norm22) << ',' << io::format_double(r.final_mass)
        << ',' << io::format_double(r.mass_drift_rel);
    for (double level : cfg.monitors.R_levels) {
      auto it = r.tau_R_hits.find(level);
      out << ',' << (it == r.tau_R_hits.end() ? "" : io::format_double(it->second));
    }
    for (double level : cfg.monitors.M_levels) {
      auto it = r.tau_hat_M_hits.find(level);
      out << ',' << (it == r.tau_hat_M_hits.end() ? "" : io::format_double(it->second));
    }
    out << "\n";
  }
}

nlohmann::json aggregate_json(const EnsembleStats& stats, const RunConfig& cfg) {
  return nlohmann::json{
      {"paths", stats.paths},
      {"blowups", stats.blowups},
      {"stay_probability", stats.stay_probability},
      {"wilson", {stats.wilson_lo, stats.wilson_hi}},
      {"mean_sup_norm12", stats.mean_sup_norm12},
      {"mean_final_norm12", stats.mean_final_norm12},
      {"sup_norm12_quantiles",
       {{"q25", stats.sup_norm12_q25},
        {"median", stats.sup_norm12_median},
        {"q75", stats.sup_norm12_q75}}},
      {"base_seed", cfg.ensemble.base_seed},
      {"config_hash", cfg.hash()},
  };
}

} // namespace srsw
