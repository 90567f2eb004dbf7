#pragma once

#include <filesystem>

#include "srsw/config.hpp"

namespace srsw {

/// Per-member summary of an ensemble run.
struct MemberRow {
  int index = 0;
  std::uint64_t seed = 0;
  bool blown_up = false;
  double sup_norm12 = 0.0;   // sup_t canonical ||a_t||_{1,2}
  double final_norm12 = 0.0;
  double final_norm22 = 0.0;
  double final_mass = 0.0;
  double mass_drift_rel = 0.0;
  std::map<double, double> tau_R_hits;
  std::map<double, double> tau_hat_M_hits;
  bool stayed = false;
};

struct EnsembleStats {
  std::vector<MemberRow> rows;
  int paths = 0;
  double stay_probability = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double mean_sup_norm12 = 0.0;
  double mean_final_norm12 = 0.0;
  double sup_norm12_q25 = 0.0, sup_norm12_median = 0.0, sup_norm12_q75 = 0.0;
  int blowups = 0;
};

/// Member i runs on the derived seed splitmix(base_seed, i); members execute
/// in parallel and rows are aggregated in index order, so results do not
/// depend on scheduling. "Stayed" means sup_t ||a_t||_{1,2}^2 < stay_level
/// (and no blow-up); stay_level defaults to the monitor ceiling when the
/// config does not set one.
EnsembleStats run_ensemble(const RunConfig& cfg, std::optional<double> stay_level_sq);

void write_members_csv(const EnsembleStats& stats, const RunConfig& cfg,
                       const std::filesystem::path& file);
nlohmann::json aggregate_json(const EnsembleStats& stats, const RunConfig& cfg);

/// Single trajectory on the member-0 seed (the paths=1 ensemble).
TrajectoryRecord run_single(const RunConfig& cfg, std::optional<std::uint64_t> seed_override);

} // namespace srsw
