#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "srsw/stepper.hpp"

namespace srsw {

/// Configuration problem; message names the offending field.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IcModeSpec {
  std::string field; // v1 | v2 | h
  int k1 = 0;
  int k2 = 0;
  std::string phase = "cos"; // cos | sin
  double amplitude = 0.0;
};

struct IcSpec {
  std::string kind = "rest"; // rest | analytic | snapshot
  std::vector<IcModeSpec> modes;
  double mean_h = 0.0; // constant offset added to h after scaling
  std::optional<double> scale_to_norm12; // rescale the mode sum to this additive norm
  std::string snapshot_dir;
  std::string snapshot_prefix;
};

struct BasisSpec {
  int K = 8;
  double A = 0.05;
  double s = 3.0;
  std::vector<NoiseMode> explicit_modes; // if nonempty, overrides (K, A, s)
};

struct EnsembleSpec {
  int paths = 1;
  std::uint64_t base_seed = 0;
};

struct PicardSpec {
  double tol = 1e-6;
  int max_iter = 12;
  double alpha = 0.25;
  double p = 4.0;
};

/// One JSON document configures every CLI subcommand.
struct RunConfig {
  int n = 64;
  double length = two_pi;

  double epsilon = 1.0;
  double coriolis_f = 1.0;
  double froude = 1.0;
  double nu = 0.1;
  double eta = 0.1;

  BasisSpec basis;
  IcSpec ic;

  Scheme scheme = Scheme::em_ito;
  double T = 1.0;
  double dt = 0.01;
  double R = R_infinite;
  MonitorConfig monitors;
  std::optional<double> stay_level; // staying threshold on ||a||_{1,2}^2
  EnsembleSpec ensemble;
  PicardSpec picard;

  bool record_states = false;
  bool snapshot_final = false;
  std::string out_dir = "out";

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
  /// FNV-1a over the canonical JSON text; embedded in every artifact.
  std::string hash() const;

  PhysicalParams physical_params(const GridPtr& grid) const;
};

State build_initial_state(const RunConfig& cfg, const GridPtr& grid);
NoiseBasis build_basis(const RunConfig& cfg, const GridPtr& grid);

/// Refuse-to-start check: throws ConfigError naming the violated constraint
/// when cfg.dt exceeds the stability rule on the configured initial state.
void validate_stability(const RunConfig& cfg, const State& a0, const NoiseBasis& basis);

std::string fnv1a_hex(const std::string& bytes);

} // namespace srsw
