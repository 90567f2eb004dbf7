#include "srsw/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "srsw/io.hpp"

namespace srsw {

using nlohmann::json;

namespace {

double require_positive(const json& node, const char* path, double fallback) {
  const double v = node.is_null() ? fallback : node.get<double>();
  if (!(v > 0.0)) throw ConfigError(std::string("config error: ") + path + " must be > 0");
  return v;
}

json get_or_null(const json& j, const char* key) {
  if (j.contains(key)) return j.at(key);
  return json();
}

} // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  try {
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.contains("n")) cfg.n = g.at("n").get<int>();
      if (g.contains("length")) cfg.length = g.at("length").get<double>();
    }
    if (cfg.n < 8 || cfg.n % 2 != 0)
      throw ConfigError("config error: grid.n must be even and >= 8");
    if (!(cfg.length > 0.0)) throw ConfigError("config error: grid.length must be > 0");

    if (j.contains("params")) {
      const json& p = j.at("params");
      cfg.epsilon = require_positive(get_or_null(p, "epsilon"), "params.epsilon", cfg.epsilon);
      if (p.contains("f")) cfg.coriolis_f = p.at("f").get<double>();
      cfg.froude = require_positive(get_or_null(p, "froude"), "params.froude", cfg.froude);
      cfg.nu = require_positive(get_or_null(p, "nu"), "params.nu", cfg.nu);
      cfg.eta = require_positive(get_or_null(p, "eta"), "params.eta", cfg.eta);
    }

    if (j.contains("basis")) {
      const json& b = j.at("basis");
      if (b.contains("modes")) {
        for (const json& m : b.at("modes")) {
          NoiseMode nm;
          nm.k1 = m.at("k1").get<int>();
          nm.k2 = m.at("k2").get<int>();
          const std::string ph = m.value("phase", "cos");
          if (ph != "cos" && ph != "sin")
            throw ConfigError("config error: basis.modes[].phase must be cos|sin");
          nm.phase = ph == "cos" ? NoisePhase::cos : NoisePhase::sin;
          nm.amplitude = m.at("amplitude").get<double>();
          cfg.basis.explicit_modes.push_back(nm);
        }
      } else {
        if (b.contains("K")) cfg.basis.K = b.at("K").get<int>();
        if (b.contains("A")) cfg.basis.A = b.at("A").get<double>();
        if (b.contains("s")) cfg.basis.s = b.at("s").get<double>();
        if (cfg.basis.K < 0) throw ConfigError("config error: basis.K must be >= 0");
        if (cfg.basis.K > 0 && !(cfg.basis.A > 0.0))
          throw ConfigError("config error: basis.A must be > 0");
      }
    }

    if (j.contains("ic")) {
      const json& ic = j.at("ic");
      cfg.ic.kind = ic.value("kind", "rest");
      if (cfg.ic.kind != "rest" && cfg.ic.kind != "analytic" && cfg.ic.kind != "snapshot")
        throw ConfigError("config error: ic.kind must be rest|analytic|snapshot");
      if (ic.contains("modes")) {
        for (const json& m : ic.at("modes")) {
          IcModeSpec spec;
          spec.field = m.at("field").get<std::string>();
          if (spec.field != "v1" && spec.field != "v2" && spec.field != "h")
            throw ConfigError("config error: ic.modes[].field must be v1|v2|h");
          spec.k1 = m.at("k1").get<int>();
          spec.k2 = m.at("k2").get<int>();
          spec.phase = m.value("phase", "cos");
          if (spec.phase != "cos" && spec.phase != "sin")
            throw ConfigError("config error: ic.modes[].phase must be cos|sin");
          spec.amplitude = m.at("amplitude").get<double>();
          cfg.ic.modes.push_back(spec);
        }
      }
      cfg.ic.mean_h = ic.value("mean_h", 0.0);
      if (ic.contains("scale_to_norm12"))
        cfg.ic.scale_to_norm12 = ic.at("scale_to_norm12").get<double>();
      cfg.ic.snapshot_dir = ic.value("snapshot_dir", "");
      cfg.ic.snapshot_prefix = ic.value("snapshot_prefix", "");
      if (cfg.ic.kind == "snapshot" && cfg.ic.snapshot_prefix.empty())
        throw ConfigError("config error: ic.snapshot_prefix is required for snapshot ic");
    }

    if (j.contains("scheme")) {
      const auto s = scheme_from_name(j.at("scheme").get<std::string>());
      if (!s) throw ConfigError("config error: scheme must be em_ito|heun_strat|em_ito_if");
      cfg.scheme = *s;
    }
    if (j.contains("T")) cfg.T = j.at("T").get<double>();
    if (!(cfg.T > 0.0)) throw ConfigError("config error: T must be > 0");
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (!(cfg.dt > 0.0)) throw ConfigError("config error: dt must be > 0");

    if (j.contains("R")) {
      const json& r = j.at("R");
      if (r.is_string()) {
        if (r.get<std::string>() != "inf")
          throw ConfigError("config error: R must be a positive number or \"inf\"");
        cfg.R = R_infinite;
      } else {
        cfg.R = r.get<double>();
        if (!(cfg.R > 0.0)) throw ConfigError("config error: R must be > 0");
      }
    }

    if (j.contains("monitors")) {
      const json& m = j.at("monitors");
      if (m.contains("R")) cfg.monitors.R_levels = m.at("R").get<std::vector<double>>();
      if (m.contains("M")) cfg.monitors.M_levels = m.at("M").get<std::vector<double>>();
      if (m.contains("ceiling")) cfg.monitors.ceiling = m.at("ceiling").get<double>();
      if (!(cfg.monitors.ceiling > 0.0))
        throw ConfigError("config error: monitors.ceiling must be > 0");
      if (m.contains("stay_level")) {
        cfg.stay_level = m.at("stay_level").get<double>();
        if (!(*cfg.stay_level > 0.0))
          throw ConfigError("config error: monitors.stay_level must be > 0");
      }
    }

    if (j.contains("ensemble")) {
      const json& e = j.at("ensemble");
      if (e.contains("paths")) cfg.ensemble.paths = e.at("paths").get<int>();
      if (cfg.ensemble.paths < 1) throw ConfigError("config error: ensemble.paths must be >= 1");
      if (e.contains("base_seed")) cfg.ensemble.base_seed = e.at("base_seed").get<std::uint64_t>();
    }

    if (j.contains("picard")) {
      const json& p = j.at("picard");
      if (p.contains("tol")) cfg.picard.tol = p.at("tol").get<double>();
      if (!(cfg.picard.tol > 0.0)) throw ConfigError("config error: picard.tol must be > 0");
      if (p.contains("max_iter")) cfg.picard.max_iter = p.at("max_iter").get<int>();
      if (cfg.picard.max_iter < 1)
        throw ConfigError("config error: picard.max_iter must be >= 1");
      if (p.contains("alpha")) cfg.picard.alpha = p.at("alpha").get<double>();
      if (!(cfg.picard.alpha >= 0.0 && cfg.picard.alpha < 0.5))
        throw ConfigError("config error: picard.alpha must be in [0, 0.5)");
      if (p.contains("p")) cfg.picard.p = p.at("p").get<double>();
      if (!(cfg.picard.p > 2.0)) throw ConfigError("config error: picard.p must be > 2");
    }

    if (j.contains("record_states")) cfg.record_states = j.at("record_states").get<bool>();
    if (j.contains("snapshot_final")) cfg.snapshot_final = j.at("snapshot_final").get<bool>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["grid"] = {{"n", n}, {"length", length}};
  j["params"] = {{"epsilon", epsilon}, {"f", coriolis_f}, {"froude", froude},
                 {"nu", nu},           {"eta", eta}};
  if (!basis.explicit_modes.empty()) {
    json modes = json::array();
    for (const NoiseMode& m : basis.explicit_modes)
      modes.push_back({{"k1", m.k1},
                       {"k2", m.k2},
                       {"phase", m.phase == NoisePhase::cos ? "cos" : "sin"},
                       {"amplitude", m.amplitude}});
    j["basis"] = {{"modes", modes}};
  } else {
    j["basis"] = {{"K", basis.K}, {"A", basis.A}, {"s", basis.s}};
  }
  json ic_json = {{"kind", ic.kind}, {"mean_h", ic.mean_h}};
  if (!ic.modes.empty()) {
    json modes = json::array();
    for (const IcModeSpec& m : ic.modes)
      modes.push_back({{"field", m.field},
                       {"k1", m.k1},
                       {"k2", m.k2},
                       {"phase", m.phase},
                       {"amplitude", m.amplitude}});
    ic_json["modes"] = modes;
  }
  if (ic.scale_to_norm12) ic_json["scale_to_norm12"] = *ic.scale_to_norm12;
  if (!ic.snapshot_prefix.empty()) {
    ic_json["snapshot_dir"] = ic.snapshot_dir;
    ic_json["snapshot_prefix"] = ic.snapshot_prefix;
  }
  j["ic"] = ic_json;
  j["scheme"] = scheme_name(scheme);
  j["T"] = T;
  j["dt"] = dt;
  if (std::isinf(R)) j["R"] = "inf";
  else j["R"] = R;
  j["monitors"] = {{"R", monitors.R_levels}, {"M", monitors.M_levels},
                   {"ceiling", monitors.ceiling}};
  if (stay_level) j["monitors"]["stay_level"] = *stay_level;
  j["ensemble"] = {{"paths", ensemble.paths}, {"base_seed", ensemble.base_seed}};
  j["picard"] = {{"tol", picard.tol},
                 {"max_iter", picard.max_iter},
                 {"alpha", picard.alpha},
                 {"p", picard.p}};
  j["record_states"] = record_states;
  j["snapshot_final"] = snapshot_final;
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

PhysicalParams RunConfig::physical_params(const GridPtr& grid) const {
  (void)grid;
  PhysicalParams p;
  p.epsilon = epsilon;
  p.coriolis_f = coriolis_f;
  p.froude = froude;
  p.nu = nu;
  p.eta = eta;
  p.validate();
  return p;
}

State build_initial_state(const RunConfig& cfg, const GridPtr& grid) {
  State a(grid);
  if (cfg.ic.kind == "snapshot") {
    State loaded = io::read_state_snapshot(cfg.ic.snapshot_dir.empty() ? "." : cfg.ic.snapshot_dir,
                                           cfg.ic.snapshot_prefix);
    if (!loaded.grid().compatible(*grid))
      throw ConfigError("config error: ic snapshot grid does not match grid.n/length");
    return loaded;
  }
  if (cfg.ic.kind == "analytic") {
    const double ks = grid->kscale();
    for (const IcModeSpec& m : cfg.ic.modes) {
      ScalarField* target = m.field == "v1" ? &a.v.x : (m.field == "v2" ? &a.v.y : &a.h);
      const int n = grid->n();
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const double phase = ks * (m.k1 * grid->x(ix) + m.k2 * grid->y(iy));
          (*target)(ix, iy) +=
              m.amplitude * (m.phase == "cos" ? std::cos(phase) : std::sin(phase));
        }
    }
    if (cfg.ic.scale_to_norm12) {
      const double current = additive_w12_norm(a);
      if (current > 0.0) a *= (*cfg.ic.scale_to_norm12 / current);
    }
  }
  if (cfg.ic.mean_h != 0.0) {
    for (int i = 0; i < a.h.size(); ++i) a.h.data()[i] += cfg.ic.mean_h;
  }
  return a;
}

NoiseBasis build_basis(const RunConfig& cfg, const GridPtr& grid) {
  if (!cfg.basis.explicit_modes.empty())
    return NoiseBasis::from_modes(grid, cfg.basis.explicit_modes);
  return NoiseBasis::standard(grid, cfg.basis.K, cfg.basis.A, cfg.basis.s);
}

void validate_stability(const RunConfig& cfg, const State& a0, const NoiseBasis& basis) {
  StabilityReport rep = stability_limits(a0, cfg.physical_params(a0.grid_ptr()), basis);
  if (cfg.scheme == Scheme::em_ito_if) {
    // the integrating factor handles the viscous flow exactly
    rep.dt_max = std::min(rep.advective, rep.noise);
    rep.binding = rep.advective < rep.noise ? "advective (0.5*dx/max|u|)"
                                            : "noise (0.1/sum ||xi||_inf^2)";
  }
  if (cfg.dt > rep.dt_max) {
    throw ConfigError("config error: dt=" + io::format_double(cfg.dt) +
                      " violates stability rule: exceeds " + rep.binding + " limit " +
                      io::format_double(rep.dt_max));
  }
}

} // namespace srsw
