#include "srsw/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "srsw/ensemble.hpp"
#include "srsw/io.hpp"
#include "srsw/picard.hpp"
#include "srsw/verify.hpp"

namespace srsw::cli {

namespace {

RunConfig load(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed) {
  RunConfig cfg = RunConfig::from_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed) cfg.ensemble.base_seed = *seed;
  return cfg;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out << j.dump(2) << "\n";
}

nlohmann::json hits_json(const std::map<double, double>& hits) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [level, t] : hits) j[io::format_double(level)] = t;
  return j;
}

} // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, bool quiet) {
  RunConfig cfg;
  try {
    cfg = load(config_path, out_dir, seed);
    std::filesystem::create_directories(cfg.out_dir);
    const TrajectoryRecord rec = run_single(cfg, std::nullopt);

    io::write_norm_csv(rec, std::filesystem::path(cfg.out_dir) / "norms.csv");
    nlohmann::json record = {
        {"config", cfg.to_json()},
        {"config_hash", cfg.hash()},
        {"scheme", scheme_name(rec.scheme)},
        {"base_seed", cfg.ensemble.base_seed},
        {"path_seed", rec.seed},
        {"blown_up", rec.blown_up},
        {"blowup_term", rec.blowup_term},
        {"last_time", rec.last_time()},
        {"final_norm12", rec.norm12.back()},
        {"final_norm22", rec.norm22.back()},
        {"final_t22", rec.t22.back()},
        {"tau_R_hits", hits_json(rec.tau_R_hits)},
        {"tau_hat_M_hits", hits_json(rec.tau_hat_M_hits)},
    };
    write_json(record, std::filesystem::path(cfg.out_dir) / "record.json");
    if (cfg.snapshot_final) {
      const PhysicalParams params = cfg.physical_params(rec.final_state.grid_ptr());
      io::write_state_snapshot(rec.final_state, cfg.out_dir, "state_final", rec.last_time(),
                               rec.seed, &params);
    }
    if (!quiet)
      std::cout << "simulate: " << (rec.blown_up ? "blow-up at t=" : "completed, t=")
                << rec.last_time() << ", final ||a||_{1,2}=" << rec.norm12.back() << "\n";
    return rec.blown_up ? 2 : 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_picard(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed, bool quiet) {
  try {
    const RunConfig cfg = load(config_path, out_dir, seed);
    std::filesystem::create_directories(cfg.out_dir);

    GridPtr grid = TorusGrid::make(cfg.n, cfg.length);
    const PhysicalParams params = cfg.physical_params(grid);
    const NoiseBasis basis = build_basis(cfg, grid);
    const State a0 = build_initial_state(cfg, grid);
    validate_stability(cfg, a0, basis);

    PicardConfig pcfg;
    pcfg.T = cfg.T;
    pcfg.dt = cfg.dt;
    pcfg.R = cfg.R;
    pcfg.tol = cfg.picard.tol;
    pcfg.max_iter = cfg.picard.max_iter;
    pcfg.frac_alpha = cfg.picard.alpha;
    pcfg.frac_p = cfg.picard.p;
    pcfg.seed = derive_seed(cfg.ensemble.base_seed, 0);
    pcfg.config_hash = cfg.hash();

    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    const NoisePath path = sample_path(basis.count(), cfg.dt, steps, pcfg.seed);
    const PicardResult result = picard_solve(a0, params, basis, path, pcfg);

    std::ofstream csv(std::filesystem::path(cfg.out_dir) / "iterates.csv", std::ios::trunc);
    csv << "n,dist_sup_l2,t22_norm,frac_norm\n";
    for (const IterateRecord& it : result.iterates)
      csv << it.n << ',' << io::format_double(it.dist_prev_sup_l2) << ','
          << io::format_double(it.t22_norm) << ',' << io::format_double(it.frac_norm) << "\n";

    nlohmann::json record = {
        {"config", cfg.to_json()},
        {"config_hash", cfg.hash()},
        {"converged", result.converged},
        {"iterations", result.iterates.size()},
        {"residual_vs_direct", result.residual_vs_direct},
        {"path_seed", pcfg.seed},
    };
    write_json(record, std::filesystem::path(cfg.out_dir) / "record.json");
    if (!quiet)
      std::cout << "picard: " << (result.converged ? "converged" : "NOT converged") << " after "
                << result.iterates.size()
                << " iterates, residual vs direct solve = " << result.residual_vs_direct << "\n";
    return result.converged ? 0 : 3;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_ensemble(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, bool quiet) {
  try {
    const RunConfig cfg = load(config_path, out_dir, seed);
    std::filesystem::create_directories(cfg.out_dir);
    const EnsembleStats stats = run_ensemble(cfg, cfg.stay_level);
    write_members_csv(stats, cfg, std::filesystem::path(cfg.out_dir) / "members.csv");
    write_json(aggregate_json(stats, cfg), std::filesystem::path(cfg.out_dir) / "aggregate.json");
    if (!quiet)
      std::cout << "ensemble: " << stats.paths << " paths, stay probability "
                << stats.stay_probability << " [" << stats.wilson_lo << ", " << stats.wilson_hi
                << "], blowups " << stats.blowups << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const std::string& suite, const std::string& config_path,
               const std::string& out_dir, std::optional<std::uint64_t> seed, bool quiet) {
  try {
    VerifyOptions opts;
    if (!config_path.empty()) {
      const RunConfig cfg = RunConfig::from_file(config_path);
      opts.seed = cfg.ensemble.base_seed;
      opts.n_lo = cfg.n;
      opts.n_hi = 2 * cfg.n;
    }
    if (seed) opts.seed = *seed;
    opts.quiet = quiet;
    const std::vector<EstimateReport> reps = run_verify_suite(suite, opts);

    const std::filesystem::path dir = out_dir.empty() ? "out" : out_dir;
    std::filesystem::create_directories(dir);
    for (const EstimateReport& rep : reps) write_json(report_to_json(rep), dir / (rep.id + ".json"));
    const std::string table = reports_table(reps);
    {
      std::ofstream out(dir / "summary.txt", std::ios::trunc);
      out << table;
    }
    if (!quiet) std::cout << table;
    for (const EstimateReport& rep : reps)
      if (!rep.pass) return 1;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int main(int argc, const char* const* argv) {
  CLI::App app{"stochastic rotating shallow water simulator and estimate checker"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--seed", seed, "override the base seed");
  app.add_flag("--quiet", quiet, "suppress progress output");

  auto add_common = [&](CLI::App* sub, bool need_config) {
    sub->fallthrough(); // --seed / --quiet may follow the subcommand
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (need_config) opt->required();
    sub->add_option("--out", out_dir, "output directory (overrides config out_dir)");
  };

  CLI::App* sim = app.add_subcommand("simulate", "integrate one trajectory");
  add_common(sim, true);
  CLI::App* pic = app.add_subcommand("picard", "run the linear-SPDE approximating sequence");
  add_common(pic, true);
  CLI::App* ens = app.add_subcommand("ensemble", "run a Monte Carlo ensemble");
  add_common(ens, true);
  CLI::App* ver = app.add_subcommand("verify", "run estimate verification suites");
  add_common(ver, false);
  ver->add_option("--suite", suite, "advective | growth | envelope | continuity | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (sim->parsed()) return cmd_simulate(config_path, out_dir, seed, quiet);
  if (pic->parsed()) return cmd_picard(config_path, out_dir, seed, quiet);
  if (ens->parsed()) return cmd_ensemble(config_path, out_dir, seed, quiet);
  if (ver->parsed()) return cmd_verify(suite, config_path, out_dir, seed, quiet);
  return 1;
}

} // namespace srsw::cli
