#pragma once

#include <json.hpp>

#include "srsw/estimates.hpp"

namespace srsw {

/// Desk-scale defaults for the verification suites; every quantity is
/// seeded so reruns reproduce the reports exactly.
struct VerifyOptions {
  std::uint64_t seed = 1234;
  int samples = 100;
  int n_lo = 64;
  int n_hi = 128; // resolution-stability partner
  bool quiet = false;
};

/// Runs one named suite (advective | growth | envelope | continuity | all).
/// Throws ConfigError on an unknown name. Fitted constants are checked for
/// resolution stability (< 25% drift from n_lo to n_hi) where the underlying
/// inequality is fitted on sampled states.
std::vector<EstimateReport> run_verify_suite(const std::string& name,
                                             const VerifyOptions& opts);

nlohmann::json report_to_json(const EstimateReport& rep);
std::string reports_table(std::span<const EstimateReport> reps);

} // namespace srsw
