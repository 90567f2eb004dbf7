#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "srsw/stepper.hpp"

namespace srsw::io {

/// Raw field bytes: flat little-endian float64, row-major, no header.
void write_field_binary(const ScalarField& f, const std::filesystem::path& file);
void read_field_binary(ScalarField& f, const std::filesystem::path& file);

/// State snapshot: <prefix>_v1.bin, <prefix>_v2.bin, <prefix>_h.bin plus a
/// <prefix>.json sidecar recording {n, length, components, time, seed} and,
/// when given, the physical parameters. Round-trips bit-exactly.
void write_state_snapshot(const State& state, const std::filesystem::path& dir,
                          const std::string& prefix, double time, std::uint64_t seed,
                          const PhysicalParams* params = nullptr);
State read_state_snapshot(const std::filesystem::path& dir, const std::string& prefix,
                          double* time_out = nullptr, std::uint64_t* seed_out = nullptr);

/// NoisePath persisted in the same flat-binary + JSON-sidecar format.
void write_noise_path(const NoisePath& path, const std::filesystem::path& dir,
                      const std::string& prefix);
NoisePath read_noise_path(const std::filesystem::path& dir, const std::string& prefix);

/// Norm series CSV, columns: t,norm12,norm22,t22,fR_value,mass.
/// norm12 is the additive ||v||_{1,2}+||h||_{1,2} that f_R and tau^R use;
/// norm22 and the t22 accumulator are the canonical quadrature norms.
void write_norm_csv(const TrajectoryRecord& rec, const std::filesystem::path& file);

/// Shortest-exact decimal for doubles in CSV artifacts.
std::string format_double(double x);

} // namespace srsw::io
