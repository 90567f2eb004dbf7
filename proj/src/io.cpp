#include "srsw/io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping is not implemented");

namespace srsw::io {

using nlohmann::json;

namespace {

void write_doubles(const double* data, size_t count, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
  if (!out) throw std::runtime_error("short write: " + file.string());
}

void read_doubles(double* data, size_t count, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + file.string());
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
  if (in.gcount() != static_cast<std::streamsize>(count * 8))
    throw std::runtime_error("short read: " + file.string());
}

} // namespace

void write_field_binary(const ScalarField& f, const std::filesystem::path& file) {
  write_doubles(f.data(), static_cast<size_t>(f.size()), file);
}

void read_field_binary(ScalarField& f, const std::filesystem::path& file) {
  read_doubles(f.data(), static_cast<size_t>(f.size()), file);
}

void write_state_snapshot(const State& state, const std::filesystem::path& dir,
                          const std::string& prefix, double time, std::uint64_t seed,
                          const PhysicalParams* params) {
  std::filesystem::create_directories(dir);
  write_field_binary(state.v.x, dir / (prefix + "_v1.bin"));
  write_field_binary(state.v.y, dir / (prefix + "_v2.bin"));
  write_field_binary(state.h, dir / (prefix + "_h.bin"));
  json sidecar = {
      {"n", state.grid().n()},
      {"length", state.grid().length()},
      {"components", {"v1", "v2", "h"}},
      {"time", time},
      {"seed", seed},
  };
  if (params) {
    sidecar["params"] = {{"epsilon", params->epsilon},
                         {"f", params->coriolis_f},
                         {"froude", params->froude},
                         {"nu", params->nu},
                         {"eta", params->eta}};
  }
  std::ofstream out(dir / (prefix + ".json"), std::ios::trunc);
  out << sidecar.dump(2) << "\n";
}

State read_state_snapshot(const std::filesystem::path& dir, const std::string& prefix,
                          double* time_out, std::uint64_t* seed_out) {
  std::ifstream in(dir / (prefix + ".json"));
  if (!in) throw std::runtime_error("missing snapshot sidecar: " + prefix);
  json sidecar = json::parse(in);
  GridPtr grid = TorusGrid::make(sidecar.at("n").get<int>(), sidecar.at("length").get<double>());
  State state(grid);
  read_field_binary(state.v.x, dir / (prefix + "_v1.bin"));
  read_field_binary(state.v.y, dir / (prefix + "_v2.bin"));
  read_field_binary(state.h, dir / (prefix + "_h.bin"));
  if (time_out) *time_out = sidecar.at("time").get<double>();
  if (seed_out) *seed_out = sidecar.at("seed").get<std::uint64_t>();
  return state;
}

void write_noise_path(const NoisePath& path, const std::filesystem::path& dir,
                      const std::string& prefix) {
  std::filesystem::create_directories(dir);
  write_doubles(path.increments.data(), path.increments.size(), dir / (prefix + ".bin"));
  json sidecar = {
      {"dt", path.dt},        {"modes", path.modes}, {"steps", path.steps},
      {"seed", path.seed},    {"generator", path.generator_id},
  };
  std::ofstream out(dir / (prefix + ".json"), std::ios::trunc);
  out << sidecar.dump(2) << "\n";
}

NoisePath read_noise_path(const std::filesystem::path& dir, const std::string& prefix) {
  std::ifstream in(dir / (prefix + ".json"));
  if (!in) throw std::runtime_error("missing noise path sidecar: " + prefix);
  json sidecar = json::parse(in);
  NoisePath path;
  path.dt = sidecar.at("dt").get<double>();
  path.modes = sidecar.at("modes").get<int>();
  path.steps = sidecar.at("steps").get<int>();
  path.seed = sidecar.at("seed").get<std::uint64_t>();
  path.generator_id = sidecar.at("generator").get<std::string>();
  path.increments.resize(static_cast<size_t>(path.modes) * path.steps);
  read_doubles(path.increments.data(), path.increments.size(), dir / (prefix + ".bin"));
  return path;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_norm_csv(const TrajectoryRecord& rec, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out << "t,norm12,norm22,t22,fR_value,mass\n";
  for (size_t i = 0; i < rec.times.size(); ++i) {
    out << format_double(rec.times[i]) << ',' << format_double(rec.norm12_add[i]) << ','
        << format_double(rec.norm22[i]) << ',' << format_double(rec.t22[i]) << ','
        << format_double(rec.fr_value[i]) << ',' << format_double(rec.mass_series[i]) << "\n";
  }
}

} // namespace srsw::io
