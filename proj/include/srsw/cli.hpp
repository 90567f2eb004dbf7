#pragma once

#include <optional>
#include <string>

namespace srsw::cli {

// Exit codes: 0 success, 1 configuration error (or failed verification),
// 2 blow-up (partial artifacts written), 3 Picard non-convergence.
int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, bool quiet);
int cmd_picard(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed, bool quiet);
int cmd_ensemble(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, bool quiet);
int cmd_verify(const std::string& suite, const std::string& config_path,
               const std::string& out_dir, std::optional<std::uint64_t> seed, bool quiet);

int main(int argc, const char* const* argv);

} // namespace srsw::cli
