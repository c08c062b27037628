#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eqone::cli {

enum class Units { natural, si };
enum class OutputFormat { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

/// 0xDEADBEEF
inline constexpr std::uint64_t kDefaultSeed = 3735928559ull;

struct PhysicalConstants {
  double hbar = 0.0;
  double bohr_magneton = 0.0;
};

struct RunConfig {
  Units units = Units::natural;
  PhysicalConstants constants;
  std::uint64_t seed = kDefaultSeed;
  std::optional<OutputFormat> output_format;
  /// Empty means standard output.
  std::filesystem::path output_path;
  unsigned workers = 1;
};

/// Runs one command line. Results go to `out` (or --out), diagnostics and
/// usage text to `err`. `env_seed` is the value of EQONE_SEED, if set.
/// Returns 0 on success, 2 on configuration errors, 3 on numeric failures.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                       const std::optional<std::string>& env_seed = std::nullopt);

/// Convenience overload for tests.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                       const std::optional<std::string>& env_seed = std::nullopt);

}  // namespace eqone::cli
