#pragma once

// Batch commands behind the `tikreg` executable. Each returns the process
// exit code: 0 success, 1 check failure, 2 configuration error.

#include "tikreg/bounded_nat.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace tikreg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  BigInt cap = BoundedNat::default_cap();
  std::uint64_t thin = 1;
  bool norms_only = false;
};

/// Runs the configured experiment and writes <out>/<experiment>.csv and
/// <out>/<experiment>.json.
int cmd_run(const std::string& config_path, const RunOptions& opts, std::ostream& out,
            std::ostream& err);

/// Prints nu1, nu2, G, dr_gap_start and the mu family at k for the moduli of
/// the config.
int cmd_rates(const std::string& config_path, std::uint64_t k, const std::string& f_spec,
              const BigInt& cap, std::ostream& out, std::ostream& err);

/// Runs validate_q and prints one line per condition.
int cmd_validate(const std::string& config_path, std::uint64_t horizon, std::uint64_t k_max,
                 std::ostream& out, std::ostream& err);

}  // namespace tikreg
