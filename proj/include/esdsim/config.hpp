#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esdsim/protocol.hpp"

namespace esd::io {

// A run file fully resolved into per-set experiment configurations. The grid
// description is kept verbatim for the manifest.
struct RunConfig {
  std::uint64_t file_seed = 0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;
  std::vector<protocol::ExperimentConfig> sets;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;  // replaces the file seed
  std::optional<int> sets;            // keep only the first N sets
  bool no_mitigation = false;
};

// Strict JSON schema; any unknown key raises ConfigError. Top level:
//   grid         {"min": >=0, "max": >min, "points": >=1}   (required)
//   sets         array of set objects, at least one          (required)
//   seed         integer (default 0)
//   shots        integer >= 1 (default 20000)
//   repetitions  integer >= 1 (default 10)
//   mitigation   bool (default true)
//   exact        bool (default false)
//   reset_aware_swap bool (default false)
//   noise        noise object (default: no noise)
// Set objects carry exactly one of
//   alpha        string "1/sqrt(k)" with integer k >= 2
//   lambda       number in (0, pi)
// plus optional "layout" (five consecutive wires), "seed", "noise".
// Sets without a layout get wires 0-4, 6-10, 27-31 by position; later sets
// must name one. Sets without a seed get one derived from the file seed and
// their position. A noise object is
//   {"p1": p, "p2": p, "readout": {"p01": p, "p10": p,
//    "overrides": {"<wire>": {"p01": p, "p10": p}}}}
// with every field optional and defaulting to zero error.
RunConfig parse_run_config(const std::string& text,
                           const CliOverrides& overrides = {});
RunConfig load_run_config(const std::string& path,
                          const CliOverrides& overrides = {});

// "1/sqrt(k)" -> 1/sqrt(k); anything else raises ConfigError.
double parse_alpha(const std::string& text);

}  // namespace esd::io
