#pragma once

// Seeded cross-backend validation suite behind `catloss validate`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace catloss::validation {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string grid;
  double seconds = 0.0;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct Options {
  std::uint64_t seed = 7;
  /// Replaces every per-check tolerance when set.
  std::optional<double> tolerance;
};

/// A check passes when its max error is finite and strictly below the tolerance.
Report run(const Options& options);

/// Timing is left out unless requested so that reports are byte-stable.
nlohmann::json to_json(const Report& report, bool include_timing);

}  // namespace catloss::validation
