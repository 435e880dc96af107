#pragma once

// Figure data sets. Each figure is a CSV table with a fixed header; the
// header names are listed in the README.

#include <optional>
#include <string>
#include <vector>

#include "catloss/csv.hpp"
#include "catloss/formulas.hpp"

namespace catloss::figures {

/// Command-line overrides shared by `fig` and `sweep`. Unset fields keep the
/// figure or config defaults.
struct Overrides {
  std::optional<double> eta;
  std::optional<int> m;
  std::optional<formulas::Parity> parity;
  std::optional<double> alpha_max;
  std::optional<int> steps;
  std::optional<formulas::Sides> sides;
};

inline constexpr double kDefaultAlphaMax = 4.0;
inline constexpr int kDefaultAlphaSteps = 401;
inline constexpr int kThetaSteps = 181;
inline constexpr int kOverlapSteps = 101;

/// n evenly spaced points from start to stop inclusive (n = 1 gives {start}).
std::vector<double> linspace(double start, double stop, int n);

/// Builds the table for figure 1..6. Throws std::invalid_argument for an
/// unknown id or an override that does not apply to the figure.
csv::Table run_figure(int fig, const Overrides& overrides);

/// Surface value (1 - p^2) / (1 + p^2 cos theta); the indeterminate corner
/// p = 1, theta = pi returns its limit 1 along theta = pi.
double overlap_concurrence(double p, double theta);

}  // namespace catloss::figures
