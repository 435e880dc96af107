#pragma once

// Generic one-axis parameter sweeps driven by a JSON config:
//
//   {
//     "axis": {"name": "alpha", "start": 0.0, "stop": 4.0, "steps": 401},
//     "fixed": {"eta": 0.9, "m": 5, "parity": "odd", "sides": "two", "theta": 0.0},
//     "quantities": ["concurrence_m_plus", "concurrence_m_minus"],
//     "epsilon": 1e-3,
//     "output": "out.csv"
//   }
//
// Every key except "axis" and "quantities" is optional.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catloss/csv.hpp"
#include "catloss/figures.hpp"
#include "catloss/formulas.hpp"

namespace catloss::sweep {

/// Config problem; where() is a JSON pointer ("/axis/steps") or "line L, column C".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Axis {
  std::string name = "alpha";  // alpha | eta | theta | m
  double start = 0.0;
  double stop = 4.0;
  int steps = 401;
};

struct SweepConfig {
  Axis axis;
  formulas::ChannelParams fixed;
  formulas::Parity parity = formulas::Parity::odd;
  formulas::Sides sides = formulas::Sides::two;
  std::vector<std::string> quantities;
  double epsilon = 1e-3;
  std::optional<std::string> output;
};

/// Names accepted in "quantities".
const std::vector<std::string>& known_quantities();
/// Concurrence-type quantities get alpha_star_<name> columns on alpha sweeps.
bool is_concurrence(std::string_view quantity);

SweepConfig parse_config(std::string_view json_text);

/// Flags win over file values. Throws ConfigError on conflicts such as
/// --alpha-max with a non-alpha axis.
void apply_overrides(SweepConfig& config, const figures::Overrides& overrides,
                     std::optional<double> epsilon, std::optional<std::string> output);

/// Range and name checks; throws ConfigError.
void validate(const SweepConfig& config);

/// Grid values of the axis, in order.
std::vector<double> axis_values(const Axis& axis);

/// First grid value where `values` falls below epsilon after having been at
/// or above it; nullopt if that never happens.
std::optional<double> first_drop_below(const std::vector<double>& grid, const std::vector<double>& values,
                                       double epsilon);

/// One row per grid point: the axis column, one column per quantity, then
/// alpha_star_<q> columns (same value on every row) for alpha sweeps.
csv::Table run(const SweepConfig& config);

}  // namespace catloss::sweep
