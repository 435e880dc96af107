#include "catloss/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "catloss/logical.hpp"
#include "json.hpp"

namespace catloss::sweep {

using formulas::Parity;
using formulas::Sides;
using nlohmann::json;

namespace {

const std::vector<std::string> kQuantities = {
    "concurrence_pure",    "phase_flip_prob",     "phase_flip_prob_m",  "ghz_survival_prob",
    "concurrence_m",       "concurrence_m_plus",  "concurrence_m_minus", "damped_bound",
    "direct_concurrence",  "ghz_concurrence",
};

const std::set<std::string> kAxes = {"alpha", "eta", "theta", "m"};

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(path + "/" + key, "unknown key");
    }
  }
}

double number_at(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
  return v.get<double>();
}

int integer_at(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "/" + key, "expected an integer");
  const auto i = v.get<long long>();
  if (i < -1000000 || i > 1000000) throw ConfigError(path + "/" + key, "integer out of range");
  return static_cast<int>(i);
}

std::string string_at(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

// Field errors from ChannelParams::validate start with the field name.
void validate_fixed(const formulas::ChannelParams& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError("/fixed/" + msg.substr(0, colon), msg.substr(colon + 2));
  }
}

formulas::ChannelParams at_point(const SweepConfig& c, double value) {
  formulas::ChannelParams p = c.fixed;
  if (c.axis.name == "alpha") p.alpha = value;
  else if (c.axis.name == "eta") p.eta = value;
  else if (c.axis.name == "theta") p.theta = value;
  else p.m = static_cast<int>(std::lround(value));
  return p;
}

double evaluate(const std::string& q, const formulas::ChannelParams& p, Parity parity, Sides sides) {
  const double a = p.alpha;
  if (q == "concurrence_pure") {
    // alpha -> 0 along theta = pi keeps C = 1
    if (a == 0.0 && 1.0 + std::cos(p.theta) < 1e-12) return 1.0;
    return formulas::concurrence_pure(a, p.theta);
  }
  if (q == "phase_flip_prob") {
    return a == 0.0 ? formulas::phase_flip_prob_limit(p.eta) : formulas::phase_flip_prob(a, p.eta);
  }
  if (q == "phase_flip_prob_m") {
    return a == 0.0 ? formulas::phase_flip_prob_limit(p.eta) : formulas::phase_flip_prob_m(a, p.eta, p.m);
  }
  if (q == "ghz_survival_prob") {
    return a == 0.0 ? 1.0 - formulas::phase_flip_prob_limit(p.eta) : formulas::ghz_survival_prob(a, p.eta);
  }
  if (q == "concurrence_m") return formulas::concurrence_m(a, p.eta, p.m, parity);
  if (q == "concurrence_m_plus") return formulas::concurrence_m(a, p.eta, p.m, Parity::even);
  if (q == "concurrence_m_minus") return formulas::concurrence_m(a, p.eta, p.m, Parity::odd);
  if (q == "damped_bound") return formulas::damped_concurrence_bound(a, p.eta, formulas::parity_phase(parity));
  if (q == "direct_concurrence") return formulas::direct_damped_concurrence(a, p.eta, parity, sides);
  if (q == "ghz_concurrence") return logical::xstate_concurrence(formulas::ghz_one_sided_elements(a, p.eta));
  throw ConfigError("/quantities", "unknown quantity '" + q + "'");
}

}  // namespace

ConfigError::ConfigError(std::string where, const std::string& what)
    : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

const std::vector<std::string>& known_quantities() { return kQuantities; }

bool is_concurrence(std::string_view q) {
  return q == "concurrence_pure" || q == "concurrence_m" || q == "concurrence_m_plus" ||
         q == "concurrence_m_minus" || q == "damped_bound" || q == "direct_concurrence" ||
         q == "ghz_concurrence";
}

SweepConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_column(text, e.byte), "malformed JSON");
  }
  only_keys(doc, "", {"axis", "fixed", "quantities", "epsilon", "output"});

  SweepConfig c;
  if (!doc.contains("axis")) throw ConfigError("/axis", "missing");
  const auto& ax = doc["axis"];
  only_keys(ax, "/axis", {"name", "start", "stop", "steps"});
  for (const char* k : {"name", "start", "stop", "steps"}) {
    if (!ax.contains(k)) throw ConfigError(std::string("/axis/") + k, "missing");
  }
  c.axis.name = string_at(ax, "name", "/axis");
  c.axis.start = number_at(ax, "start", "/axis");
  c.axis.stop = number_at(ax, "stop", "/axis");
  c.axis.steps = integer_at(ax, "steps", "/axis");

  if (doc.contains("fixed")) {
    const auto& fx = doc["fixed"];
    only_keys(fx, "/fixed", {"alpha", "eta", "theta", "m", "parity", "sides"});
    if (fx.contains("alpha")) c.fixed.alpha = number_at(fx, "alpha", "/fixed");
    if (fx.contains("eta")) c.fixed.eta = number_at(fx, "eta", "/fixed");
    if (fx.contains("theta")) c.fixed.theta = number_at(fx, "theta", "/fixed");
    if (fx.contains("m")) c.fixed.m = integer_at(fx, "m", "/fixed");
    try {
      if (fx.contains("parity")) c.parity = formulas::parse_parity(string_at(fx, "parity", "/fixed"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/fixed/parity", e.what());
    }
    try {
      if (fx.contains("sides")) c.sides = formulas::parse_sides(string_at(fx, "sides", "/fixed"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/fixed/sides", e.what());
    }
  }

  if (!doc.contains("quantities")) throw ConfigError("/quantities", "missing");
  const auto& qs = doc["quantities"];
  if (!qs.is_array()) throw ConfigError("/quantities", "expected an array of names");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!qs[i].is_string()) throw ConfigError("/quantities/" + std::to_string(i), "expected a string");
    c.quantities.push_back(qs[i].get<std::string>());
  }
  if (doc.contains("epsilon")) c.epsilon = number_at(doc, "epsilon", "");
  if (doc.contains("output")) c.output = string_at(doc, "output", "");
  return c;
}

void apply_overrides(SweepConfig& c, const figures::Overrides& o, std::optional<double> epsilon,
                     std::optional<std::string> output) {
  const auto not_axis = [&](const char* flag, const char* name) {
    if (c.axis.name == name) throw ConfigError(flag, std::string("conflicts with the '") + name + "' axis");
  };
  if (o.eta) {
    not_axis("--eta", "eta");
    c.fixed.eta = *o.eta;
  }
  if (o.m) {
    not_axis("--m", "m");
    c.fixed.m = *o.m;
  }
  if (o.parity) c.parity = *o.parity;
  if (o.sides) c.sides = *o.sides;
  if (o.alpha_max) {
    if (c.axis.name != "alpha") throw ConfigError("--alpha-max", "needs an 'alpha' axis");
    c.axis.stop = *o.alpha_max;
  }
  if (o.steps) c.axis.steps = *o.steps;
  if (epsilon) c.epsilon = *epsilon;
  if (output) c.output = *output;
}

void validate(const SweepConfig& c) {
  if (!kAxes.count(c.axis.name)) {
    throw ConfigError("/axis/name", "must be one of alpha, eta, theta, m; got '" + c.axis.name + "'");
  }
  if (c.axis.steps < 1) throw ConfigError("/axis/steps", "must be at least 1");
  if (c.axis.steps > 1000000) throw ConfigError("/axis/steps", "must be at most 1000000");
  for (auto [key, v] : {std::pair{"start", c.axis.start}, std::pair{"stop", c.axis.stop}}) {
    const std::string path = std::string("/axis/") + key;
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    if (c.axis.name == "alpha" && v < 0.0) throw ConfigError(path, "alpha must be >= 0");
    if (c.axis.name == "eta" && !(v >= 0.0 && v <= 1.0)) throw ConfigError(path, "eta must lie in [0, 1]");
    if (c.axis.name == "m" && (v < 1.0 || v != std::floor(v))) throw ConfigError(path, "m must be an integer >= 1");
  }
  if (c.axis.name == "m") {
    for (double v : figures::linspace(c.axis.start, c.axis.stop, c.axis.steps)) {
      if (std::abs(v - std::round(v)) > 1e-9) throw ConfigError("/axis/steps", "m grid must hit integers only");
    }
  }
  validate_fixed(c.fixed);
  if (c.quantities.empty()) throw ConfigError("/quantities", "must list at least one quantity");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < c.quantities.size(); ++i) {
    const auto& q = c.quantities[i];
    const std::string path = "/quantities/" + std::to_string(i);
    if (std::find(kQuantities.begin(), kQuantities.end(), q) == kQuantities.end()) {
      throw ConfigError(path, "unknown quantity '" + q + "'");
    }
    if (!seen.insert(q).second) throw ConfigError(path, "duplicate quantity '" + q + "'");
  }
  if (!(std::isfinite(c.epsilon) && c.epsilon > 0.0)) throw ConfigError("/epsilon", "must be positive");
}

std::vector<double> axis_values(const Axis& axis) {
  auto v = figures::linspace(axis.start, axis.stop, axis.steps);
  if (axis.name == "m") {
    for (auto& x : v) x = std::round(x);
  }
  return v;
}

std::optional<double> first_drop_below(const std::vector<double>& grid, const std::vector<double>& values,
                                       double epsilon) {
  bool above = false;
  for (std::size_t i = 0; i < grid.size() && i < values.size(); ++i) {
    if (values[i] >= epsilon) {
      above = true;
    } else if (above) {
      return grid[i];
    }
  }
  return std::nullopt;
}

csv::Table run(const SweepConfig& c) {
  validate(c);
  const auto grid = axis_values(c.axis);
  std::vector<std::vector<double>> columns(c.quantities.size(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = at_point(c, grid[i]);
    for (std::size_t q = 0; q < c.quantities.size(); ++q) {
      try {
        columns[q][i] = evaluate(c.quantities[q], p, c.parity, c.sides);
      } catch (const std::domain_error& e) {
        throw ConfigError("/quantities/" + std::to_string(q),
                          "'" + c.quantities[q] + "' is undefined at " + c.axis.name + " = " +
                              csv::format_number(grid[i]) + " (" + e.what() + ")");
      } catch (const std::invalid_argument& e) {
        throw ConfigError("/axis", std::string(e.what()));
      }
    }
  }

  std::vector<std::string> header{c.axis.name};
  for (const auto& q : c.quantities) header.push_back(q);
  std::vector<std::string> stars;
  if (c.axis.name == "alpha") {
    for (std::size_t q = 0; q < c.quantities.size(); ++q) {
      if (!is_concurrence(c.quantities[q])) continue;
      header.push_back("alpha_star_" + c.quantities[q]);
      const auto drop = first_drop_below(grid, columns[q], c.epsilon);
      stars.push_back(drop ? csv::format_number(*drop) : "none");
    }
  }

  csv::Table t(std::move(header));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row{csv::format_number(grid[i])};
    for (const auto& col : columns) row.push_back(csv::format_number(col[i]));
    row.insert(row.end(), stars.begin(), stars.end());
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace catloss::sweep
