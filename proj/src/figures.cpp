#include "catloss/figures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "catloss/logical.hpp"

namespace catloss::figures {

using formulas::Parity;
using formulas::Sides;

namespace {

void reject(bool present, const char* flag, int fig) {
  if (present) {
    throw std::invalid_argument(std::string(flag) + " does not apply to fig " + std::to_string(fig));
  }
}

std::vector<double> alpha_grid(const Overrides& o) {
  const double stop = o.alpha_max.value_or(kDefaultAlphaMax);
  const int steps = o.steps.value_or(kDefaultAlphaSteps);
  if (!(std::isfinite(stop) && stop > 0.0)) throw std::invalid_argument("--alpha-max must be positive");
  if (steps < 2) throw std::invalid_argument("--steps must be at least 2");
  return linspace(0.0, stop, steps);
}

std::vector<double> eta_list(const Overrides& o, std::vector<double> defaults) {
  if (!o.eta) return defaults;
  if (!(*o.eta >= 0.0 && *o.eta <= 1.0)) throw std::invalid_argument("--eta must lie in [0, 1]");
  return {*o.eta};
}

std::vector<int> m_list(const Overrides& o) {
  if (!o.m) return {2, 5, 8};
  if (*o.m < 1) throw std::invalid_argument("--m must be at least 1");
  return {*o.m};
}

std::string tag(double x) { return csv::format_number(x); }

double flip_or_limit(double alpha, double eta, int m) {
  return alpha == 0.0 ? formulas::phase_flip_prob_limit(eta) : formulas::phase_flip_prob_m(alpha, eta, m);
}

csv::Table fig1(const Overrides& o) {
  reject(o.eta.has_value(), "--eta", 1);
  reject(o.m.has_value(), "--m", 1);
  reject(o.parity.has_value(), "--parity", 1);
  reject(o.alpha_max.has_value(), "--alpha-max", 1);
  reject(o.sides.has_value(), "--sides", 1);
  const int theta_steps = o.steps.value_or(kThetaSteps);
  if (theta_steps < 2) throw std::invalid_argument("--steps must be at least 2");
  csv::Table t({"theta", "p", "concurrence"});
  for (double theta : linspace(0.0, 2.0 * std::numbers::pi, theta_steps)) {
    for (double p : linspace(0.0, 1.0, kOverlapSteps)) t.add_row({theta, p, overlap_concurrence(p, theta)});
  }
  return t;
}

csv::Table fig2(const Overrides& o) {
  reject(o.m.has_value(), "--m", 2);
  reject(o.parity.has_value(), "--parity", 2);
  reject(o.sides.has_value(), "--sides", 2);
  const auto etas = eta_list(o, {0.3, 0.6, 0.9});
  std::vector<std::string> header{"alpha"};
  for (double e : etas) header.push_back("pf_eta" + tag(e));
  csv::Table t(std::move(header));
  for (double a : alpha_grid(o)) {
    std::vector<double> row{a};
    for (double e : etas) row.push_back(a == 0.0 ? formulas::phase_flip_prob_limit(e) : formulas::phase_flip_prob(a, e));
    t.add_row(row);
  }
  return t;
}

csv::Table fig3(const Overrides& o) {
  reject(o.m.has_value(), "--m", 3);
  const auto etas = eta_list(o, {0.3, 0.6, 0.9});
  for (double e : etas) {
    if (e == 0.0) throw std::invalid_argument("fig 3 needs eta > 0");
  }
  const Parity parity = o.parity.value_or(Parity::odd);
  const double theta = formulas::parity_phase(parity);
  const bool one = !o.sides || *o.sides == Sides::one;
  const bool two = !o.sides || *o.sides == Sides::two;

  std::vector<std::string> header{"alpha"};
  for (double e : etas) {
    header.push_back("ghz_one_eta" + tag(e));
    header.push_back("bound_eta" + tag(e));
    if (two) header.push_back("direct_two_eta" + tag(e));
    if (one) header.push_back("direct_one_eta" + tag(e));
  }
  csv::Table t(std::move(header));
  auto grid = alpha_grid(o);
  grid.erase(grid.begin());  // bases are undefined at alpha = 0
  for (double a : grid) {
    std::vector<double> row{a};
    for (double e : etas) {
      const double ghz = logical::xstate_concurrence(formulas::ghz_one_sided_elements(a, e));
      row.push_back(ghz);
      row.push_back(ghz * formulas::concurrence_pure(a, theta));
      if (two) row.push_back(formulas::direct_damped_concurrence(a, e, parity, Sides::two));
      if (one) row.push_back(formulas::direct_damped_concurrence(a, e, parity, Sides::one));
    }
    t.add_row(row);
  }
  return t;
}

csv::Table fig4(const Overrides& o) {
  reject(o.parity.has_value(), "--parity", 4);
  reject(o.sides.has_value(), "--sides", 4);
  const auto etas = eta_list(o, {0.99, 0.1});
  const auto ms = m_list(o);
  std::vector<std::string> header{"alpha"};
  for (double e : etas)
    for (int m : ms) header.push_back("pfm_m" + std::to_string(m) + "_eta" + tag(e));
  csv::Table t(std::move(header));
  for (double a : alpha_grid(o)) {
    std::vector<double> row{a};
    for (double e : etas)
      for (int m : ms) row.push_back(flip_or_limit(a, e, m));
    t.add_row(row);
  }
  return t;
}

csv::Table fig56(int fig, double default_eta, const Overrides& o) {
  reject(o.sides.has_value(), "--sides", fig);
  const auto etas = eta_list(o, {default_eta});
  const double eta = etas.front();
  const auto ms = m_list(o);
  std::vector<Parity> parities{Parity::odd, Parity::even};
  if (o.parity) parities = {*o.parity};
  std::vector<std::string> header{"alpha"};
  for (Parity p : parities)
    for (int m : ms) header.push_back(std::string(p == Parity::odd ? "C_minus" : "C_plus") + "_m" + std::to_string(m));
  csv::Table t(std::move(header));
  for (double a : alpha_grid(o)) {
    std::vector<double> row{a};
    for (Parity p : parities)
      for (int m : ms) row.push_back(formulas::concurrence_m(a, eta, m, p));
    t.add_row(row);
  }
  return t;
}

}  // namespace

std::vector<double> linspace(double start, double stop, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = start + step * i;
  out.back() = stop;
  return out;
}

double overlap_concurrence(double p, double theta) {
  const double p2 = p * p;
  const double half = std::cos(0.5 * theta);
  const double one_plus_cos = 2.0 * half * half;
  const double num = 1.0 - p2;
  if (num == 0.0) return one_plus_cos < 1e-12 ? 1.0 : 0.0;
  return num / (num + p2 * one_plus_cos);
}

csv::Table run_figure(int fig, const Overrides& overrides) {
  switch (fig) {
    case 1: return fig1(overrides);
    case 2: return fig2(overrides);
    case 3: return fig3(overrides);
    case 4: return fig4(overrides);
    case 5: return fig56(5, 0.9, overrides);
    case 6: return fig56(6, 0.1, overrides);
    default: throw std::invalid_argument("figure id must be 1..6, got " + std::to_string(fig));
  }
}

}  // namespace catloss::figures
