#include "catloss/formulas.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace catloss::formulas {

namespace {

void require_alpha(double alpha, const char* where) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument(std::string(where) + ": alpha must be finite and non-negative");
  }
}

void require_positive_alpha(double alpha, const char* where) {
  require_alpha(alpha, where);
  if (alpha == 0.0) throw std::domain_error(std::string(where) + ": undefined at alpha = 0");
}

void require_eta(double eta, const char* where) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument(std::string(where) + ": eta must lie in [0, 1]");
  }
}

void require_m(int m, int min_m, const char* where) {
  if (m < min_m) {
    throw std::invalid_argument(std::string(where) + ": m must be at least " + std::to_string(min_m));
  }
}

// -expm1(-x) = 1 - e^{-x}, accurate for small x
double one_minus_exp(double x) { return -std::expm1(-x); }

Parity opposite(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

}  // namespace

double parity_phase(Parity p) { return p == Parity::even ? 0.0 : std::numbers::pi; }

Parity parse_parity(std::string_view text) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw std::invalid_argument("parity must be 'even' or 'odd', got '" + std::string(text) + "'");
}

Sides parse_sides(std::string_view text) {
  if (text == "one") return Sides::one;
  if (text == "two") return Sides::two;
  throw std::invalid_argument("sides must be 'one' or 'two', got '" + std::string(text) + "'");
}

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }
const char* to_string(Sides s) { return s == Sides::one ? "one" : "two"; }

void ChannelParams::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha: must be finite and >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta: must lie in [0, 1]");
  if (!std::isfinite(theta)) throw std::invalid_argument("theta: must be finite");
  if (m < 1) throw std::invalid_argument("m: must be >= 1");
}

double concurrence_pure(double alpha, double theta) {
  require_alpha(alpha, "concurrence_pure");
  if (!std::isfinite(theta)) throw std::invalid_argument("concurrence_pure: theta must be finite");
  const double x = alpha * alpha;
  const double num = one_minus_exp(8.0 * x);
  // 1 + e cos(theta) = (1 - e) + e (1 + cos theta), with 1 + cos theta = 2 cos^2(theta / 2)
  const double half = std::cos(0.5 * theta);
  const double one_plus_cos = 2.0 * half * half;
  if (alpha == 0.0 && one_plus_cos < 1e-12) {
    throw std::domain_error("concurrence_pure: indeterminate at alpha = 0, theta = pi");
  }
  return num / (num + std::exp(-8.0 * x) * one_plus_cos);
}

double phase_flip_prob(double alpha, double eta) {
  require_positive_alpha(alpha, "phase_flip_prob");
  require_eta(eta, "phase_flip_prob");
  const double x = alpha * alpha;
  const double denom = one_minus_exp(8.0 * x);
  const double num = denom + (std::expm1(-4.0 * (1.0 + eta) * x) - std::expm1(-4.0 * (1.0 - eta) * x));
  return num / (2.0 * denom);
}

double phase_flip_prob_limit(double eta) {
  require_eta(eta, "phase_flip_prob_limit");
  return 0.5 * (1.0 - eta);
}

double phase_flip_prob_m(double alpha, double eta, int m) {
  require_positive_alpha(alpha, "phase_flip_prob_m");
  require_eta(eta, "phase_flip_prob_m");
  require_m(m, 1, "phase_flip_prob_m");
  const double x = alpha * alpha;
  const double full = std::ldexp(1.0, m);
  const double half = std::ldexp(1.0, m - 1);
  const double denom = one_minus_exp(full * x);
  const double num = denom + (std::expm1(-half * (1.0 + eta) * x) - std::expm1(-half * (1.0 - eta) * x));
  return num / (2.0 * denom);
}

double ghz_survival_prob(double alpha, double eta) {
  require_positive_alpha(alpha, "ghz_survival_prob");
  require_eta(eta, "ghz_survival_prob");
  const double x = alpha * alpha;
  return 0.5 + (std::exp(-4.0 * (1.0 - eta) * x) - std::exp(-4.0 * (1.0 + eta) * x)) /
                   (2.0 * (1.0 - std::exp(-8.0 * x)));
}

double concurrence_m_limit(double eta, Parity parity) {
  require_eta(eta, "concurrence_m_limit");
  if (parity == Parity::even) return 0.0;
  return 2.0 * std::pow(eta, 1.5) / (1.0 + eta);
}

double concurrence_m(double alpha, double eta, int m, Parity parity) {
  require_alpha(alpha, "concurrence_m");
  require_eta(eta, "concurrence_m");
  require_m(m, 1, "concurrence_m");
  if (alpha == 0.0) return concurrence_m_limit(eta, parity);

  const double x = alpha * alpha;
  const double full = std::ldexp(1.0, m) * x;
  const double lossy = std::ldexp(1.0, m - 1) * (1.0 - eta) * x;
  const double kept = std::ldexp(1.0, m - 1) * (1.0 + eta) * x;
  // 1 - 2 p_{f,m} = (e^{-lossy} - e^{-kept}) / (1 - e^{-full})
  const double coherence = (std::expm1(-lossy) - std::expm1(-kept)) / one_minus_exp(full);
  const double denom = parity == Parity::even ? 1.0 + std::exp(-kept) : one_minus_exp(kept);
  return coherence / denom * std::sqrt(one_minus_exp(full)) * std::sqrt(one_minus_exp(eta * full));
}

SuperpositionState cat_state(const AmplitudeList& amps, ccalc::Complex relative_phase) {
  AmplitudeList neg(amps.size());
  for (std::size_t k = 0; k < amps.size(); ++k) neg[k] = -amps[k];
  SuperpositionState s(amps.size());
  s.add_term(1.0, amps);
  s.add_term(relative_phase, std::move(neg));
  return ccalc::normalize(s);
}

SuperpositionState cat_state(const AmplitudeList& amps, Parity parity) {
  return cat_state(amps, parity == Parity::even ? 1.0 : -1.0);
}

AmplitudeList mmode_amplitudes(double alpha, int m) {
  require_alpha(alpha, "mmode_amplitudes");
  require_m(m, 1, "mmode_amplitudes");
  AmplitudeList amps;
  amps.reserve(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k + 2 <= m; ++k) amps.emplace_back(std::sqrt(std::ldexp(1.0, m - 1 - k)) * alpha);
  amps.emplace_back(alpha);
  amps.emplace_back(alpha);
  return amps;
}

SuperpositionState mmode_state(double alpha, int m, Parity parity) {
  if (parity == Parity::odd) require_positive_alpha(alpha, "mmode_state");
  return cat_state(mmode_amplitudes(alpha, m), parity);
}

SuperpositionState three_mode_state(double alpha, double theta) {
  require_alpha(alpha, "three_mode_state");
  const double s = std::sqrt(2.0) * alpha;
  return cat_state({s, alpha, alpha}, std::polar(1.0, theta));
}

DampedCat damp_cat(const AmplitudeList& amps, Parity parity, std::span<const std::size_t> lossy_modes,
                   double eta) {
  if (amps.size() < 2) throw std::invalid_argument("damp_cat: need at least two modes");
  require_eta(eta, "damp_cat");
  auto d = ccalc::density_from_pure(cat_state(amps, parity));
  AmplitudeList damped = amps;
  const double t = std::sqrt(eta);
  for (auto k : lossy_modes) {
    if (k >= amps.size()) throw std::out_of_range("damp_cat: lossy mode out of range");
    d = ccalc::canonicalize(ccalc::apply_loss(d, k, eta));
    damped[k] *= t;
  }
  std::vector<logical::LogicalBasis> bases;
  bases.emplace_back(damped.front());
  bases.emplace_back(AmplitudeList(damped.begin() + 1, damped.end()));
  auto unflipped = cat_state(damped, parity);
  auto flipped = cat_state(damped, opposite(parity));
  return DampedCat{std::move(d), std::move(damped), std::move(bases), std::move(unflipped),
                   std::move(flipped)};
}

logical::MixtureFit phase_flip_pipeline(double alpha, double eta, int m) {
  require_positive_alpha(alpha, "phase_flip_pipeline");
  require_m(m, 2, "phase_flip_pipeline");
  const auto amps = mmode_amplitudes(alpha, m - 1);
  std::vector<std::size_t> lossy;
  for (std::size_t k = 1; k < amps.size(); ++k) lossy.push_back(k);
  const auto cat = damp_cat(amps, Parity::odd, lossy, eta);
  const SuperpositionState components[] = {cat.unflipped, cat.flipped};
  return logical::mixture_weights(cat.density, components, cat.bases);
}

GhzChannel ghz_channel(double alpha, double eta, Sides sides) {
  require_positive_alpha(alpha, "ghz_channel");
  require_eta(eta, "ghz_channel");
  if (eta == 0.0) throw std::domain_error("ghz_channel: damped basis undefined at eta = 0");

  const logical::LogicalBasis basis(alpha);
  const auto u = basis.u();
  const auto v = basis.v();
  const auto ghz = ccalc::scaled(
      ccalc::sum(ccalc::tensor(ccalc::tensor(u, u), u), ccalc::tensor(ccalc::tensor(v, v), v)),
      1.0 / std::sqrt(2.0));
  auto d = ccalc::canonicalize(ccalc::density_from_pure(ghz));
  d = ccalc::canonicalize(ccalc::apply_loss(d, 2, eta));
  if (sides == Sides::two) d = ccalc::canonicalize(ccalc::apply_loss(d, 1, eta));

  const double damped = std::sqrt(eta) * alpha;
  const logical::LogicalBasis bases[] = {
      logical::LogicalBasis(alpha),
      logical::LogicalBasis(sides == Sides::two ? damped : alpha),
      logical::LogicalBasis(damped),
  };
  auto proj = logical::project_to_qubits(d, bases);
  return GhzChannel{std::move(proj.matrix), proj.residual};
}

logical::XStateElements ghz_one_sided_elements(double alpha, double eta) {
  const auto ch = ghz_channel(alpha, eta, Sides::one);
  return logical::extract_x_elements(ch.matrix.entries, {0, 1, 6, 7});
}

logical::XStateElements ghz_one_sided_closed_form(double alpha, double eta) {
  require_positive_alpha(alpha, "ghz_one_sided_closed_form");
  require_eta(eta, "ghz_one_sided_closed_form");
  const logical::LogicalBasis in(alpha);
  const logical::LogicalBasis out(std::sqrt(eta) * alpha);
  // coherence left between |alpha'> and |-alpha'> after tracing the environment
  const double keep = std::exp(-2.0 * (1.0 - eta) * alpha * alpha);
  const double l = in.lambda(), mu = in.mu();
  const double lo = out.lambda(), muo = out.mu();
  logical::XStateElements x;
  x.a = (1.0 + keep) * lo * lo / (4.0 * l * l);
  x.b = (1.0 - keep) * muo * muo / (4.0 * l * l);
  x.c = (1.0 - keep) * lo * lo / (4.0 * mu * mu);
  x.d = (1.0 + keep) * muo * muo / (4.0 * mu * mu);
  x.e = (1.0 - keep) * lo * muo / (4.0 * l * mu);
  x.f = (1.0 + keep) * lo * muo / (4.0 * l * mu);
  return x;
}

logical::XStateElements damped_cat_elements(double alpha, double eta, Parity parity, Sides sides) {
  require_positive_alpha(alpha, "damped_cat_elements");
  require_eta(eta, "damped_cat_elements");
  if (eta == 0.0) throw std::domain_error("damped_cat_elements: damped basis undefined at eta = 0");
  const AmplitudeList amps = {std::sqrt(2.0) * alpha, alpha, alpha};
  const std::size_t one[] = {2};
  const std::size_t two[] = {1, 2};
  const auto cat = sides == Sides::one ? damp_cat(amps, parity, one, eta) : damp_cat(amps, parity, two, eta);
  const auto proj = logical::project_to_qubits(cat.density, cat.bases);
  return logical::extract_x_elements(proj.matrix.entries, {0, 1, 2, 3});
}

double direct_damped_concurrence(double alpha, double eta, Parity parity, Sides sides) {
  return logical::xstate_concurrence(damped_cat_elements(alpha, eta, parity, sides));
}

double damped_concurrence_bound(double alpha, double eta, double theta) {
  return logical::xstate_concurrence(ghz_one_sided_elements(alpha, eta)) * concurrence_pure(alpha, theta);
}

}  // namespace catloss::formulas
