#include "catloss/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "catloss/ccalc.hpp"
#include "catloss/figures.hpp"
#include "catloss/fockref.hpp"
#include "catloss/formulas.hpp"
#include "catloss/logical.hpp"
#include "catloss/sweep.hpp"

namespace catloss::validation {

using ccalc::Amplitude;
using ccalc::Complex;
using formulas::Parity;
using formulas::Sides;

namespace {

constexpr double kPi = std::numbers::pi;

// Portable draws: the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

struct Outcome {
  double max_error;
  std::string grid;
};

struct Check {
  const char* name;
  double tolerance;
  std::function<Outcome(Rng&)> body;
};

double worse(double acc, double err) { return std::isnan(err) ? err : std::max(acc, err); }

const std::vector<double> kAlphaGrid = {0.2, 0.65, 1.1, 1.55, 2.0};
const std::vector<double> kEtaGrid = {0.1, 0.3, 0.5, 0.7, 0.9};

ccalc::SuperpositionState random_state(Rng& rng, std::size_t modes, std::size_t terms) {
  ccalc::SuperpositionState s(modes);
  for (std::size_t t = 0; t < terms; ++t) {
    ccalc::AmplitudeList amps(modes);
    for (auto& a : amps) a = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    s.add_term({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, std::move(amps));
  }
  return ccalc::normalize(s);
}

// Largest |coefficient difference| between two canonical densities, matching dyads by amplitudes.
double dyad_distance(const ccalc::SuperpositionDensity& x, const ccalc::SuperpositionDensity& y) {
  double worst = 0.0;
  std::vector<bool> used(y.dyads().size(), false);
  for (const auto& dx : x.dyads()) {
    bool found = false;
    for (std::size_t j = 0; j < y.dyads().size(); ++j) {
      const auto& dy = y.dyads()[j];
      if (!used[j] && ccalc::amplitudes_close(dx.ket, dy.ket, 1e-10) && ccalc::amplitudes_close(dx.bra, dy.bra, 1e-10)) {
        worst = std::max(worst, std::abs(dx.coeff - dy.coeff));
        used[j] = found = true;
        break;
      }
    }
    if (!found) worst = std::max(worst, std::abs(dx.coeff));
  }
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (!used[j]) worst = std::max(worst, std::abs(y.dyads()[j].coeff));
  }
  return worst;
}

std::vector<Check> checks() {
  std::vector<Check> out;

  out.push_back({"pure_concurrence_grid", 1e-10, [](Rng&) {
                   double err = 0.0;
                   const std::size_t side[] = {0};
                   for (double theta : figures::linspace(0.0, 2.0 * kPi, 181)) {
                     for (double a : figures::linspace(0.05, 2.0, 40)) {
                       const double c = logical::pure_bipartite_concurrence(formulas::three_mode_state(a, theta), side);
                       err = worse(err, std::abs(c - formulas::concurrence_pure(a, theta)));
                     }
                   }
                   return Outcome{err, "theta in [0, 2pi] x 181, alpha in [0.05, 2] x 40"};
                 }});

  out.push_back({"pure_concurrence_at_pi", 1e-12, [](Rng&) {
                   double err = 0.0;
                   for (double a : figures::linspace(0.05, 2.0, 40)) {
                     err = worse(err, std::abs(formulas::concurrence_pure(a, kPi) - 1.0));
                   }
                   return Outcome{err, "theta = pi, alpha in [0.05, 2] x 40"};
                 }});

  out.push_back({"phase_flip_pipeline", 1e-10, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     for (double e : kEtaGrid) {
                       const auto fit = formulas::phase_flip_pipeline(a, e, 3);
                       const double p = formulas::phase_flip_prob(a, e);
                       err = worse(err, std::abs(fit.weights[1] - p));
                       err = worse(err, std::abs(fit.weights[0] - (1.0 - p)));
                       err = worse(err, fit.residual);
                     }
                   }
                   return Outcome{err, "alpha in {0.2..2} x 5, eta in {0.1..0.9} x 5; includes residual"};
                 }});

  out.push_back({"multimode_flip_pipeline", 1e-10, [](Rng&) {
                   double err = 0.0;
                   for (int m = 2; m <= 6; ++m) {
                     for (double a : {0.2, 0.65, 1.1}) {
                       for (double e : {0.1, 0.5, 0.9}) {
                         const auto fit = formulas::phase_flip_pipeline(a, e, m);
                         err = worse(err, std::abs(fit.weights[1] - formulas::phase_flip_prob_m(a, e, m)));
                         err = worse(err, fit.residual);
                       }
                     }
                   }
                   return Outcome{err, "m in 2..6, alpha in {0.2, 0.65, 1.1}, eta in {0.1, 0.5, 0.9}"};
                 }});

  out.push_back({"phase_flip_small_alpha_limit", 1e-6, [](Rng&) {
                   double err = 0.0;
                   for (double e : {0.3, 0.6, 0.9}) {
                     err = worse(err, std::abs(formulas::phase_flip_prob(1e-4, e) - formulas::phase_flip_prob_limit(e)));
                   }
                   return Outcome{err, "alpha = 1e-4, eta in {0.3, 0.6, 0.9}"};
                 }});

  out.push_back({"phase_flip_saturation", 1e-3, [](Rng&) {
                   double err = 0.0;
                   for (double e : {0.3, 0.6, 0.9}) err = worse(err, std::abs(formulas::phase_flip_prob(4.0, e) - 0.5));
                   return Outcome{err, "alpha = 4, eta in {0.3, 0.6, 0.9}"};
                 }});

  out.push_back({"flip_identity_m3", 1e-14, [](Rng& rng) {
                   double err = 0.0;
                   for (int i = 0; i < 10000; ++i) {
                     const double a = rng.uniform(1e-3, 4.0);
                     const double e = rng.uniform();
                     err = worse(err, std::abs(formulas::phase_flip_prob_m(a, e, 3) - formulas::phase_flip_prob(a, e)));
                   }
                   return Outcome{err, "10000 random (alpha in (0, 4), eta in [0, 1))"};
                 }});

  out.push_back({"xstate_vs_wootters", 1e-10, [](Rng& rng) {
                   double err = 0.0;
                   for (int i = 0; i < 1000; ++i) {
                     logical::XStateElements x;
                     x.a = rng.uniform();
                     x.b = rng.uniform();
                     x.c = rng.uniform();
                     x.d = rng.uniform();
                     const double t = x.a + x.b + x.c + x.d;
                     x.a /= t;
                     x.b /= t;
                     x.c /= t;
                     x.d /= t;
                     x.e = std::polar(rng.uniform() * std::sqrt(x.b * x.c), 2.0 * kPi * rng.uniform());
                     x.f = std::polar(rng.uniform() * std::sqrt(x.a * x.d), 2.0 * kPi * rng.uniform());
                     err = worse(err, std::abs(logical::xstate_concurrence(x) -
                                               logical::wootters_concurrence(logical::assemble(x))));
                   }
                   return Outcome{err, "1000 random PSD X states"};
                 }});

  out.push_back({"ghz_closed_form", 1e-10, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     for (double e : kEtaGrid) {
                       const auto x = formulas::ghz_one_sided_elements(a, e);
                       const auto y = formulas::ghz_one_sided_closed_form(a, e);
                       for (double d : {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}) err = worse(err, std::abs(d));
                       err = worse(err, std::abs(x.e - y.e));
                       err = worse(err, std::abs(x.f - y.f));
                     }
                   }
                   return Outcome{err, "alpha in {0.2..2} x 5, eta in {0.1..0.9} x 5"};
                 }});

  out.push_back({"ghz_trace", 1e-10, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     for (double e : kEtaGrid) {
                       const auto x = formulas::ghz_one_sided_elements(a, e);
                       err = worse(err, std::abs(x.a + x.b + x.c + x.d - 1.0));
                     }
                   }
                   return Outcome{err, "|a + b + c + d - 1| on the 5 x 5 grid"};
                 }});

  out.push_back({"ghz_psd", 1e-9, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     for (double e : kEtaGrid) {
                       const auto ch = formulas::ghz_channel(a, e, Sides::one);
                       err = worse(err, std::max(0.0, -logical::hermitian_eigenvalues(ch.matrix.entries).minCoeff()));
                     }
                   }
                   return Outcome{err, "most negative eigenvalue on the 5 x 5 grid"};
                 }});

  out.push_back({"ghz_residual", 1e-10, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     for (double e : kEtaGrid) {
                       for (Sides s : {Sides::one, Sides::two}) err = worse(err, std::abs(formulas::ghz_channel(a, e, s).residual));
                     }
                   }
                   return Outcome{err, "projection residual, one- and two-sided, 5 x 5 grid"};
                 }});

  out.push_back({"ghz_lossless", 1e-12, [](Rng&) {
                   double err = 0.0;
                   for (double a : kAlphaGrid) {
                     const auto x = formulas::ghz_one_sided_elements(a, 1.0);
                     for (double d : {x.a - 0.5, x.d - 0.5, x.b, x.c}) err = worse(err, std::abs(d));
                     err = worse(err, std::abs(x.f - 0.5));
                     err = worse(err, std::abs(x.e));
                   }
                   return Outcome{err, "eta = 1, alpha in {0.2..2} x 5"};
                 }});

  out.push_back({"bound_dominates_direct", 1e-9, [](Rng&) {
                   double err = 0.0;
                   for (double a : figures::linspace(0.1, 2.0, 20)) {
                     for (double e : figures::linspace(0.05, 1.0, 20)) {
                       for (Parity p : {Parity::odd, Parity::even}) {
                         const double bound = formulas::damped_concurrence_bound(a, e, formulas::parity_phase(p));
                         const double direct = formulas::direct_damped_concurrence(a, e, p, Sides::two);
                         err = worse(err, std::max(0.0, direct - bound));
                       }
                     }
                   }
                   return Outcome{err, "max(0, direct - bound), alpha in [0.1, 2] x 20, eta in [0.05, 1] x 20, both parities"};
                 }});

  out.push_back({"cross_backend_loss", 1e-8, [](Rng&) {
                   double err = 0.0;
                   for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
                     const int n = fockref::required_truncation(a);
                     const std::vector<int> dims{n + 1, n + 1};
                     const auto psi = formulas::cat_state({a, a}, Parity::odd);
                     const auto rho = fockref::pure_density(dims, fockref::from_superposition(psi, dims));
                     for (double e : kEtaGrid) {
                       const auto exact = fockref::from_superposition(ccalc::canonicalize(ccalc::apply_loss(psi, 1, e)), dims);
                       const auto ref = fockref::apply_channel(rho, 1, fockref::damping_kraus(e, n));
                       err = worse(err, (exact.rho - ref.rho).cwiseAbs().maxCoeff());
                     }
                   }
                   return Outcome{err, "two-mode odd cat, alpha in {0.25, 0.5, 1, 1.5, 2}, eta in {0.1..0.9} x 5"};
                 }});

  out.push_back({"ghz_fock_analog", 1e-8, [](Rng&) {
                   double err = 0.0;
                   for (double a : {0.5, 1.0, 1.5}) {
                     for (double e : {0.2, 0.6, 0.9}) {
                       const logical::LogicalBasis in(a);
                       const logical::LogicalBasis out_basis(std::sqrt(e) * a);
                       const auto ghz = ccalc::scaled(
                           ccalc::sum(ccalc::tensor(in.u(), in.u()), ccalc::tensor(in.v(), in.v())), 1.0 / std::sqrt(2.0));
                       const std::vector<logical::LogicalBasis> bases{in, out_basis};
                       const auto proj = logical::project_to_qubits(ccalc::canonicalize(ccalc::apply_loss(ghz, 1, e)), bases);

                       const int n = fockref::required_truncation(a);
                       const std::vector<int> dims{n + 1, n + 1};
                       const auto rho = fockref::apply_channel(
                           fockref::pure_density(dims, fockref::from_superposition(ghz, dims)), 1, fockref::damping_kraus(e, n));
                       std::vector<Eigen::VectorXcd> vecs;
                       for (int r = 0; r < 4; ++r) {
                         const auto s = ccalc::tensor(r & 2 ? in.v() : in.u(), r & 1 ? out_basis.v() : out_basis.u());
                         vecs.push_back(fockref::from_superposition(s, dims));
                       }
                       for (int r = 0; r < 4; ++r) {
                         for (int c = 0; c < 4; ++c) {
                           err = worse(err, std::abs(vecs[r].dot(rho.rho * vecs[c]) - proj.matrix.entries(r, c)));
                         }
                       }
                     }
                   }
                   return Outcome{err, "two-mode GHZ with loss on mode 1, alpha in {0.5, 1, 1.5}, eta in {0.2, 0.6, 0.9}"};
                 }});

  out.push_back({"kraus_completeness", 1e-12, [](Rng&) {
                   double err = 0.0;
                   for (double e : {0.0, 0.1, 0.5, 0.9, 1.0}) {
                     const auto k = fockref::damping_kraus(e, 30);
                     err = worse(err, (fockref::completeness(k) - Eigen::MatrixXd::Identity(31, 31)).cwiseAbs().maxCoeff());
                   }
                   return Outcome{err, "31 levels, eta in {0, 0.1, 0.5, 0.9, 1}"};
                 }});

  out.push_back({"beamsplitter_unitarity", 1e-12, [](Rng& rng) {
                   double err = 0.0;
                   for (int i = 0; i < 50; ++i) {
                     const auto s = random_state(rng, 3, 10);
                     const auto t = random_state(rng, 3, 10);
                     const double e = rng.uniform();
                     err = worse(err, std::abs(ccalc::state_inner(ccalc::beamsplitter(s, 0, 2, e), ccalc::beamsplitter(t, 0, 2, e)) -
                                               ccalc::state_inner(s, t)));
                   }
                   return Outcome{err, "50 random pairs of 10-term three-mode states"};
                 }});

  out.push_back({"loss_composition", 1e-10, [](Rng& rng) {
                   double err = 0.0;
                   for (int i = 0; i < 20; ++i) {
                     const auto d = ccalc::density_from_pure(random_state(rng, 2, 4));
                     const double e1 = rng.uniform(0.05, 1.0);
                     const double e2 = rng.uniform(0.05, 1.0);
                     const auto twice = ccalc::canonicalize(ccalc::apply_loss(ccalc::apply_loss(d, 1, e1), 1, e2));
                     const auto once = ccalc::canonicalize(ccalc::apply_loss(d, 1, e1 * e2));
                     err = worse(err, dyad_distance(twice, once));
                     err = worse(err, std::abs(ccalc::trace(twice) - ccalc::trace(d)));
                   }
                   return Outcome{err, "20 random two-mode states, loss eta1 then eta2 vs eta1 * eta2"};
                 }});

  out.push_back({"concurrence_m_lossless", 1e-12, [](Rng&) {
                   double err = 0.0;
                   for (int m : {2, 5, 8}) {
                     for (double a : figures::linspace(0.1, 3.0, 30)) {
                       err = worse(err, std::abs(formulas::concurrence_m(a, 1.0, m, Parity::odd) - 1.0));
                     }
                   }
                   return Outcome{err, "odd, eta = 1, m in {2, 5, 8}, alpha in [0.1, 3] x 30"};
                 }});

  out.push_back({"concurrence_m_small_alpha", 1e-4, [](Rng&) {
                   double err = 0.0;
                   for (int m : {2, 5, 8}) {
                     err = worse(err, std::abs(formulas::concurrence_m(1e-4, 0.9, m, Parity::even)));
                     err = worse(err, std::abs(formulas::concurrence_m(1e-4, 0.9, m, Parity::odd) - 2.0 * std::pow(0.9, 1.5) / 1.9));
                   }
                   return Outcome{err, "alpha = 1e-4, eta = 0.9, m in {2, 5, 8}"};
                 }});

  out.push_back({"vanishing_points_agree", 2.0, [](Rng&) {
                   // error counted in grid steps; passing means at most one step apart
                   double err = 0.0;
                   const auto grid = figures::linspace(0.0, 10.0, 1001);
                   for (int m : {2, 5, 8}) {
                     for (double e : {0.1, 0.5, 0.9}) {
                       std::vector<double> plus, minus;
                       for (double a : grid) {
                         plus.push_back(formulas::concurrence_m(a, e, m, Parity::even));
                         minus.push_back(formulas::concurrence_m(a, e, m, Parity::odd));
                       }
                       const auto p = sweep::first_drop_below(grid, plus, 1e-3);
                       const auto q = sweep::first_drop_below(grid, minus, 1e-3);
                       if (!p || !q) return Outcome{std::numeric_limits<double>::infinity(), "no crossing found"};
                       err = worse(err, std::round(std::abs(*p - *q) / 0.01));
                     }
                   }
                   return Outcome{err, "grid steps between C+ and C- drops below 1e-3, alpha in [0, 10] x 1001, m in {2, 5, 8}, eta in {0.1, 0.5, 0.9}"};
                 }});

  out.push_back({"value_ranges", 1e-12, [](Rng&) {
                   double err = 0.0;
                   for (double a : figures::linspace(0.01, 4.0, 50)) {
                     for (double e : figures::linspace(0.0, 1.0, 11)) {
                       const double p = formulas::phase_flip_prob(a, e);
                       err = worse(err, std::max({0.0, -p, p - 0.5}));
                       for (int m : {1, 2, 5, 8}) {
                         for (Parity par : {Parity::even, Parity::odd}) {
                           const double c = formulas::concurrence_m(a, e, m, par);
                           err = worse(err, std::max({0.0, -c, c - 1.0}));
                         }
                       }
                     }
                     for (double theta : figures::linspace(0.0, 2.0 * kPi, 19)) {
                       const double c = formulas::concurrence_pure(a, theta);
                       err = worse(err, std::max({0.0, -c, c - 1.0}));
                     }
                   }
                   return Outcome{err, "range violations of probabilities [0, 1/2] and concurrences [0, 1]"};
                 }});

  return out;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Report run(const Options& options) {
  Report report;
  report.seed = options.seed;
  std::uint64_t index = 0;
  for (const auto& check : checks()) {
    // each check draws from its own stream so adding checks keeps others stable
    Rng rng(options.seed * 1000003ULL + index++);
    CheckResult r;
    r.name = check.name;
    r.tolerance = options.tolerance.value_or(check.tolerance);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto outcome = check.body(rng);
      r.max_error = outcome.max_error;
      r.grid = outcome.grid;
    } catch (const std::exception& e) {
      r.max_error = std::numeric_limits<double>::infinity();
      r.grid = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.passed = std::isfinite(r.max_error) && r.max_error < r.tolerance;
    report.checks.push_back(std::move(r));
  }
  return report;
}

nlohmann::json to_json(const Report& report, bool include_timing) {
  nlohmann::json doc;
  doc["seed"] = report.seed;
  doc["status"] = report.passed() ? "pass" : "fail";
  auto& list = doc["checks"] = nlohmann::json::array();
  double total = 0.0;
  for (const auto& c : report.checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["status"] = c.passed ? "pass" : "fail";
    if (std::isfinite(c.max_error)) {
      j["max_error"] = c.max_error;
    } else {
      j["max_error"] = std::isnan(c.max_error) ? "nan" : "inf";
    }
    j["tolerance"] = c.tolerance;
    j["grid"] = c.grid;
    if (include_timing) j["wall_time_s"] = c.seconds;
    total += c.seconds;
    list.push_back(std::move(j));
  }
  if (include_timing) doc["wall_time_s"] = total;
  return doc;
}

}  // namespace catloss::validation
