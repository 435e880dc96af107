#include "catloss/ccalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace catloss::ccalc {

namespace {

bool is_finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

void check_amplitudes(const AmplitudeList& amps, std::size_t mode_count, const char* what) {
  if (amps.size() != mode_count) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(mode_count) +
                                " amplitudes, got " + std::to_string(amps.size()));
  }
  for (const auto& a : amps) {
    if (!is_finite(a)) throw std::invalid_argument(std::string(what) + ": non-finite amplitude");
  }
}

void check_coeff(Complex c, const char* what) {
  if (!is_finite(c)) throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("transmissivity must lie in [0, 1], got " + std::to_string(eta));
  }
}

void check_mode_pair(std::size_t i, std::size_t j, std::size_t mode_count) {
  if (i == j) throw std::invalid_argument("beamsplitter modes must differ");
  if (i >= mode_count || j >= mode_count) {
    throw std::out_of_range("beamsplitter mode index out of range");
  }
}

void mix_pair(AmplitudeList& amps, std::size_t i, std::size_t j, double t, double r) {
  const Amplitude ai = amps[i];
  const Amplitude aj = amps[j];
  amps[i] = t * ai + r * aj;
  amps[j] = t * aj - r * ai;
}

}  // namespace

SuperpositionState::SuperpositionState(std::size_t mode_count) : mode_count_(mode_count) {
  if (mode_count == 0) throw std::invalid_argument("state needs at least one mode");
}

SuperpositionState::SuperpositionState(std::size_t mode_count, std::vector<CoherentTerm> terms)
    : SuperpositionState(mode_count) {
  terms_.reserve(terms.size());
  for (auto& t : terms) add_term(t.coeff, std::move(t.amps));
}

void SuperpositionState::add_term(Complex coeff, AmplitudeList amps) {
  check_coeff(coeff, "add_term");
  check_amplitudes(amps, mode_count_, "add_term");
  terms_.push_back({coeff, std::move(amps)});
}

SuperpositionDensity::SuperpositionDensity(std::size_t mode_count) : mode_count_(mode_count) {
  if (mode_count == 0) throw std::invalid_argument("density needs at least one mode");
}

SuperpositionDensity::SuperpositionDensity(std::size_t mode_count, std::vector<Dyad> dyads)
    : SuperpositionDensity(mode_count) {
  dyads_.reserve(dyads.size());
  for (auto& d : dyads) add_dyad(d.coeff, std::move(d.ket), std::move(d.bra));
}

void SuperpositionDensity::add_dyad(Complex coeff, AmplitudeList ket, AmplitudeList bra) {
  check_coeff(coeff, "add_dyad");
  check_amplitudes(ket, mode_count_, "add_dyad ket");
  check_amplitudes(bra, mode_count_, "add_dyad bra");
  dyads_.push_back({coeff, std::move(ket), std::move(bra)});
}

Complex coherent_overlap(Amplitude a, Amplitude b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

Complex product_overlap(std::span<const Amplitude> a, std::span<const Amplitude> b) {
  if (a.size() != b.size()) throw std::invalid_argument("product_overlap: mode-count mismatch");
  // Summing exponents first keeps tiny per-mode factors from underflowing early.
  Complex exponent{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) {
    exponent += -0.5 * std::norm(a[k]) - 0.5 * std::norm(b[k]) + std::conj(a[k]) * b[k];
  }
  return std::exp(exponent);
}

Complex state_inner(const SuperpositionState& s1, const SuperpositionState& s2) {
  if (s1.mode_count() != s2.mode_count()) {
    throw std::invalid_argument("state_inner: mode-count mismatch");
  }
  Complex acc{0.0, 0.0};
  for (const auto& t1 : s1.terms()) {
    for (const auto& t2 : s2.terms()) {
      acc += std::conj(t1.coeff) * t2.coeff * product_overlap(t1.amps, t2.amps);
    }
  }
  return acc;
}

double norm_squared(const SuperpositionState& s) { return state_inner(s, s).real(); }

SuperpositionState normalize(const SuperpositionState& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > kMinNormSquared)) {
    throw std::domain_error("normalize: state has (near) zero norm");
  }
  return scaled(s, 1.0 / std::sqrt(n2));
}

SuperpositionState scaled(const SuperpositionState& s, Complex factor) {
  SuperpositionState out(s.mode_count());
  for (const auto& t : s.terms()) out.add_term(t.coeff * factor, t.amps);
  return out;
}

SuperpositionState sum(const SuperpositionState& s1, const SuperpositionState& s2) {
  if (s1.mode_count() != s2.mode_count()) throw std::invalid_argument("sum: mode-count mismatch");
  SuperpositionState out(s1.mode_count());
  for (const auto& t : s1.terms()) out.add_term(t.coeff, t.amps);
  for (const auto& t : s2.terms()) out.add_term(t.coeff, t.amps);
  return out;
}

SuperpositionState tensor(const SuperpositionState& s1, const SuperpositionState& s2) {
  SuperpositionState out(s1.mode_count() + s2.mode_count());
  for (const auto& t1 : s1.terms()) {
    for (const auto& t2 : s2.terms()) {
      AmplitudeList amps = t1.amps;
      amps.insert(amps.end(), t2.amps.begin(), t2.amps.end());
      out.add_term(t1.coeff * t2.coeff, std::move(amps));
    }
  }
  return out;
}

SuperpositionState beamsplitter(const SuperpositionState& s, std::size_t mode_i,
                                std::size_t mode_j, double eta) {
  check_eta(eta);
  check_mode_pair(mode_i, mode_j, s.mode_count());
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  SuperpositionState out(s.mode_count());
  for (const auto& term : s.terms()) {
    AmplitudeList amps = term.amps;
    mix_pair(amps, mode_i, mode_j, t, r);
    out.add_term(term.coeff, std::move(amps));
  }
  return out;
}

SuperpositionDensity beamsplitter(const SuperpositionDensity& d, std::size_t mode_i,
                                  std::size_t mode_j, double eta) {
  check_eta(eta);
  check_mode_pair(mode_i, mode_j, d.mode_count());
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  SuperpositionDensity out(d.mode_count());
  for (const auto& dy : d.dyads()) {
    AmplitudeList ket = dy.ket;
    AmplitudeList bra = dy.bra;
    mix_pair(ket, mode_i, mode_j, t, r);
    mix_pair(bra, mode_i, mode_j, t, r);
    out.add_dyad(dy.coeff, std::move(ket), std::move(bra));
  }
  return out;
}

SuperpositionState attach_vacuum(const SuperpositionState& s, std::size_t count) {
  SuperpositionState out(s.mode_count() + count);
  for (const auto& t : s.terms()) {
    AmplitudeList amps = t.amps;
    amps.resize(amps.size() + count, Amplitude{0.0, 0.0});
    out.add_term(t.coeff, std::move(amps));
  }
  return out;
}

SuperpositionDensity attach_vacuum(const SuperpositionDensity& d, std::size_t count) {
  SuperpositionDensity out(d.mode_count() + count);
  for (const auto& dy : d.dyads()) {
    AmplitudeList ket = dy.ket;
    AmplitudeList bra = dy.bra;
    ket.resize(ket.size() + count, Amplitude{0.0, 0.0});
    bra.resize(bra.size() + count, Amplitude{0.0, 0.0});
    out.add_dyad(dy.coeff, std::move(ket), std::move(bra));
  }
  return out;
}

SuperpositionDensity density_from_pure(const SuperpositionState& s) {
  SuperpositionDensity out(s.mode_count());
  for (const auto& k : s.terms()) {
    for (const auto& l : s.terms()) {
      out.add_dyad(k.coeff * std::conj(l.coeff), k.amps, l.amps);
    }
  }
  return out;
}

Complex trace(const SuperpositionDensity& d) {
  Complex acc{0.0, 0.0};
  for (const auto& dy : d.dyads()) acc += dy.coeff * product_overlap(dy.bra, dy.ket);
  return acc;
}

Complex purity(const SuperpositionDensity& d) {
  // Tr(|k_i><b_i| |k_j><b_j|) = <b_i|k_j> <b_j|k_i>
  Complex acc{0.0, 0.0};
  const auto& ds = d.dyads();
  for (const auto& di : ds) {
    for (const auto& dj : ds) {
      acc += di.coeff * dj.coeff * product_overlap(di.bra, dj.ket) * product_overlap(dj.bra, di.ket);
    }
  }
  return acc;
}

Complex matrix_element(const SuperpositionDensity& d, const SuperpositionState& x,
                       const SuperpositionState& y) {
  if (x.mode_count() != d.mode_count() || y.mode_count() != d.mode_count()) {
    throw std::invalid_argument("matrix_element: mode-count mismatch");
  }
  Complex acc{0.0, 0.0};
  for (const auto& dy : d.dyads()) {
    Complex left{0.0, 0.0};
    for (const auto& tx : x.terms()) left += std::conj(tx.coeff) * product_overlap(tx.amps, dy.ket);
    Complex right{0.0, 0.0};
    for (const auto& ty : y.terms()) right += ty.coeff * product_overlap(dy.bra, ty.amps);
    acc += dy.coeff * left * right;
  }
  return acc;
}

SuperpositionDensity partial_trace(const SuperpositionDensity& d,
                                   std::span<const std::size_t> traced_modes) {
  const std::size_t n = d.mode_count();
  std::vector<bool> traced(n, false);
  for (auto k : traced_modes) {
    if (k >= n) throw std::out_of_range("partial_trace: mode index out of range");
    if (traced[k]) throw std::invalid_argument("partial_trace: duplicate mode index");
    traced[k] = true;
  }
  if (traced_modes.empty()) throw std::invalid_argument("partial_trace: no modes to trace");
  if (traced_modes.size() == n) {
    throw std::invalid_argument("partial_trace: cannot trace every mode, use trace()");
  }

  SuperpositionDensity out(n - traced_modes.size());
  for (const auto& dy : d.dyads()) {
    AmplitudeList ket;
    AmplitudeList bra;
    AmplitudeList env_ket;
    AmplitudeList env_bra;
    for (std::size_t k = 0; k < n; ++k) {
      if (traced[k]) {
        env_ket.push_back(dy.ket[k]);
        env_bra.push_back(dy.bra[k]);
      } else {
        ket.push_back(dy.ket[k]);
        bra.push_back(dy.bra[k]);
      }
    }
    out.add_dyad(dy.coeff * product_overlap(env_bra, env_ket), std::move(ket), std::move(bra));
  }
  return out;
}

SuperpositionDensity apply_loss(const SuperpositionDensity& d, std::size_t mode, double eta) {
  check_eta(eta);
  if (mode >= d.mode_count()) throw std::out_of_range("apply_loss: mode index out of range");
  const std::size_t env = d.mode_count();
  const auto coupled = beamsplitter(attach_vacuum(d, 1), mode, env, eta);
  const std::size_t traced[] = {env};
  return partial_trace(coupled, traced);
}

SuperpositionDensity apply_loss(const SuperpositionState& s, std::size_t mode, double eta) {
  return apply_loss(density_from_pure(s), mode, eta);
}

bool amplitudes_close(std::span<const Amplitude> a, std::span<const Amplitude> b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return false;
  }
  return true;
}

SuperpositionDensity canonicalize(const SuperpositionDensity& d, double tol) {
  if (tol < 0.0) throw std::invalid_argument("canonicalize: tolerance must be non-negative");
  std::vector<Dyad> merged;
  merged.reserve(d.dyads().size());
  for (const auto& dy : d.dyads()) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Dyad& m) {
      return amplitudes_close(m.ket, dy.ket) && amplitudes_close(m.bra, dy.bra);
    });
    if (it == merged.end()) {
      merged.push_back(dy);
    } else {
      it->coeff += dy.coeff;
    }
  }
  SuperpositionDensity out(d.mode_count());
  for (auto& m : merged) {
    if (std::abs(m.coeff) >= tol && m.coeff != Complex{0.0, 0.0}) {
      out.add_dyad(m.coeff, std::move(m.ket), std::move(m.bra));
    }
  }
  return out;
}

bool is_hermitian(const SuperpositionDensity& d, double tol) {
  const auto c = canonicalize(d, 0.0);
  const auto& ds = c.dyads();
  for (const auto& dy : ds) {
    const bool paired = std::any_of(ds.begin(), ds.end(), [&](const Dyad& other) {
      return amplitudes_close(other.ket, dy.bra) && amplitudes_close(other.bra, dy.ket) &&
             std::abs(other.coeff - std::conj(dy.coeff)) <= tol * std::max(1.0, std::abs(dy.coeff));
    });
    if (!paired) return false;
  }
  return true;
}

}  // namespace catloss::ccalc
