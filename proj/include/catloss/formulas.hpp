#pragma once

// Closed-form results for entangled coherent states under photon loss, plus
// the first-principles pipelines (ccalc + logical) that reproduce them.
//
// Throughout, `alpha` is the field intensity |alpha| (a non-negative real),
// `eta` the transmissivity of each loss channel, and `m` the mode-count
// parameter of the multimode family
//     |Psi_m^{+-}> ~ |2^{(m-1)/2} a, ..., 2^{1/2} a, a, a> +- |-2^{(m-1)/2} a, ..., -a, -a>,
// which has m + 1 modes.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "catloss/ccalc.hpp"
#include "catloss/logical.hpp"

namespace catloss::formulas {

using ccalc::AmplitudeList;
using ccalc::SuperpositionDensity;
using ccalc::SuperpositionState;

/// even <-> relative phase 0 (C_+), odd <-> relative phase pi (C_-).
enum class Parity { even, odd };
/// Loss on one lossy mode (the last) or on both non-emitter modes.
enum class Sides { one, two };

double parity_phase(Parity p);
Parity parse_parity(std::string_view text);
Sides parse_sides(std::string_view text);
const char* to_string(Parity p);
const char* to_string(Sides s);

struct ChannelParams {
  double alpha = 1.0;
  double eta = 1.0;
  double theta = 0.0;
  int m = 2;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// (1 - e^{-8a^2}) / (1 + e^{-8a^2} cos theta). Throws std::domain_error at the
/// indeterminate point a = 0, cos theta = -1.
double concurrence_pure(double alpha, double theta);

/// Phase-flip probability of the three-mode state with loss on its two
/// amplitude-alpha modes. Throws std::domain_error at alpha = 0.
double phase_flip_prob(double alpha, double eta);
/// alpha -> 0+ limit of phase_flip_prob and phase_flip_prob_m: (1 - eta) / 2.
double phase_flip_prob_limit(double eta);

/// Multimode phase-flip probability, m >= 1. Equal to phase_flip_prob at m = 3.
double phase_flip_prob_m(double alpha, double eta, int m);

/// Unflipped weight P_s as written for the one-sided GHZ channel matrix.
/// Algebraically 1 - phase_flip_prob(alpha, eta).
double ghz_survival_prob(double alpha, double eta);

/// Multimode concurrence C_+ (even) or C_- (odd). alpha = 0 returns the
/// documented limits (0 for even, 2 eta^{3/2} / (1 + eta) for odd).
double concurrence_m(double alpha, double eta, int m, Parity parity);
double concurrence_m_limit(double eta, Parity parity);

/// Normalized |a> + phase |-a> over the given amplitude list.
SuperpositionState cat_state(const AmplitudeList& amps, ccalc::Complex relative_phase);
SuperpositionState cat_state(const AmplitudeList& amps, Parity parity);

/// Amplitude ladder (2^{(m-1)/2} a, ..., 2^{1/2} a, a, a) with m + 1 entries.
AmplitudeList mmode_amplitudes(double alpha, int m);
/// Normalized multimode state. Throws std::domain_error for odd parity at alpha = 0.
SuperpositionState mmode_state(double alpha, int m, Parity parity);
/// The three-mode state (sqrt(2) a, a, a) with general relative phase theta.
SuperpositionState three_mode_state(double alpha, double theta);

/// A cat state after loss on some of its modes, with the logical bases that
/// keep it exactly representable: mode 0 alone and all remaining modes as one
/// collective block, both at the damped amplitudes.
struct DampedCat {
  SuperpositionDensity density;
  AmplitudeList damped_amps;
  std::vector<logical::LogicalBasis> bases;
  /// Same-parity and opposite-parity cat states at the damped amplitudes.
  SuperpositionState unflipped;
  SuperpositionState flipped;
};

DampedCat damp_cat(const AmplitudeList& amps, Parity parity, std::span<const std::size_t> lossy_modes,
                   double eta);

/// Weights (unflipped, flipped) of the damped odd multimode state obtained from
/// the full beamsplitter + trace pipeline. The m-mode state (m >= 2) loses photons
/// on every mode except mode 0; m = 3 is the three-mode state with loss on modes 1, 2.
logical::MixtureFit phase_flip_pipeline(double alpha, double eta, int m);

struct GhzChannel {
  logical::QubitMatrix matrix;
  double residual;
};

/// (|uuu> + |vvv>) / sqrt(2) with every basis at amplitude alpha, sent through
/// loss on mode 2 (one) or modes 1 and 2 (two), projected on the damped bases.
GhzChannel ghz_channel(double alpha, double eta, Sides sides);

/// Six nonzero entries of the one-sided GHZ channel matrix from the pipeline:
/// rows |uuu'>, |uuv'>, |vvu'>, |vvv'>.
logical::XStateElements ghz_one_sided_elements(double alpha, double eta);
/// The same entries in closed form.
logical::XStateElements ghz_one_sided_closed_form(double alpha, double eta);

/// X-state elements of the three-mode state of the given parity after one- or
/// two-sided loss, in the (mode 0 | modes 1,2) logical representation.
logical::XStateElements damped_cat_elements(double alpha, double eta, Parity parity, Sides sides);
double direct_damped_concurrence(double alpha, double eta, Parity parity, Sides sides);

/// C_X[GHZ under one-sided loss] * concurrence_pure(alpha, theta).
double damped_concurrence_bound(double alpha, double eta, double theta);

}  // namespace catloss::formulas
