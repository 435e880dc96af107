#pragma once

// Exact algebra of finite superpositions of multimode coherent states.
//
// A pure state is a weighted list of coherent product kets
//     sum_t c_t |a_t0, a_t1, ..., a_t(M-1)>
// and a density operator is a weighted list of ket-bra dyads of such products.
// Every quantity (norms, traces, matrix elements) is evaluated in closed form
// through the coherent-state overlap, so nothing is ever truncated.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace catloss::ccalc {

using Complex = std::complex<double>;
using Amplitude = std::complex<double>;
using AmplitudeList = std::vector<Amplitude>;

/// Absolute tolerance used when two amplitudes are considered equal.
inline constexpr double kAmplitudeTolerance = 1e-12;
/// Dyads whose |coeff| falls below this are pruned by canonicalize().
inline constexpr double kPruneTolerance = 1e-14;
/// normalize() refuses states with squared norm at or below this.
inline constexpr double kMinNormSquared = 1e-30;

struct CoherentTerm {
  Complex coeff;
  AmplitudeList amps;
};

class SuperpositionState {
 public:
  explicit SuperpositionState(std::size_t mode_count);
  SuperpositionState(std::size_t mode_count, std::vector<CoherentTerm> terms);

  /// Appends c |amps>. Throws std::invalid_argument on a length mismatch or
  /// a non-finite value.
  void add_term(Complex coeff, AmplitudeList amps);

  std::size_t mode_count() const { return mode_count_; }
  const std::vector<CoherentTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::size_t mode_count_;
  std::vector<CoherentTerm> terms_;
};

/// coeff |ket><bra|
struct Dyad {
  Complex coeff;
  AmplitudeList ket;
  AmplitudeList bra;
};

class SuperpositionDensity {
 public:
  explicit SuperpositionDensity(std::size_t mode_count);
  SuperpositionDensity(std::size_t mode_count, std::vector<Dyad> dyads);

  void add_dyad(Complex coeff, AmplitudeList ket, AmplitudeList bra);

  std::size_t mode_count() const { return mode_count_; }
  const std::vector<Dyad>& dyads() const { return dyads_; }

 private:
  std::size_t mode_count_;
  std::vector<Dyad> dyads_;
};

/// <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)
Complex coherent_overlap(Amplitude a, Amplitude b);

/// Product of per-mode overlaps <a_0..a_n|b_0..b_n>.
Complex product_overlap(std::span<const Amplitude> a, std::span<const Amplitude> b);

Complex state_inner(const SuperpositionState& s1, const SuperpositionState& s2);
double norm_squared(const SuperpositionState& s);
SuperpositionState normalize(const SuperpositionState& s);

SuperpositionState scaled(const SuperpositionState& s, Complex factor);
/// s1 + s2 as a concatenated term list.
SuperpositionState sum(const SuperpositionState& s1, const SuperpositionState& s2);
/// s1 (x) s2; modes of s2 follow those of s1.
SuperpositionState tensor(const SuperpositionState& s1, const SuperpositionState& s2);

/// Two-mode beamsplitter with transmissivity eta acting on modes (i, j):
///   (a_i, a_j) -> (sqrt(eta) a_i + sqrt(1-eta) a_j, sqrt(eta) a_j - sqrt(1-eta) a_i)
SuperpositionState beamsplitter(const SuperpositionState& s, std::size_t mode_i,
                                std::size_t mode_j, double eta);
/// U d U^dagger for the same beamsplitter U.
SuperpositionDensity beamsplitter(const SuperpositionDensity& d, std::size_t mode_i,
                                  std::size_t mode_j, double eta);

SuperpositionState attach_vacuum(const SuperpositionState& s, std::size_t count);
SuperpositionDensity attach_vacuum(const SuperpositionDensity& d, std::size_t count);

SuperpositionDensity density_from_pure(const SuperpositionState& s);

/// Tr d = sum c <bra|ket>.
Complex trace(const SuperpositionDensity& d);
/// Tr d^2, evaluated exactly over dyad pairs.
Complex purity(const SuperpositionDensity& d);
/// <x| d |y>
Complex matrix_element(const SuperpositionDensity& d, const SuperpositionState& x,
                       const SuperpositionState& y);

/// Traces out `traced_modes`, which must be a nonempty proper subset of modes.
SuperpositionDensity partial_trace(const SuperpositionDensity& d,
                                   std::span<const std::size_t> traced_modes);

/// Photon loss on one mode: attach a vacuum environment, couple it through a
/// beamsplitter of transmissivity eta, and trace the environment out.
SuperpositionDensity apply_loss(const SuperpositionDensity& d, std::size_t mode, double eta);
SuperpositionDensity apply_loss(const SuperpositionState& s, std::size_t mode, double eta);

/// Merges dyads whose (ket, bra) signatures agree within kAmplitudeTolerance and
/// drops those with |coeff| < tol. Order of first appearance is kept.
SuperpositionDensity canonicalize(const SuperpositionDensity& d, double tol = kPruneTolerance);

/// True if every dyad (c, k, b) has a partner (c*, b, k) after canonicalization.
bool is_hermitian(const SuperpositionDensity& d, double tol = 1e-12);

bool amplitudes_close(std::span<const Amplitude> a, std::span<const Amplitude> b,
                      double tol = kAmplitudeTolerance);

}  // namespace catloss::ccalc
