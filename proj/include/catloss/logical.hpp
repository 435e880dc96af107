#pragma once

// Logical-qubit view of coherent superpositions.
//
// Each block of modes carrying the cat pair {|a>, |-a>} is mapped onto the
// orthonormal basis
//     |u> = (|a> + |-a>) / (2 lambda),   |v> = (|a> - |-a>) / (2 mu),
// with lambda = sqrt((1 + e^{-2|a|^2}) / 2), mu = sqrt((1 - e^{-2|a|^2}) / 2),
// so that |a> = lambda |u> + mu |v> and |-a> = lambda |u> - mu |v>.
// A block is usually one mode; several modes may share one logical qubit when
// their coherent amplitudes flip sign together.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "catloss/ccalc.hpp"

namespace catloss::logical {

using ccalc::Amplitude;
using ccalc::AmplitudeList;
using ccalc::Complex;
using ccalc::SuperpositionDensity;
using ccalc::SuperpositionState;

/// Eigenvalues below -kPsdTolerance make a matrix non-PSD.
inline constexpr double kPsdTolerance = 1e-9;
/// Reduced states with a third eigenvalue above this are not qubit-like.
inline constexpr double kRankTolerance = 1e-9;
/// mixture_weights rejects component sets with a worse Gram condition number.
inline constexpr double kMaxGramCondition = 1e12;

class LogicalBasis {
 public:
  explicit LogicalBasis(Amplitude alpha);
  explicit LogicalBasis(AmplitudeList block);

  const AmplitudeList& amplitudes() const { return amps_; }
  std::size_t mode_count() const { return amps_.size(); }
  /// sum_k |a_k|^2 over the block
  double intensity() const { return intensity_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  SuperpositionState u() const;
  /// Throws std::domain_error when mu == 0 (vanishing amplitude).
  SuperpositionState v() const;

  /// {<u|k>, <v|k>} for a coherent product |k> on this block. The <v|k>
  /// entry is zero when mu == 0.
  std::array<Complex, 2> coefficients(std::span<const Amplitude> ket) const;

 private:
  AmplitudeList amps_;
  double intensity_;
  double lambda_;
  double mu_;
};

LogicalBasis make_basis(Amplitude alpha);

/// Density matrix on 2^n logical levels. Index bit (n-1-k) selects u (0) or v (1)
/// on block k, so block 0 is the most significant qubit.
struct QubitMatrix {
  Eigen::MatrixXcd entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  Complex trace() const { return entries.trace(); }
};

struct Projection {
  QubitMatrix matrix;
  /// Tr d - Tr(matrix): weight of d outside the logical span.
  double residual;
};

/// Exact matrix elements <B_r| d |B_c> for basis products B drawn from `bases`.
/// The block sizes of `bases` must add up to d.mode_count().
Projection project_to_qubits(const SuperpositionDensity& d, std::span<const LogicalBasis> bases);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-10);
/// Ascending eigenvalues of the Hermitian part of m.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);
bool is_psd(const Eigen::MatrixXcd& m, double tol = kPsdTolerance);

/// Two-qubit concurrence from the spin-flipped spectrum.
/// Throws std::domain_error for non-Hermitian or non-PSD input.
double wootters_concurrence(const Eigen::Matrix4cd& rho);

/// Nonzero entries of a two-qubit X state
///   [[a, 0, 0, f], [0, b, e, 0], [0, e*, c, 0], [f*, 0, 0, d]]
struct XStateElements {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  Complex e{0.0, 0.0};
  Complex f{0.0, 0.0};
};

Eigen::Matrix4cd assemble(const XStateElements& x);

/// Reads the X pattern of a larger matrix from rows {r0, r1, r2, r3}:
/// a = m(r0,r0), b = m(r1,r1), c = m(r2,r2), d = m(r3,r3), e = m(r1,r2), f = m(r0,r3).
XStateElements extract_x_elements(const Eigen::MatrixXcd& m, std::array<std::size_t, 4> rows);

/// 2 max(0, |e| - sqrt(a d), |f| - sqrt(b c))
double xstate_concurrence(const XStateElements& x);

/// Nonzero spectrum (descending) of a coherent density, computed from the Gram
/// matrix of its distinct coherent products.
std::vector<double> density_spectrum(const SuperpositionDensity& d);

/// sqrt(2 (1 - Tr rho_A^2)) for a normalized pure state whose reduced state on
/// `side_a` has rank at most two.
double pure_bipartite_concurrence(const SuperpositionState& s, std::span<const std::size_t> side_a);

struct MixtureFit {
  std::vector<double> weights;
  /// Frobenius norm of d - sum_k w_k |phi_k><phi_k| in the qubit representation.
  double residual;
};

/// Least-squares weights of `components` (as projectors) reproducing d, with
/// everything evaluated in the logical representation given by `bases`.
MixtureFit mixture_weights(const SuperpositionDensity& d,
                           std::span<const SuperpositionState> components,
                           std::span<const LogicalBasis> bases);

}  // namespace catloss::logical
