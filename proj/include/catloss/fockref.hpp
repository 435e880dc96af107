#pragma once

// Truncated Fock-space reference backend. Used only to cross-check the exact
// coherent-state algebra; it shares no code path with ccalc beyond the
// conversion helper that expands coherent dyads into Fock vectors.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "catloss/ccalc.hpp"

namespace catloss::fockref {

using Complex = std::complex<double>;

/// Product-space density matrices may hold at most this many entries.
inline constexpr double kMaxMatrixEntries = 1e7;

/// ceil(|a|^2 + 6|a| + 10)
int required_truncation(Complex alpha);

struct FockVector {
  int n_max = 0;
  Eigen::VectorXcd coeffs;
};

/// e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..n_max. Throws std::invalid_argument
/// when n_max < required_truncation(alpha).
FockVector coherent_fock(Complex alpha, int n_max);

/// Density matrix over the product Fock basis; mode 0 is the most significant index.
struct FockDensity {
  std::vector<int> dims;
  Eigen::MatrixXcd rho;

  std::size_t total_dim() const;
  Complex trace() const { return rho.trace(); }
};

FockDensity make_density(std::vector<int> dims);
/// |psi><psi| for a product-space vector of matching dimension.
FockDensity pure_density(std::vector<int> dims, const Eigen::VectorXcd& psi);

/// Kronecker product of per-mode vectors (mode 0 first).
Eigen::VectorXcd product_vector(std::span<const Eigen::VectorXcd> factors);

struct KrausSet {
  double eta = 1.0;
  std::vector<Eigen::MatrixXd> operators;
};

/// Photon-loss Kraus operators on n_max + 1 levels:
///   <n-k| K_k |n> = sqrt(C(n, k)) eta^{(n-k)/2} (1 - eta)^{k/2}
KrausSet damping_kraus(double eta, int n_max);

/// sum_k K_k^dagger K_k, which should be the identity.
Eigen::MatrixXd completeness(const KrausSet& kraus);

/// sum_k (1 (x) K_k (x) 1) rho (1 (x) K_k (x) 1)^dagger on one mode.
FockDensity apply_channel(const FockDensity& rho, std::size_t mode, const KrausSet& kraus);

FockDensity partial_trace_fock(const FockDensity& rho, std::span<const std::size_t> traced_modes);

/// Expands a coherent-superposition density in the truncated Fock basis.
FockDensity from_superposition(const ccalc::SuperpositionDensity& d, std::vector<int> dims);

/// Expands a coherent-superposition state in the truncated Fock basis.
Eigen::VectorXcd from_superposition(const ccalc::SuperpositionState& s, std::span<const int> dims);

/// <psi| rho |psi>
Complex expectation(const FockDensity& rho, const Eigen::VectorXcd& psi);

}  // namespace catloss::fockref
