#include <cmath>
#include <complex>
#include <vector>

#include "catloss/ccalc.hpp"
#include "catloss/fockref.hpp"
#include "catloss/formulas.hpp"
#include "catloss/logical.hpp"
#include "doctest.h"

using namespace catloss;
using ccalc::Amplitude;
using ccalc::Complex;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Basis product |B_r> of u/v vectors in the Fock representation.
Eigen::VectorXcd basis_product(const std::vector<logical::LogicalBasis>& bases, std::size_t index,
                               const std::vector<int>& dims) {
  std::vector<Eigen::VectorXcd> factors;
  const std::size_t n = bases.size();
  for (std::size_t k = 0; k < n; ++k) {
    const bool is_v = (index >> (n - 1 - k)) & 1U;
    const auto s = is_v ? bases[k].v() : bases[k].u();
    const int d[] = {dims[k]};
    factors.push_back(fockref::from_superposition(s, d));
  }
  return fockref::product_vector(factors);
}

}  // namespace

TEST_CASE("coherent Fock vectors are normalized up to the tail bound") {
  for (double r : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    const Complex a = std::polar(r, 0.7);
    const auto v = fockref::coherent_fock(a, fockref::required_truncation(a));
    CHECK(std::abs(v.coeffs.squaredNorm() - 1.0) < 1e-12);
  }
  CHECK(fockref::required_truncation(1.0) == 17);
  CHECK(fockref::required_truncation(0.0) == 10);
  CHECK_THROWS_AS(fockref::coherent_fock(2.0, 20), std::invalid_argument);

  // <a|b> from the Fock vectors reproduces the closed form
  const Complex a{0.4, -0.6};
  const Complex b{-0.2, 0.9};
  const int n = std::max(fockref::required_truncation(a), fockref::required_truncation(b));
  const auto va = fockref::coherent_fock(a, n);
  const auto vb = fockref::coherent_fock(b, n);
  CHECK(std::abs(va.coeffs.dot(vb.coeffs) - ccalc::coherent_overlap(a, b)) < 1e-13);
}

TEST_CASE("damping Kraus operators are complete") {
  for (double eta : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    const auto k = fockref::damping_kraus(eta, 25);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(26, 26);
    CHECK((fockref::completeness(k) - id).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(fockref::damping_kraus(1.0, 5).operators.size() == 1);
  const auto zero = fockref::damping_kraus(0.0, 4);
  CHECK(zero.operators.size() == 5);
  CHECK(zero.operators[3](0, 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fockref::damping_kraus(1.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(fockref::completeness(fockref::KrausSet{}), std::invalid_argument);
}

TEST_CASE("damping a coherent state shrinks its amplitude") {
  const Complex a{1.1, 0.4};
  // truncation error collects near the cutoff, so compare well below it
  const int n = fockref::required_truncation(a);
  const int big = n + 20;
  const auto v = fockref::coherent_fock(a, big);
  const auto rho = fockref::pure_density({big + 1}, v.coeffs);
  for (double eta : {0.35, 0.9}) {
    const auto out = fockref::apply_channel(rho, 0, fockref::damping_kraus(eta, big));
    const auto target = fockref::coherent_fock(std::sqrt(eta) * a, big);
    const Eigen::MatrixXcd expected = target.coeffs * target.coeffs.adjoint();
    CHECK(max_abs(out.rho.topLeftCorner(n + 1, n + 1) - expected.topLeftCorner(n + 1, n + 1)) < 1e-12);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("Fock loss channels compose multiplicatively") {
  const double alpha = 0.9;
  const int n = fockref::required_truncation(alpha);
  const std::vector<int> dims{n + 1, n + 1};
  const auto psi = formulas::cat_state({alpha, Amplitude{0.0, alpha}}, formulas::Parity::odd);
  const auto rho = fockref::pure_density(dims, fockref::from_superposition(psi, dims));
  const auto twice = fockref::apply_channel(fockref::apply_channel(rho, 1, fockref::damping_kraus(0.6, n)), 1,
                                            fockref::damping_kraus(0.5, n));
  const auto once = fockref::apply_channel(rho, 1, fockref::damping_kraus(0.3, n));
  CHECK(max_abs(twice.rho - once.rho) < 1e-12);
  CHECK(std::abs(once.trace() - rho.trace()) < 1e-12);
  CHECK(max_abs(once.rho - once.rho.adjoint()) < 1e-14);
  CHECK_THROWS_AS(fockref::apply_channel(rho, 2, fockref::damping_kraus(0.3, n)), std::out_of_range);
  CHECK_THROWS_AS(fockref::apply_channel(rho, 0, fockref::damping_kraus(0.3, n - 1)), std::invalid_argument);
}

TEST_CASE("ccalc loss agrees with the Fock backend") {
  for (double alpha : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const int n = fockref::required_truncation(alpha);
    const std::vector<int> dims{n + 1, n + 1};
    const auto psi = formulas::cat_state({alpha, alpha}, formulas::Parity::odd);
    const auto rho = fockref::pure_density(dims, fockref::from_superposition(psi, dims));
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto exact = ccalc::canonicalize(ccalc::apply_loss(psi, 1, eta));
      const auto expanded = fockref::from_superposition(exact, dims);
      const auto reference = fockref::apply_channel(rho, 1, fockref::damping_kraus(eta, n));
      CHECK(max_abs(expanded.rho - reference.rho) < 1e-8);
    }
  }
}

TEST_CASE("two-mode GHZ analog: damped projection matches the Fock backend") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (double eta : {0.2, 0.6, 0.9}) {
      const logical::LogicalBasis in(alpha);
      const auto ghz = ccalc::scaled(ccalc::sum(ccalc::tensor(in.u(), in.u()), ccalc::tensor(in.v(), in.v())),
                                     1.0 / std::sqrt(2.0));
      const std::vector<logical::LogicalBasis> bases{in, logical::LogicalBasis(std::sqrt(eta) * alpha)};
      const auto damped = ccalc::canonicalize(ccalc::apply_loss(ghz, 1, eta));
      const auto proj = logical::project_to_qubits(damped, bases);
      CHECK(std::abs(proj.residual) < 1e-10);

      const int n = fockref::required_truncation(alpha);
      const std::vector<int> dims{n + 1, n + 1};
      const auto rho = fockref::apply_channel(
          fockref::pure_density(dims, fockref::from_superposition(ghz, dims)), 1, fockref::damping_kraus(eta, n));
      Eigen::Matrix4cd q;
      std::vector<Eigen::VectorXcd> b;
      for (std::size_t r = 0; r < 4; ++r) b.push_back(basis_product(bases, r, dims));
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) q(r, c) = b[r].dot(rho.rho * b[c]);
      CHECK(max_abs(q - proj.matrix.entries) < 1e-8);
      CHECK(logical::wootters_concurrence(q) ==
            doctest::Approx(logical::wootters_concurrence(proj.matrix.entries)).epsilon(1e-7));
    }
  }
}

TEST_CASE("partial trace and size guard") {
  const std::vector<int> dims{3, 4};
  Eigen::VectorXcd a(3), b(4);
  a << 0.6, Complex{0.0, 0.8}, 0.0;
  b << 0.5, 0.5, 0.5, 0.5;
  const Eigen::VectorXcd factors[] = {a, b};
  const auto rho = fockref::pure_density(dims, fockref::product_vector(factors));
  const std::size_t env[] = {1};
  const auto red = fockref::partial_trace_fock(rho, env);
  CHECK(red.dims == std::vector<int>{3});
  CHECK(max_abs(red.rho - a * a.adjoint()) < 1e-15);
  const std::size_t first[] = {0};
  CHECK(max_abs(fockref::partial_trace_fock(rho, first).rho - b * b.adjoint()) < 1e-15);

  const std::size_t all[] = {0, 1};
  const std::size_t dup[] = {1, 1};
  const std::size_t bad[] = {2};
  CHECK_THROWS_AS(fockref::partial_trace_fock(rho, all), std::invalid_argument);
  CHECK_THROWS_AS(fockref::partial_trace_fock(rho, dup), std::invalid_argument);
  CHECK_THROWS_AS(fockref::partial_trace_fock(rho, bad), std::out_of_range);

  CHECK_THROWS_AS(fockref::make_density({4000}), std::length_error);
  CHECK_THROWS_AS(fockref::make_density({3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(fockref::pure_density({3}, b), std::invalid_argument);
  CHECK(std::abs(fockref::expectation(red, a) - 1.0) < 1e-15);
}
