#include "catloss/logical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace catloss::logical {

namespace {

double block_intensity(const AmplitudeList& amps) {
  double acc = 0.0;
  for (const auto& a : amps) acc += std::norm(a);
  return acc;
}

Eigen::MatrixXcd sqrt_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Entries <B_r|amps> over all basis products B_r.
Eigen::VectorXcd block_vector(const ccalc::AmplitudeList& amps, std::span<const LogicalBasis> bases) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  std::size_t offset = 0;
  for (const auto& basis : bases) {
    const auto c = basis.coefficients(std::span(amps).subspan(offset, basis.mode_count()));
    offset += basis.mode_count();
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * c[0];
      next(2 * i + 1) = v(i) * c[1];
    }
    v = std::move(next);
  }
  return v;
}

}  // namespace

LogicalBasis::LogicalBasis(Amplitude alpha) : LogicalBasis(AmplitudeList{alpha}) {}

LogicalBasis::LogicalBasis(AmplitudeList block) : amps_(std::move(block)) {
  if (amps_.empty()) throw std::invalid_argument("LogicalBasis: empty mode block");
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("LogicalBasis: non-finite amplitude");
    }
  }
  intensity_ = block_intensity(amps_);
  lambda_ = std::sqrt(0.5 * (1.0 + std::exp(-2.0 * intensity_)));
  mu_ = std::sqrt(-0.5 * std::expm1(-2.0 * intensity_));
}

SuperpositionState LogicalBasis::u() const {
  AmplitudeList neg(amps_.size());
  std::transform(amps_.begin(), amps_.end(), neg.begin(), [](Amplitude a) { return -a; });
  SuperpositionState s(amps_.size());
  s.add_term(0.5 / lambda_, amps_);
  s.add_term(0.5 / lambda_, std::move(neg));
  return s;
}

SuperpositionState LogicalBasis::v() const {
  if (mu_ == 0.0) throw std::domain_error("LogicalBasis: |v> is undefined at zero amplitude");
  AmplitudeList neg(amps_.size());
  std::transform(amps_.begin(), amps_.end(), neg.begin(), [](Amplitude a) { return -a; });
  SuperpositionState s(amps_.size());
  s.add_term(0.5 / mu_, amps_);
  s.add_term(-0.5 / mu_, std::move(neg));
  return s;
}

std::array<Complex, 2> LogicalBasis::coefficients(std::span<const Amplitude> ket) const {
  if (ket.size() != amps_.size()) {
    throw std::invalid_argument("LogicalBasis::coefficients: block size mismatch");
  }
  // <+-a|k> = exp(-(|a|^2 + |k|^2)/2 +- z) with z = sum conj(a_j) k_j.
  Complex z{0.0, 0.0};
  double ket_intensity = 0.0;
  for (std::size_t j = 0; j < ket.size(); ++j) {
    z += std::conj(amps_[j]) * ket[j];
    ket_intensity += std::norm(ket[j]);
  }
  const double log_pref = -0.5 * (intensity_ + ket_intensity);
  const Complex plus = std::exp(log_pref + z);
  const Complex minus = std::exp(log_pref - z);
  const Complex on_u = 0.5 * (plus + minus) / lambda_;
  Complex on_v{0.0, 0.0};
  if (mu_ > 0.0) {
    // sinh form avoids cancelling plus - minus when z is small
    on_v = std::abs(z) < 1.0 ? std::exp(log_pref) * std::sinh(z) / mu_ : 0.5 * (plus - minus) / mu_;
  }
  return {on_u, on_v};
}

LogicalBasis make_basis(Amplitude alpha) { return LogicalBasis(alpha); }

Projection project_to_qubits(const SuperpositionDensity& d, std::span<const LogicalBasis> bases) {
  std::size_t covered = 0;
  for (const auto& b : bases) covered += b.mode_count();
  if (covered != d.mode_count()) {
    throw std::invalid_argument("project_to_qubits: bases cover " + std::to_string(covered) +
                                " modes, density has " + std::to_string(d.mode_count()));
  }
  if (bases.size() > 20) throw std::length_error("project_to_qubits: too many logical qubits");

  const Eigen::Index dim = Eigen::Index{1} << bases.size();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& dy : d.dyads()) {
    const Eigen::VectorXcd ket = block_vector(dy.ket, bases);
    const Eigen::VectorXcd bra = block_vector(dy.bra, bases);
    q.noalias() += dy.coeff * ket * bra.adjoint();
  }
  Projection out{QubitMatrix{std::move(q)}, 0.0};
  out.residual = ccalc::trace(d).real() - out.matrix.trace().real();
  return out;
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_psd(const Eigen::MatrixXcd& m, double tol) {
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  if (!is_hermitian(rho)) throw std::domain_error("wootters_concurrence: input is not Hermitian");
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  if (!is_psd(h)) throw std::domain_error("wootters_concurrence: input is not positive semidefinite");

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::MatrixXcd flipped = yy * h.conjugate() * yy;
  const Eigen::MatrixXcd root = sqrt_psd(h);
  // root * flipped * root shares its spectrum with rho * flipped and is Hermitian.
  const Eigen::VectorXd ev = hermitian_eigenvalues(root * flipped * root);
  // round-off sized eigenvalues would otherwise leak in at sqrt(eps)
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ev(3));
  const auto root_of = [floor](double x) { return x > floor ? std::sqrt(x) : 0.0; };
  const double s0 = root_of(ev(3));
  const double s1 = root_of(ev(2));
  const double s2 = root_of(ev(1));
  const double s3 = root_of(ev(0));
  return std::max(0.0, s0 - s1 - s2 - s3);
}

Eigen::Matrix4cd assemble(const XStateElements& x) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = x.a;
  m(1, 1) = x.b;
  m(2, 2) = x.c;
  m(3, 3) = x.d;
  m(1, 2) = x.e;
  m(2, 1) = std::conj(x.e);
  m(0, 3) = x.f;
  m(3, 0) = std::conj(x.f);
  return m;
}

XStateElements extract_x_elements(const Eigen::MatrixXcd& m, std::array<std::size_t, 4> rows) {
  for (auto r : rows) {
    if (static_cast<Eigen::Index>(r) >= m.rows()) {
      throw std::out_of_range("extract_x_elements: row index out of range");
    }
  }
  const auto at = [&](std::size_t i, std::size_t j) {
    return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  XStateElements x;
  x.a = at(rows[0], rows[0]).real();
  x.b = at(rows[1], rows[1]).real();
  x.c = at(rows[2], rows[2]).real();
  x.d = at(rows[3], rows[3]).real();
  x.e = at(rows[1], rows[2]);
  x.f = at(rows[0], rows[3]);
  return x;
}

double xstate_concurrence(const XStateElements& x) {
  const double ad = std::sqrt(std::max(0.0, x.a * x.d));
  const double bc = std::sqrt(std::max(0.0, x.b * x.c));
  return 2.0 * std::max({0.0, std::abs(x.e) - ad, std::abs(x.f) - bc});
}

std::vector<double> density_spectrum(const SuperpositionDensity& d) {
  std::vector<AmplitudeList> points;
  const auto index_of = [&](const AmplitudeList& amps) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (ccalc::amplitudes_close(points[p], amps)) return p;
    }
    points.push_back(amps);
    return points.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  slots.reserve(d.dyads().size());
  for (const auto& dy : d.dyads()) {
    const auto k = index_of(dy.ket);
    const auto b = index_of(dy.bra);
    slots.emplace_back(k, b);
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    coeffs(static_cast<Eigen::Index>(slots[i].first), static_cast<Eigen::Index>(slots[i].second)) +=
        d.dyads()[i].coeff;
  }
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      gram(p, q) = ccalc::product_overlap(points[static_cast<std::size_t>(p)],
                                          points[static_cast<std::size_t>(q)]);
    }
  }
  const Eigen::MatrixXcd root = sqrt_psd(0.5 * (gram + gram.adjoint()));
  const Eigen::VectorXd ev = hermitian_eigenvalues(root * coeffs * root);
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double pure_bipartite_concurrence(const SuperpositionState& s, std::span<const std::size_t> side_a) {
  const std::size_t n = s.mode_count();
  std::vector<bool> in_a(n, false);
  for (auto k : side_a) {
    if (k >= n) throw std::out_of_range("pure_bipartite_concurrence: mode index out of range");
    in_a[k] = true;
  }
  std::vector<std::size_t> side_b;
  for (std::size_t k = 0; k < n; ++k) {
    if (!in_a[k]) side_b.push_back(k);
  }
  if (side_a.empty() || side_b.empty()) {
    throw std::invalid_argument("pure_bipartite_concurrence: both sides must be nonempty");
  }
  if (std::abs(ccalc::norm_squared(s) - 1.0) > 1e-8) {
    throw std::invalid_argument("pure_bipartite_concurrence: state is not normalized");
  }

  const auto reduced = ccalc::canonicalize(ccalc::partial_trace(ccalc::density_from_pure(s), side_b));
  const auto spectrum = density_spectrum(reduced);
  if (spectrum.size() > 2 && spectrum[2] > kRankTolerance) {
    throw std::domain_error("pure_bipartite_concurrence: reduced state has rank above two");
  }
  const double p = ccalc::purity(reduced).real();
  return std::min(1.0, std::sqrt(std::max(0.0, 2.0 * (1.0 - p))));
}

MixtureFit mixture_weights(const SuperpositionDensity& d,
                           std::span<const SuperpositionState> components,
                           std::span<const LogicalBasis> bases) {
  if (components.empty()) throw std::invalid_argument("mixture_weights: no components");
  const Eigen::MatrixXcd target = project_to_qubits(d, bases).matrix.entries;
  std::vector<Eigen::MatrixXcd> projectors;
  projectors.reserve(components.size());
  for (const auto& c : components) {
    projectors.push_back(project_to_qubits(ccalc::density_from_pure(c), bases).matrix.entries);
  }

  const auto k = static_cast<Eigen::Index>(projectors.size());
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& pi = projectors[static_cast<std::size_t>(i)];
    rhs(i) = (pi.adjoint() * target).trace().real();
    for (Eigen::Index j = 0; j < k; ++j) {
      gram(i, j) = (pi.adjoint() * projectors[static_cast<std::size_t>(j)]).trace().real();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
    throw std::domain_error("mixture_weights: component set is ill-conditioned");
  }
  const Eigen::VectorXd w = gram.ldlt().solve(rhs);

  Eigen::MatrixXcd remainder = target;
  for (Eigen::Index i = 0; i < k; ++i) remainder -= w(i) * projectors[static_cast<std::size_t>(i)];
  return MixtureFit{std::vector<double>(w.data(), w.data() + w.size()), remainder.norm()};
}

}  // namespace catloss::logical
