#include "catloss/fockref.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace catloss::fockref {

namespace {

std::size_t product(std::span<const int> dims) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("fockref: mode dimensions must be positive");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

void guard_size(std::size_t dim) {
  if (static_cast<double>(dim) * static_cast<double>(dim) > kMaxMatrixEntries) {
    throw std::length_error("fockref: product space of dimension " + std::to_string(dim) +
                            " exceeds the matrix-entry cap");
  }
}

// Row-major strides: index = sum_k n_k * stride_k.
std::vector<std::size_t> strides_of(std::span<const int> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * static_cast<std::size_t>(dims[k]);
  return s;
}

struct Entry {
  int row;
  int col;
  double value;
};

}  // namespace

int required_truncation(Complex alpha) {
  const double r = std::abs(alpha);
  return static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0));
}

FockVector coherent_fock(Complex alpha, int n_max) {
  if (n_max < required_truncation(alpha)) {
    throw std::invalid_argument("coherent_fock: n_max " + std::to_string(n_max) + " below required " +
                                std::to_string(required_truncation(alpha)));
  }
  FockVector v{n_max, Eigen::VectorXcd(n_max + 1)};
  Complex c = std::exp(-0.5 * std::norm(alpha));
  v.coeffs(0) = c;
  for (int n = 1; n <= n_max; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    v.coeffs(n) = c;
  }
  return v;
}

std::size_t FockDensity::total_dim() const { return product(dims); }

FockDensity make_density(std::vector<int> dims) {
  const std::size_t n = product(dims);
  guard_size(n);
  const auto en = static_cast<Eigen::Index>(n);
  return FockDensity{std::move(dims), Eigen::MatrixXcd::Zero(en, en)};
}

FockDensity pure_density(std::vector<int> dims, const Eigen::VectorXcd& psi) {
  auto out = make_density(std::move(dims));
  if (psi.size() != out.rho.rows()) throw std::invalid_argument("pure_density: dimension mismatch");
  out.rho.noalias() = psi * psi.adjoint();
  return out;
}

Eigen::VectorXcd product_vector(std::span<const Eigen::VectorXcd> factors) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXcd next(v.size() * f.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * f.size(), f.size()) = v(i) * f;
    v = std::move(next);
  }
  return v;
}

KrausSet damping_kraus(double eta, int n_max) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("damping_kraus: eta must lie in [0, 1]");
  if (n_max < 0) throw std::invalid_argument("damping_kraus: negative truncation");
  const int levels = n_max + 1;
  KrausSet set{eta, {}};
  if (eta == 1.0) {
    set.operators.push_back(Eigen::MatrixXd::Identity(levels, levels));
    return set;
  }
  const double log_t = 0.5 * std::log(eta);
  const double log_r = 0.5 * std::log1p(-eta);
  for (int k = 0; k < levels; ++k) {
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(levels, levels);
    for (int n = k; n < levels; ++n) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      // 0 * log(0) terms: eta = 0 keeps only n == k, eta -> 1 keeps only k == 0
      const double lt = (n - k) == 0 ? 0.0 : (n - k) * log_t;
      const double lr = k == 0 ? 0.0 : k * log_r;
      op(n - k, n) = std::exp(0.5 * log_binom + lt + lr);
    }
    set.operators.push_back(std::move(op));
  }
  return set;
}

Eigen::MatrixXd completeness(const KrausSet& kraus) {
  if (kraus.operators.empty()) throw std::invalid_argument("completeness: empty Kraus set");
  const auto n = kraus.operators.front().rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (const auto& k : kraus.operators) acc.noalias() += k.transpose() * k;
  return acc;
}

FockDensity apply_channel(const FockDensity& rho, std::size_t mode, const KrausSet& kraus) {
  if (mode >= rho.dims.size()) throw std::out_of_range("apply_channel: mode index out of range");
  const int levels = rho.dims[mode];
  for (const auto& k : kraus.operators) {
    if (k.rows() != levels || k.cols() != levels) {
      throw std::invalid_argument("apply_channel: Kraus dimension does not match mode dimension");
    }
  }

  const auto strides = strides_of(rho.dims);
  const std::size_t stride = strides[mode];
  const std::size_t n = rho.total_dim();
  // Each index splits as outer * (levels * stride) + level * stride + inner.
  const std::size_t block = stride * static_cast<std::size_t>(levels);

  FockDensity out = make_density(rho.dims);
  std::vector<std::size_t> base;  // indices with level 0 on `mode`
  base.reserve(n / static_cast<std::size_t>(levels));
  for (std::size_t outer = 0; outer < n; outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) base.push_back(outer + inner);
  }

  for (const auto& op : kraus.operators) {
    std::vector<Entry> nz;
    for (int c = 0; c < levels; ++c) {
      for (int r = 0; r < levels; ++r) {
        if (op(r, c) != 0.0) nz.push_back({r, c, op(r, c)});
      }
    }
    for (const auto& er : nz) {
      for (const auto& ec : nz) {
        const double w = er.value * ec.value;
        // column-major storage: walk rows innermost
        for (auto bc : base) {
          const auto src_c = static_cast<Eigen::Index>(bc + static_cast<std::size_t>(ec.col) * stride);
          const auto dst_c = static_cast<Eigen::Index>(bc + static_cast<std::size_t>(ec.row) * stride);
          for (auto br : base) {
            const auto src_r = static_cast<Eigen::Index>(br + static_cast<std::size_t>(er.col) * stride);
            const auto dst_r = static_cast<Eigen::Index>(br + static_cast<std::size_t>(er.row) * stride);
            out.rho(dst_r, dst_c) += w * rho.rho(src_r, src_c);
          }
        }
      }
    }
  }
  return out;
}

FockDensity partial_trace_fock(const FockDensity& rho, std::span<const std::size_t> traced_modes) {
  const std::size_t modes = rho.dims.size();
  std::vector<bool> traced(modes, false);
  for (auto k : traced_modes) {
    if (k >= modes) throw std::out_of_range("partial_trace_fock: mode index out of range");
    if (traced[k]) throw std::invalid_argument("partial_trace_fock: duplicate mode index");
    traced[k] = true;
  }
  if (traced_modes.empty() || traced_modes.size() == modes) {
    throw std::invalid_argument("partial_trace_fock: traced modes must be a nonempty proper subset");
  }

  std::vector<int> kept_dims;
  std::vector<int> env_dims;
  for (std::size_t k = 0; k < modes; ++k) (traced[k] ? env_dims : kept_dims).push_back(rho.dims[k]);
  FockDensity out = make_density(kept_dims);

  const auto strides = strides_of(rho.dims);
  const std::size_t kept_n = product(kept_dims);
  const std::size_t env_n = product(env_dims);
  // Full-space index of (kept index, env index).
  std::vector<std::size_t> kept_offset(kept_n, 0);
  std::vector<std::size_t> env_offset(env_n, 0);
  const auto fill = [&](std::vector<std::size_t>& offsets, bool want_traced) {
    std::vector<int> digits;
    std::vector<std::size_t> sel_strides;
    for (std::size_t k = 0; k < modes; ++k) {
      if (traced[k] == want_traced) {
        digits.push_back(rho.dims[k]);
        sel_strides.push_back(strides[k]);
      }
    }
    std::vector<int> counter(digits.size(), 0);
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      std::size_t off = 0;
      for (std::size_t d = 0; d < digits.size(); ++d) off += static_cast<std::size_t>(counter[d]) * sel_strides[d];
      offsets[i] = off;
      for (std::size_t d = digits.size(); d-- > 0;) {
        if (++counter[d] < digits[d]) break;
        counter[d] = 0;
      }
    }
  };
  fill(kept_offset, false);
  fill(env_offset, true);

  for (std::size_t r = 0; r < kept_n; ++r) {
    for (std::size_t c = 0; c < kept_n; ++c) {
      Complex acc{0.0, 0.0};
      for (auto e : env_offset) {
        acc += rho.rho(static_cast<Eigen::Index>(kept_offset[r] + e), static_cast<Eigen::Index>(kept_offset[c] + e));
      }
      out.rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

Eigen::VectorXcd from_superposition(const ccalc::SuperpositionState& s, std::span<const int> dims) {
  if (dims.size() != s.mode_count()) throw std::invalid_argument("from_superposition: mode-count mismatch");
  const std::size_t n = product(dims);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  std::vector<Eigen::VectorXcd> factors(dims.size());
  for (const auto& t : s.terms()) {
    for (std::size_t k = 0; k < dims.size(); ++k) factors[k] = coherent_fock(t.amps[k], dims[k] - 1).coeffs;
    psi += t.coeff * product_vector(factors);
  }
  return psi;
}

FockDensity from_superposition(const ccalc::SuperpositionDensity& d, std::vector<int> dims) {
  if (dims.size() != d.mode_count()) throw std::invalid_argument("from_superposition: mode-count mismatch");
  FockDensity out = make_density(std::move(dims));
  std::vector<Eigen::VectorXcd> factors(out.dims.size());
  for (const auto& dy : d.dyads()) {
    for (std::size_t k = 0; k < factors.size(); ++k) factors[k] = coherent_fock(dy.ket[k], out.dims[k] - 1).coeffs;
    const Eigen::VectorXcd ket = product_vector(factors);
    for (std::size_t k = 0; k < factors.size(); ++k) factors[k] = coherent_fock(dy.bra[k], out.dims[k] - 1).coeffs;
    const Eigen::VectorXcd bra = product_vector(factors);
    out.rho.noalias() += dy.coeff * ket * bra.adjoint();
  }
  return out;
}

Complex expectation(const FockDensity& rho, const Eigen::VectorXcd& psi) {
  if (psi.size() != rho.rho.rows()) throw std::invalid_argument("expectation: dimension mismatch");
  return psi.dot(rho.rho * psi);
}

}  // namespace catloss::fockref
