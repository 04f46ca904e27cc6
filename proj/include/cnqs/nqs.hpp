// Copyright 2026 The cnqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CNQS_NQS_HPP
#define CNQS_NQS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "cnqs/errors.hpp"

namespace cnqs {

using Complex = std::complex<double>;

/// Position of a spin value in a 2-vector or matrix index: +1 -> 0, -1 -> 1.
constexpr int spin_slot(int v) { return v > 0 ? 0 : 1; }

/// 2x2 complex matrix. Used for coupling matrices (rows: hidden value,
/// columns: visible value), Jastrow edge factors (rows: source spin,
/// columns: target spin) and single-spin gates (<v|Q|v'>). Index 0 is
/// spin +1 (qubit 0), index 1 is spin -1 (qubit 1).
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  static Mat2 make(Complex a, Complex b, Complex c, Complex d) { return Mat2{{a, b, c, d}}; }
  static Mat2 ones() { return make(1, 1, 1, 1); }
  static Mat2 identity() { return make(1, 0, 0, 1); }
  /// Unnormalised Hadamard [[1,1],[1,-1]].
  static Mat2 hadamard_type() { return make(1, 1, 1, -1); }
  static Mat2 diagonal(Complex a, Complex d) { return make(a, 0, 0, d); }
  /// [[e^w, e^-w], [e^-w, e^w]].
  static Mat2 boltzmann(Complex w) {
    const Complex p = std::exp(w);
    const Complex q = std::exp(-w);
    return make(p, q, q, p);
  }

  Mat2 transposed() const { return make(m[0], m[2], m[1], m[3]); }

  bool is_diagonal() const { return m[1] == Complex{} && m[2] == Complex{}; }
  bool is_anti_diagonal() const { return m[0] == Complex{} && m[3] == Complex{}; }
  bool is_finite() const {
    return std::all_of(m.begin(), m.end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    return out;
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

using CouplingMatrix = Mat2;

/// Per-visible diagonal factor (value at v=+1, value at v=-1).
using DiagFactor = std::array<Complex, 2>;

/// A configuration of N Ising spins, each +1 or -1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> spins) : v_(std::move(spins)) {
    for (int s : v_)
      if (s != 1 && s != -1) throw ArgumentError("spin values must be +1 or -1");
  }

  /// Configuration for basis index `index`, qubit 1 being the most significant bit.
  static SpinConfig from_index(std::uint64_t index, std::size_t n) {
    SpinConfig out;
    out.v_.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.v_[j] = ((index >> (n - 1 - j)) & 1u) ? -1 : 1;
    return out;
  }
  std::uint64_t index() const {
    std::uint64_t x = 0;
    for (int s : v_) x = (x << 1) | (s < 0 ? 1u : 0u);
    return x;
  }

  std::size_t size() const { return v_.size(); }
  int operator[](std::size_t j) const { return v_[j]; }
  /// Qubit label q = (1 - v) / 2.
  int qubit(std::size_t j) const { return (1 - v_[j]) / 2; }
  void flip(std::size_t j) { v_[j] = -v_[j]; }
  void set(std::size_t j, int value) {
    if (value != 1 && value != -1) throw ArgumentError("spin values must be +1 or -1");
    v_[j] = value;
  }
  const std::vector<int>& spins() const { return v_; }
  int magnetization() const {
    int total = 0;
    for (int s : v_) total += s;
    return total;
  }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<int> v_;
};

/// One hidden unit: coupling matrices keyed by visible index. Sites without
/// an entry are uncoupled (equivalently coupled by the all-ones matrix).
struct HiddenUnit {
  std::map<std::size_t, CouplingMatrix> couplings;
};

/// Product over coupled sites of the h=+1 row plus the same for h=-1.
inline Complex correlator(const HiddenUnit& unit, const SpinConfig& v) {
  Complex up = 1.0;
  Complex down = 1.0;
  for (const auto& [j, c] : unit.couplings) {
    if (j >= v.size()) throw ArgumentError("coupling index " + std::to_string(j) + " out of range");
    const int slot = spin_slot(v[j]);
    up *= c(0, slot);
    down *= c(1, slot);
  }
  return up + down;
}

/// Tensor-network NQS: hidden units with sparse coupling matrices plus a
/// diagonal factor on every visible unit.
class NqsNetwork {
 public:
  NqsNetwork() = default;

  explicit NqsNetwork(std::size_t n_visible, std::vector<HiddenUnit> hidden = {},
                      std::vector<DiagFactor> visible_diag = {})
      : n_(n_visible), hidden_(std::move(hidden)), diag_(std::move(visible_diag)) {
    if (diag_.empty()) diag_.assign(n_, DiagFactor{1.0, 1.0});
    if (diag_.size() != n_) {
      throw ArgumentError("visible_diag has " + std::to_string(diag_.size()) + " entries, expected " +
                          std::to_string(n_));
    }
    for (std::size_t i = 0; i < hidden_.size(); ++i) {
      if (hidden_[i].couplings.empty()) {
        throw ArgumentError("hidden unit " + std::to_string(i) + " has no couplings");
      }
      for (const auto& [j, c] : hidden_[i].couplings) {
        if (j >= n_) {
          throw ArgumentError("hidden unit " + std::to_string(i) + " couples to visible " + std::to_string(j) +
                              " but n_visible = " + std::to_string(n_));
        }
        if (!c.is_finite()) {
          throw ArgumentError("non-finite coupling between hidden " + std::to_string(i) + " and visible " +
                              std::to_string(j));
        }
      }
    }
  }

  std::size_t n_visible() const { return n_; }
  /// Number of hidden units M.
  std::size_t hidden_count() const { return hidden_.size(); }
  const std::vector<HiddenUnit>& hidden() const { return hidden_; }
  const HiddenUnit& hidden(std::size_t i) const { return hidden_.at(i); }
  const std::vector<DiagFactor>& visible_diag() const { return diag_; }
  const DiagFactor& visible_diag(std::size_t j) const { return diag_.at(j); }

 private:
  std::size_t n_ = 0;
  std::vector<HiddenUnit> hidden_;
  std::vector<DiagFactor> diag_;
};

inline Complex nqs_amplitude(const NqsNetwork& nqs, const SpinConfig& v) {
  if (v.size() != nqs.n_visible()) {
    throw ArgumentError("configuration has " + std::to_string(v.size()) + " spins, network has " +
                        std::to_string(nqs.n_visible()));
  }
  Complex amp = 1.0;
  for (std::size_t j = 0; j < v.size(); ++j) amp *= nqs.visible_diag(j)[spin_slot(v[j])];
  for (const auto& unit : nqs.hidden()) amp *= correlator(unit, v);
  return amp;
}

/// Number of hidden units coupled to visible unit j.
inline std::size_t valency(const NqsNetwork& nqs, std::size_t j) {
  if (j >= nqs.n_visible()) throw ArgumentError("visible index " + std::to_string(j) + " out of range");
  std::size_t count = 0;
  for (const auto& unit : nqs.hidden()) count += unit.couplings.count(j);
  return count;
}

inline std::vector<std::size_t> univalent_sites(const NqsNetwork& nqs) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < nqs.n_visible(); ++j)
    if (valency(nqs, j) == 1) out.push_back(j);
  return out;
}

// ---------------------------------------------------------------------------
// Complex RBM parameterisation.

/// RBM parameters (a, b, w) with w stored row-major as M x N.
template <typename T>
struct BasicRbmParams {
  std::vector<T> a;
  std::vector<T> b;
  std::vector<T> w;

  BasicRbmParams() = default;
  BasicRbmParams(std::size_t n_visible, std::size_t n_hidden)
      : a(n_visible, T{}), b(n_hidden, T{}), w(n_visible * n_hidden, T{}) {}

  std::size_t n_visible() const { return a.size(); }
  std::size_t n_hidden() const { return b.size(); }
  std::size_t parameter_count() const { return a.size() + b.size() + w.size(); }

  T& weight(std::size_t i, std::size_t j) { return w[i * a.size() + j]; }
  const T& weight(std::size_t i, std::size_t j) const { return w[i * a.size() + j]; }

  void validate() const {
    if (w.size() != a.size() * b.size()) {
      throw ArgumentError("weight matrix has " + std::to_string(w.size()) + " entries, expected " +
                          std::to_string(a.size() * b.size()));
    }
  }
};

using RbmParams = BasicRbmParams<Complex>;
using RealRbmParams = BasicRbmParams<double>;

namespace detail {

inline double real_part(double x) { return x; }
inline double real_part(Complex z) { return z.real(); }

/// log(2 cosh x), stable for large |Re x|.
inline double log_two_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}
inline Complex log_two_cosh(Complex x) {
  if (x.real() < 0) x = -x;
  return x + std::log(1.0 + std::exp(-2.0 * x));
}

constexpr double kMaxExpArgument = 709.0;

}  // namespace detail

/// Hidden-unit pre-activations theta_i = b_i + sum_j w_ij v_j.
template <typename T>
std::vector<T> rbm_activations(const BasicRbmParams<T>& p, const SpinConfig& v) {
  p.validate();
  if (v.size() != p.n_visible()) throw ArgumentError("configuration length does not match RBM");
  std::vector<T> theta(p.b);
  const std::size_t n = p.n_visible();
  for (std::size_t i = 0; i < p.n_hidden(); ++i) {
    const T* row = p.w.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) theta[i] += row[j] * static_cast<double>(v[j]);
  }
  return theta;
}

/// log of prod_j e^{a_j v_j} prod_i 2cosh(theta_i).
template <typename T>
T rbm_log_amplitude(const BasicRbmParams<T>& p, const SpinConfig& v) {
  const auto theta = rbm_activations(p, v);
  T out{};
  for (std::size_t j = 0; j < p.n_visible(); ++j) out += p.a[j] * static_cast<double>(v[j]);
  for (const T& t : theta) out += detail::log_two_cosh(t);
  return out;
}

/// Amplitude of the RBM; throws OverflowError when the result leaves the
/// double range, carrying the largest |argument| met.
template <typename T>
T rbm_amplitude(const BasicRbmParams<T>& p, const SpinConfig& v) {
  const T log_amp = rbm_log_amplitude(p, v);
  if (detail::real_part(log_amp) > detail::kMaxExpArgument) {
    double max_argument = 0;
    for (const T& t : rbm_activations(p, v)) max_argument = std::max(max_argument, std::abs(t));
    for (std::size_t j = 0; j < p.n_visible(); ++j) max_argument = std::max(max_argument, std::abs(p.a[j]));
    throw OverflowError("RBM amplitude overflows: log-amplitude real part " +
                            std::to_string(detail::real_part(log_amp)),
                        max_argument);
  }
  return std::exp(log_amp);
}

namespace detail {

inline Complex soften_entry(Complex value, std::optional<double> soften, const std::string& where) {
  if (value != Complex{}) return value;
  if (!soften) throw ArgumentError("zero entry in " + where + " cannot be written in Boltzmann form; pass a softening S");
  return std::exp(-*soften);
}

}  // namespace detail

/// Boltzmann decomposition of every coupling matrix with partial biases
/// summed onto the units and scale factors discarded. The amplitudes of
/// the result are proportional to those of `nqs`. Zero entries are
/// replaced by e^-S when `soften` is given and rejected otherwise.
inline RbmParams nqs_to_rbm(const NqsNetwork& nqs, std::optional<double> soften = std::nullopt) {
  const std::size_t n = nqs.n_visible();
  RbmParams p(n, nqs.hidden_count());
  for (std::size_t j = 0; j < n; ++j) {
    const auto& d = nqs.visible_diag(j);
    const std::string where = "visible_diag[" + std::to_string(j) + "]";
    const Complex up = detail::soften_entry(d[0], soften, where);
    const Complex down = detail::soften_entry(d[1], soften, where);
    p.a[j] += 0.5 * (std::log(up) - std::log(down));
  }
  for (std::size_t i = 0; i < nqs.hidden_count(); ++i) {
    for (const auto& [j, c] : nqs.hidden(i).couplings) {
      const std::string where = "coupling (" + std::to_string(i) + "," + std::to_string(j) + ")";
      std::array<Complex, 4> lg;
      for (int k = 0; k < 4; ++k) lg[k] = std::log(detail::soften_entry(c.m[k], soften, where));
      // lg = {++, +-, -+, --} with rows h and columns v.
      p.a[j] += 0.25 * (lg[0] - lg[1] + lg[2] - lg[3]);
      p.b[i] += 0.25 * (lg[0] + lg[1] - lg[2] - lg[3]);
      p.weight(i, j) = 0.25 * (lg[0] - lg[1] - lg[2] + lg[3]);
    }
  }
  return p;
}

/// Every weight becomes a Boltzmann coupling matrix; the hidden bias is
/// folded into the coupling at visible 0 and the visible biases become
/// diagonal factors. Amplitudes match rbm_amplitude exactly.
inline NqsNetwork rbm_to_nqs(const RbmParams& p) {
  p.validate();
  const std::size_t n = p.n_visible();
  if (n == 0 && p.n_hidden() > 0) throw ArgumentError("an RBM with hidden units needs at least one visible unit");
  std::vector<HiddenUnit> hidden(p.n_hidden());
  for (std::size_t i = 0; i < p.n_hidden(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Mat2 c = Mat2::boltzmann(p.weight(i, j));
      if (j == 0) c = Mat2::diagonal(std::exp(p.b[i]), std::exp(-p.b[i])) * c;
      hidden[i].couplings.emplace(j, c);
    }
  }
  std::vector<DiagFactor> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = {std::exp(p.a[j]), std::exp(-p.a[j])};
  return NqsNetwork(n, std::move(hidden), std::move(diag));
}

/// Returns the network for Q|psi>, where Q acts on site j with matrix
/// elements Q(v, v') = <v|Q|v'>.
///
/// Any Q is accepted at a site coupled to at most one hidden unit.
/// Diagonal and anti-diagonal Q are accepted anywhere; they pass through
/// the visible COPY tensor into the diagonal factor, the anti-diagonal
/// part swapping the visible columns of every coupling at j.
inline NqsNetwork absorb_gate(const NqsNetwork& nqs, std::size_t j, const Mat2& q) {
  if (j >= nqs.n_visible()) throw ArgumentError("site " + std::to_string(j) + " out of range");
  if (!q.is_finite()) throw ArgumentError("gate has non-finite entries");
  std::vector<HiddenUnit> hidden = nqs.hidden();
  std::vector<DiagFactor> diag = nqs.visible_diag();
  const DiagFactor d = diag[j];
  const std::size_t k = valency(nqs, j);

  if (k == 0) {
    diag[j] = {q(0, 0) * d[0] + q(0, 1) * d[1], q(1, 0) * d[0] + q(1, 1) * d[1]};
  } else if (q.is_diagonal()) {
    diag[j] = {q(0, 0) * d[0], q(1, 1) * d[1]};
  } else if (q.is_anti_diagonal()) {
    diag[j] = {q(0, 1) * d[1], q(1, 0) * d[0]};
    for (auto& unit : hidden) {
      auto it = unit.couplings.find(j);
      if (it == unit.couplings.end()) continue;
      Mat2& c = it->second;
      c = Mat2::make(c(0, 1), c(0, 0), c(1, 1), c(1, 0));
    }
  } else if (k == 1) {
    // C'(h, v) = sum_v' C(h, v') d(v') Q(v, v')
    for (auto& unit : hidden) {
      auto it = unit.couplings.find(j);
      if (it == unit.couplings.end()) continue;
      it->second = it->second * Mat2::diagonal(d[0], d[1]) * q.transposed();
    }
    diag[j] = {1.0, 1.0};
  } else {
    throw UnsupportedOperation("site " + std::to_string(j) + " is coupled to " + std::to_string(k) +
                               " hidden units; a general single-spin gate can only be absorbed at a "
                               "univalent site, multivalent sites accept diagonal or anti-diagonal gates");
  }
  return NqsNetwork(nqs.n_visible(), std::move(hidden), std::move(diag));
}

/// Appends one hidden unit whose correlator is -1 when every spin in
/// `sites` is down and +1 otherwise (a controlled^{p-1}-phase factor).
inline NqsNetwork add_hyperedge_unit(const NqsNetwork& nqs, std::span<const std::size_t> sites) {
  const std::set<std::size_t> unique(sites.begin(), sites.end());
  if (unique.size() != sites.size()) throw ArgumentError("hyperedge sites must be distinct");
  if (unique.size() < 2) throw ArgumentError("a hyperedge needs at least two sites");
  const double p = static_cast<double>(unique.size());
  const Complex root = std::pow(Complex(-2.0, 0.0), 1.0 / p);
  HiddenUnit unit;
  for (std::size_t j : unique) {
    if (j >= nqs.n_visible()) throw ArgumentError("site " + std::to_string(j) + " out of range");
    unit.couplings.emplace(j, Mat2::make(1, 1, 0, root));
  }
  std::vector<HiddenUnit> hidden = nqs.hidden();
  hidden.push_back(std::move(unit));
  return NqsNetwork(nqs.n_visible(), std::move(hidden), nqs.visible_diag());
}

}  // namespace cnqs

#endif  // CNQS_NQS_HPP
