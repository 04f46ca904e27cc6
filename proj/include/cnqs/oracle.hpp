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

#ifndef CNQS_ORACLE_HPP
#define CNQS_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cnqs/errors.hpp"
#include "cnqs/graph.hpp"
#include "cnqs/jastrow.hpp"
#include "cnqs/nqs.hpp"
#include "cnqs/random.hpp"
#include "cnqs/stabilizer.hpp"

namespace cnqs {

inline constexpr std::size_t kMaxDenseQubits = 20;

/// Full 2^n amplitude vector. Index bit (n-1-j) holds the qubit q_j of
/// site j, so site 0 is the most significant bit; v_j = 1 - 2 q_j.
struct DenseState {
  std::size_t n = 0;
  std::vector<Complex> amplitudes;

  DenseState() = default;
  explicit DenseState(std::size_t qubits) : n(qubits), amplitudes(std::size_t{1} << qubits) {}
  DenseState(std::size_t qubits, std::vector<Complex> amps) : n(qubits), amplitudes(std::move(amps)) {
    if (amplitudes.size() != (std::size_t{1} << n)) throw ArgumentError("amplitude vector length is not 2^n");
  }

  std::size_t dimension() const { return amplitudes.size(); }
  Complex& operator[](std::size_t i) { return amplitudes[i]; }
  const Complex& operator[](std::size_t i) const { return amplitudes[i]; }

  double norm() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
  void normalize() {
    const double s = norm();
    if (s == 0) throw NumericalError("cannot normalise the zero vector");
    for (auto& a : amplitudes) a /= s;
  }
  friend bool operator==(const DenseState&, const DenseState&) = default;
};

inline std::uint64_t site_mask(std::size_t n, std::size_t j) { return std::uint64_t{1} << (n - 1 - j); }

using Evaluator = std::function<Complex(const SpinConfig&)>;

inline void check_dense_size(std::size_t n) {
  if (n > kMaxDenseQubits) {
    throw CapabilityError("dense tabulation of " + std::to_string(n) + " qubits exceeds the limit of " +
                          std::to_string(kMaxDenseQubits));
  }
}

inline DenseState dense_from(const Evaluator& evaluator, std::size_t n) {
  check_dense_size(n);
  DenseState out(n);
  for (std::uint64_t i = 0; i < out.dimension(); ++i) out[i] = evaluator(SpinConfig::from_index(i, n));
  return out;
}

inline DenseState dense_from(const NqsNetwork& nqs) {
  return dense_from([&](const SpinConfig& v) { return nqs_amplitude(nqs, v); }, nqs.n_visible());
}

inline DenseState dense_from(const JastrowState& s) {
  return dense_from([&](const SpinConfig& v) { return jastrow_amplitude(s, v); }, s.size());
}

inline DenseState dense_from(const CftState& s) {
  return dense_from([&](const SpinConfig& v) { return s.amplitude(v); }, s.size());
}

inline Complex inner(const DenseState& a, const DenseState& b) {
  if (a.n != b.n) throw ArgumentError("states have different qubit counts");
  Complex s{};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |<a|b>|^2 / (<a|a><b|b>).
inline double overlap(const DenseState& a, const DenseState& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) throw NumericalError("overlap with a zero vector");
  return std::norm(inner(a, b)) / (na * na * nb * nb);
}

struct Comparison {
  bool equal = false;
  /// max_i |a_i - scale b_i| / max_i |a_i|.
  double deviation = 0;
  Complex scale{};
  /// Index of the largest deviation.
  std::uint64_t worst_index = 0;
};

/// Checks a = lambda b for some nonzero lambda, fixed at the largest entry of a.
inline Comparison proportional_equal(const DenseState& a, const DenseState& b, double tol) {
  if (a.n != b.n) throw ArgumentError("states have different qubit counts");
  std::size_t pivot = 0;
  double amax = 0, bmax = 0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (std::abs(a[i]) > amax) {
      amax = std::abs(a[i]);
      pivot = i;
    }
    bmax = std::max(bmax, std::abs(b[i]));
  }
  if (amax == 0 || bmax == 0) throw NumericalError("proportionality test with a zero vector");
  Comparison out;
  if (b[pivot] == Complex{}) {
    out.deviation = 1.0;
    out.worst_index = pivot;
    return out;
  }
  out.scale = a[pivot] / b[pivot];
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const double d = std::abs(a[i] - out.scale * b[i]) / amax;
    if (d > out.deviation || !std::isfinite(d)) {
      out.deviation = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
      out.worst_index = i;
    }
  }
  out.equal = out.deviation < tol;
  return out;
}

// ---------------------------------------------------------------------------
// Gates on dense vectors.

/// new(v) = sum_v' Q(v, v') old(v') on site j.
inline DenseState apply_gate_dense(const DenseState& s, std::size_t j, const Mat2& q) {
  if (j >= s.n) throw ArgumentError("site " + std::to_string(j) + " out of range");
  DenseState out = s;
  const std::uint64_t m = site_mask(s.n, j);
  for (std::uint64_t i = 0; i < s.dimension(); ++i) {
    if (i & m) continue;
    const Complex a0 = s[i], a1 = s[i | m];
    out[i] = q(0, 0) * a0 + q(0, 1) * a1;
    out[i | m] = q(1, 0) * a0 + q(1, 1) * a1;
  }
  return out;
}

inline DenseState apply_cz_dense(DenseState s, std::size_t j, std::size_t k) {
  if (j >= s.n || k >= s.n || j == k) throw ArgumentError("bad controlled-Z qubits");
  const std::uint64_t m = site_mask(s.n, j) | site_mask(s.n, k);
  for (std::uint64_t i = 0; i < s.dimension(); ++i)
    if ((i & m) == m) s[i] = -s[i];
  return s;
}

/// T|q> = i^(phase + #Y) (-1)^(q . z) |q xor x>.
inline DenseState apply_pauli_dense(const DenseState& s, const PauliString& p) {
  if (p.size() != s.n) throw ArgumentError("Pauli string length does not match state");
  std::uint64_t xmask = 0, zmask = 0;
  int ys = 0;
  for (std::size_t j = 0; j < s.n; ++j) {
    if (p.x[j]) xmask |= site_mask(s.n, j);
    if (p.z[j]) zmask |= site_mask(s.n, j);
    if (p.x[j] && p.z[j]) ++ys;
  }
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = ipow[(p.phase + ys) & 3];
  DenseState out(s.n);
  for (std::uint64_t i = 0; i < s.dimension(); ++i) {
    const double sign = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
    out[i ^ xmask] = global * sign * s[i];
  }
  return out;
}

/// The +1 eigenvector of every generator, normalised, obtained by projecting
/// a pseudo-random vector with prod_a (1 + T_a) / 2.
inline DenseState stabilizer_dense_state(const CheckMatrix& cm, std::uint64_t seed = 12345) {
  cm.validate();
  check_dense_size(cm.qubits());
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    DenseState psi(cm.qubits());
    for (auto& a : psi.amplitudes) a = rng.complex_uniform(-1.0, 1.0);
    for (const auto& t : cm.generators()) {
      const DenseState tp = apply_pauli_dense(psi, t);
      for (std::size_t i = 0; i < psi.dimension(); ++i) psi[i] = 0.5 * (psi[i] + tp[i]);
    }
    if (psi.norm() > 1e-8) {
      psi.normalize();
      return psi;
    }
  }
  throw NumericalError("stabilizer projection kept returning a vanishing vector");
}

struct StabilizerPair {
  CheckMatrix tableau;
  DenseState state;
};

/// Random H/S/CZ circuit of `depth` gates (default 3 n^2) applied to |0...0>
/// both as a tableau and as a dense vector.
inline StabilizerPair random_stabilizer(std::size_t n, std::uint64_t seed, std::optional<std::size_t> depth = {}) {
  if (n == 0 || n > 10) throw ArgumentError("random_stabilizer supports 1 <= n <= 10");
  Rng rng(seed);
  StabilizerPair out{CheckMatrix(n), DenseState(n)};
  out.state[0] = 1.0;
  const std::size_t count = depth.value_or(3 * n * n);
  for (std::size_t g = 0; g < count; ++g) {
    const std::uint64_t kind = n > 1 ? rng.below(3) : rng.below(2);
    const std::size_t j = rng.below(n);
    if (kind == 0) {
      out.tableau.apply_h(j);
      out.state = apply_gate_dense(out.state, j, gates::h());
    } else if (kind == 1) {
      out.tableau.apply_s(j);
      out.state = apply_gate_dense(out.state, j, gates::s());
    } else {
      std::size_t k = rng.below(n - 1);
      if (k >= j) ++k;
      out.tableau.apply_cz(j, k);
      out.state = apply_cz_dense(std::move(out.state), j, k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// XXZ chain.

/// Basis states of n spins with zero magnetisation, as sorted indices.
inline std::vector<std::uint64_t> zero_magnetization_sector(std::size_t n) {
  if (n % 2 != 0) throw ArgumentError("zero-magnetisation sector needs an even number of sites");
  check_dense_size(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
    if (static_cast<std::size_t>(std::popcount(i)) == n / 2) out.push_back(i);
  return out;
}

/// sum_j (X_j X_{j+1} + Y_j Y_{j+1} + delta Z_j Z_{j+1}) on a periodic chain,
/// restricted to the zero-magnetisation sector. With `gauge` the odd sites
/// (1-based) are conjugated by Z, which flips the sign of the hopping.
class XxzSectorHamiltonian {
 public:
  XxzSectorHamiltonian(std::size_t n, double delta, bool gauge)
      : n_(n), delta_(delta), hop_(gauge ? -2.0 : 2.0), basis_(zero_magnetization_sector(n)) {
    if (n < 2) throw ArgumentError("XXZ chain needs at least two sites");
  }

  std::size_t dimension() const { return basis_.size(); }
  const std::vector<std::uint64_t>& basis() const { return basis_; }

  std::size_t index_of(std::uint64_t state) const {
    return static_cast<std::size_t>(std::lower_bound(basis_.begin(), basis_.end(), state) - basis_.begin());
  }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.setZero(x.size());
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      const std::uint64_t s = basis_[r];
      double diag = 0;
      for (std::size_t j = 0; j < n_; ++j) {
        const std::uint64_t a = site_mask(n_, j), b = site_mask(n_, (j + 1) % n_);
        const bool parallel = ((s & a) != 0) == ((s & b) != 0);
        if (parallel) {
          diag += delta_;
        } else {
          diag -= delta_;
          y[static_cast<Eigen::Index>(index_of(s ^ a ^ b))] += hop_ * x[static_cast<Eigen::Index>(r)];
        }
      }
      y[static_cast<Eigen::Index>(r)] += diag * x[static_cast<Eigen::Index>(r)];
    }
  }

 private:
  std::size_t n_;
  double delta_;
  double hop_;
  std::vector<std::uint64_t> basis_;
};

struct GroundState {
  DenseState state;
  double energy = 0;
  double residual = 0;
};

/// Lowest eigenpair of a real symmetric operator by restarted Lanczos with
/// full reorthogonalisation.
template <typename Apply>
std::pair<double, Eigen::VectorXd> lanczos_lowest(const Apply& apply, Eigen::VectorXd start, double tol = 1e-12,
                                                  int max_restarts = 50, Eigen::Index krylov = 120) {
  const Eigen::Index dim = start.size();
  krylov = std::min(krylov, dim);
  Eigen::VectorXd x = start.normalized();
  double lambda = 0;
  Eigen::VectorXd w(dim), hx(dim);
  for (int restart = 0; restart <= max_restarts; ++restart) {
    Eigen::MatrixXd q(dim, krylov);
    std::vector<double> alpha, beta;
    q.col(0) = x;
    Eigen::Index k = 0;
    for (; k < krylov; ++k) {
      apply(q.col(k), w);
      alpha.push_back(q.col(k).dot(w));
      for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
      const double b = w.norm();
      if (k + 1 == krylov || b < 1e-13) {
        ++k;
        break;
      }
      beta.push_back(b);
      q.col(k + 1) = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    lambda = eig.eigenvalues()[0];
    x = (q.leftCols(k) * eig.eigenvectors().col(0)).normalized();
    apply(x, hx);
    const double residual = (hx - lambda * x).norm();
    if (residual <= tol * std::max(1.0, std::abs(lambda))) return {lambda, x};
  }
  throw NumericalError("Lanczos did not converge to the requested residual");
}

/// Ground state of the periodic XXZ chain in the zero-magnetisation sector.
/// With gauge the amplitudes are non-negative; without, they carry the sign
/// prod over odd sites (1-based) of v_j.
inline GroundState xxz_ground_state(std::size_t n, double delta, bool gauge) {
  if (n % 2 != 0) throw ArgumentError("XXZ ground state needs an even chain length");
  if (n == 0 || n > 16) throw ArgumentError("XXZ ground state supports 2 <= n <= 16");
  // Solve in the stoquastic frame, where the sector ground state is positive.
  const XxzSectorHamiltonian h(n, delta, true);
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  Rng rng(2024);
  Eigen::VectorXd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = 0.5 + rng.uniform();
  auto [energy, x] = lanczos_lowest([&](const auto& in, Eigen::VectorXd& out) { h.apply(in, out); }, start);
  Eigen::Index big = 0;
  x.cwiseAbs().maxCoeff(&big);
  if (x[big] < 0) x = -x;

  GroundState out;
  out.energy = energy;
  out.state = DenseState(n);
  for (std::size_t r = 0; r < h.basis().size(); ++r) {
    const std::uint64_t s = h.basis()[r];
    double sign = 1.0;
    if (!gauge) {
      for (std::size_t j = 0; j < n; j += 2)
        if (s & site_mask(n, j)) sign = -sign;
    }
    out.state[s] = sign * x[static_cast<Eigen::Index>(r)];
  }
  Eigen::VectorXd hx;
  h.apply(x, hx);
  out.residual = (hx - energy * x).norm();
  return out;
}

/// 1 - O between the softened extensive network of the CFT state and the
/// exact CFT state, both restricted to the zero-magnetisation sector.
inline double cft_softening_infidelity(std::size_t n, double alpha, double softening) {
  const CftState cft(n, alpha);
  const NqsNetwork nqs = extensive_nqs(cft.jastrow(), ExtensiveMode::softened(softening));
  const DenseState exact = dense_from(cft);
  const DenseState approx = dense_from(
      [&](const SpinConfig& v) { return v.magnetization() == 0 ? nqs_amplitude(nqs, v) : Complex{}; }, n);
  return 1.0 - overlap(exact, approx);
}

// ---------------------------------------------------------------------------
// Random instances.

/// Connected graph on n vertices: a random spanning tree plus each remaining
/// pair with probability p.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t i = 1; i < n; ++i) edges.push_back(make_edge(order[i], order[rng.below(i)]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.coin(p)) edges.push_back({a, b});
  return Graph(n, edges);
}

/// Graph with each pair present independently with probability p.
inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.coin(p)) edges.push_back({a, b});
  return Graph(n, edges);
}

inline Complex random_complex(Rng& rng, double scale) {
  return rng.complex_uniform(-scale, scale);
}

inline JastrowState random_jastrow(const Graph& g, Rng& rng, double scale = 0.5) {
  std::vector<Complex> c(g.order());
  for (auto& x : c) x = random_complex(rng, scale);
  std::map<Edge, Complex> v;
  for (const auto& e : g.edges()) v[e] = random_complex(rng, scale);
  return JastrowState(g, std::move(c), v);
}

/// Coupling with entries of modulus in [0.5, 1.5] and random phases.
inline Mat2 random_zero_free_matrix(Rng& rng) {
  Mat2 m;
  for (auto& x : m.m) x = std::polar(rng.uniform(0.5, 1.5), rng.uniform(-std::numbers::pi, std::numbers::pi));
  return m;
}

inline Mat2 random_matrix(Rng& rng) {
  Mat2 m;
  for (auto& x : m.m) x = random_complex(rng, 1.0);
  return m;
}

/// n visible and m hidden units; each hidden unit couples to each site
/// with probability p (at least one site) through a zero-free matrix.
inline NqsNetwork random_nqs(std::size_t n, std::size_t m, double p, Rng& rng) {
  std::vector<HiddenUnit> hidden(m);
  for (auto& unit : hidden) {
    for (std::size_t j = 0; j < n; ++j)
      if (rng.coin(p)) unit.couplings.emplace(j, random_zero_free_matrix(rng));
    if (unit.couplings.empty()) unit.couplings.emplace(rng.below(n), random_zero_free_matrix(rng));
  }
  std::vector<DiagFactor> diag(n);
  for (auto& d : diag) {
    const Mat2 r = random_zero_free_matrix(rng);
    d = {r.m[0], r.m[1]};
  }
  return NqsNetwork(n, std::move(hidden), std::move(diag));
}

}  // namespace cnqs

#endif  // CNQS_ORACLE_HPP
