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

#ifndef CNQS_JASTROW_HPP
#define CNQS_JASTROW_HPP

#include <cmath>
#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cnqs/errors.hpp"
#include "cnqs/graph.hpp"
#include "cnqs/nqs.hpp"

namespace cnqs {

/// psi(v) = exp(sum_j c_j v_j + sum_{(s,t) in E} V_st v_s v_t).
class JastrowState {
 public:
  JastrowState() = default;

  /// `interactions` may omit edges (their V is zero) but must not name
  /// pairs outside the edge set.
  JastrowState(Graph graph, std::vector<Complex> biases, const std::map<Edge, Complex>& interactions = {})
      : graph_(std::move(graph)), c_(std::move(biases)), v_(graph_.edge_count(), Complex{}) {
    if (c_.empty()) c_.assign(graph_.order(), Complex{});
    if (c_.size() != graph_.order()) {
      throw ArgumentError("expected " + std::to_string(graph_.order()) + " biases, got " +
                          std::to_string(c_.size()));
    }
    const auto& edges = graph_.edges();
    for (const auto& [key, value] : interactions) {
      const Edge e = make_edge(key.s, key.t);
      const auto it = std::lower_bound(edges.begin(), edges.end(), e);
      if (it == edges.end() || *it != e) {
        throw ValidationError("interaction V(" + std::to_string(e.s) + "," + std::to_string(e.t) +
                              ") is not on an edge of the graph");
      }
      v_[static_cast<std::size_t>(it - edges.begin())] = value;
    }
  }

  const Graph& graph() const { return graph_; }
  std::size_t size() const { return graph_.order(); }
  const std::vector<Complex>& biases() const { return c_; }
  Complex bias(std::size_t j) const { return c_.at(j); }
  /// V values aligned with graph().edges().
  const std::vector<Complex>& edge_interactions() const { return v_; }

  Complex interaction(Vertex a, Vertex b) const {
    const Edge e = make_edge(a, b);
    const auto& edges = graph_.edges();
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) return {};
    return v_[static_cast<std::size_t>(it - edges.begin())];
  }

 private:
  Graph graph_;
  std::vector<Complex> c_;
  std::vector<Complex> v_;
};

inline Complex jastrow_energy(const JastrowState& s, const SpinConfig& v) {
  if (v.size() != s.size()) throw ArgumentError("configuration length does not match Jastrow state");
  Complex energy{};
  for (std::size_t j = 0; j < v.size(); ++j) energy += s.bias(j) * static_cast<double>(v[j]);
  const auto& edges = s.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    energy += s.edge_interactions()[k] * static_cast<double>(v[edges[k].s] * v[edges[k].t]);
  return energy;
}

inline Complex jastrow_amplitude(const JastrowState& s, const SpinConfig& v) {
  const Complex energy = jastrow_energy(s, v);
  if (energy.real() > detail::kMaxExpArgument) {
    throw OverflowError("Jastrow amplitude overflows", std::abs(energy));
  }
  return std::exp(energy);
}

namespace detail {

inline std::vector<DiagFactor> bias_factors(const JastrowState& s) {
  std::vector<DiagFactor> diag(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) diag[j] = {std::exp(s.bias(j)), std::exp(-s.bias(j))};
  return diag;
}

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace detail

enum class SparseSolution { asymmetric, matrix_sqrt };

/// One hidden unit per edge, each coupled to the two endpoints, with
/// weights solving exp(V v_s v_t) ~ sum_h exp(w_s h v_s + w_t h v_t).
inline NqsNetwork sparse_nqs(const JastrowState& s, SparseSolution solution = SparseSolution::asymmetric) {
  const auto& edges = s.graph().edges();
  std::vector<HiddenUnit> hidden;
  hidden.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Complex v = s.edge_interactions()[k];
    Complex ws;
    Complex wt;
    if (solution == SparseSolution::asymmetric) {
      // sech^-1(z) = acosh(1/z), principal branch.
      const Complex p = std::acosh(std::exp(v));
      const Complex q = std::acosh(std::exp(-v));
      ws = 0.5 * (p + q);
      wt = 0.5 * (p - q);
    } else {
      const Complex t = std::tanh(v);
      if (!detail::finite(t) || std::abs(1.0 - t) < 1e-14) {
        throw ArgumentError("edge (" + std::to_string(edges[k].s) + "," + std::to_string(edges[k].t) +
                            "): tanh(V) = 1, the symmetric solution diverges");
      }
      ws = wt = std::atanh(std::sqrt(t));
    }
    if (!detail::finite(ws) || !detail::finite(wt)) {
      throw ArgumentError("edge (" + std::to_string(edges[k].s) + "," + std::to_string(edges[k].t) +
                          "): hidden-unit weight diverges");
    }
    HiddenUnit unit;
    unit.couplings.emplace(edges[k].s, Mat2::boltzmann(ws));
    unit.couplings.emplace(edges[k].t, Mat2::boltzmann(wt));
    hidden.push_back(std::move(unit));
  }
  return NqsNetwork(s.size(), std::move(hidden), detail::bias_factors(s));
}

/// Perfect hidden-visible correlation: identity coupling (exact) or a
/// Boltzmann coupling of weight S (softened).
struct ExtensiveMode {
  std::optional<double> softening;
  static ExtensiveMode exact() { return {}; }
  static ExtensiveMode softened(double s) { return {s}; }
};

/// M = N hidden units; unit i is locked onto visible i and couples to
/// every neighbour j with weight (V + V^T)_ij / 2.
inline NqsNetwork extensive_nqs(const JastrowState& s, ExtensiveMode mode = ExtensiveMode::exact()) {
  const std::size_t n = s.size();
  std::vector<HiddenUnit> hidden(n);
  for (std::size_t i = 0; i < n; ++i) {
    hidden[i].couplings.emplace(i, mode.softening ? Mat2::boltzmann(*mode.softening) : Mat2::identity());
  }
  const auto& edges = s.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Mat2 half = Mat2::boltzmann(0.5 * s.edge_interactions()[k]);
    hidden[edges[k].s].couplings.emplace(edges[k].t, half);
    hidden[edges[k].t].couplings.emplace(edges[k].s, half);
  }
  return NqsNetwork(n, std::move(hidden), detail::bias_factors(s));
}

/// Edge factor J(v_s, v_t) for the edge (s, t), s < t.
using EdgeFactorFn = std::function<Mat2(const Edge&)>;

/// graph2nqs on a correlator-product form: a hidden unit per cover vertex,
/// perfectly correlated with its visible unit, carrying the edge factors to
/// every neighbour not processed earlier in the cover.
inline NqsNetwork graph2nqs(const Graph& graph, std::vector<DiagFactor> visible_diag, const EdgeFactorFn& edge_factor,
                            const OrderedVertexCover& cover) {
  BitVector processed(graph.order());
  for (Vertex c : cover.vertices) {
    graph.check_vertex(c);
    if (processed[c]) throw ValidationError("vertex " + std::to_string(c) + " appears twice in the cover");
    processed.set(c);
  }
  if (const auto missing = uncovered_edge(graph, cover.vertices)) {
    throw ValidationError("cover misses edge (" + std::to_string(missing->s) + "," + std::to_string(missing->t) + ")");
  }

  BitVector earlier(graph.order());
  std::vector<HiddenUnit> hidden;
  hidden.reserve(cover.vertices.size());
  for (Vertex c : cover.vertices) {
    HiddenUnit unit;
    unit.couplings.emplace(c, Mat2::identity());
    for (Vertex l : neighborhood(graph, c)) {
      if (earlier[l]) continue;
      const Edge e = make_edge(c, l);
      const Mat2 j = edge_factor(e);
      // Rows of the coupling are indexed by the hidden value, which equals v_c.
      unit.couplings.emplace(l, c == e.s ? j : j.transposed());
    }
    earlier.set(c);
    hidden.push_back(std::move(unit));
  }
  return NqsNetwork(graph.order(), std::move(hidden), std::move(visible_diag));
}

/// graph2nqs for a Jastrow state: edge factors are exp(V_st v_s v_t) and
/// the biases sit in the visible diagonal factors.
inline NqsNetwork graph2nqs(const JastrowState& s, const OrderedVertexCover& cover) {
  return graph2nqs(
      s.graph(), detail::bias_factors(s), [&](const Edge& e) { return Mat2::boltzmann(s.interaction(e.s, e.t)); },
      cover);
}

/// Jastrow state with single-spin gates on (univalent) sites of its graph2nqs network.
struct VmjState {
  JastrowState base;
  std::map<std::size_t, Mat2> gates;
  OrderedVertexCover cover;
};

inline NqsNetwork vmj_nqs(const VmjState& s) {
  NqsNetwork nqs = graph2nqs(s.base, s.cover);
  for (const auto& [site, gate] : s.gates) nqs = absorb_gate(nqs, site, gate);
  return nqs;
}

/// Jastrow state from a chiral boson CFT for the XXZ chain:
/// delta(sum v) prod_{j odd} v_j prod_{j>k} |sin(pi (j-k) / N)|^{alpha v_j v_k}.
/// Odd refers to 1-based site labels.
class CftState {
 public:
  CftState(std::size_t n, double alpha) : n_(n), alpha_(alpha) {
    if (n == 0 || n % 2 != 0) throw ArgumentError("CFT state needs an even, positive number of sites");
  }

  std::size_t size() const { return n_; }
  double alpha() const { return alpha_; }

  Complex amplitude(const SpinConfig& v) const {
    if (v.size() != n_) throw ArgumentError("configuration length does not match CFT state");
    if (v.magnetization() != 0) return 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < n_; j += 2) sign *= v[j];
    double log_mag = 0.0;
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t j = k + 1; j < n_; ++j) log_mag += alpha_ * v[j] * v[k] * log_sin(j - k);
    return sign * std::exp(log_mag);
  }

  /// The same amplitudes, up to a global phase, on the zero-magnetisation
  /// sector, written as a Jastrow state on the complete graph. The Marshall
  /// sign is carried by biases -i pi/2 on even (0-based) sites; the delta constraint is
  /// left to the caller.
  JastrowState jastrow() const {
    std::vector<Complex> c(n_, Complex{});
    for (std::size_t j = 0; j < n_; j += 2) c[j] = Complex(0.0, -std::numbers::pi / 2);
    std::map<Edge, Complex> v;
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t j = k + 1; j < n_; ++j) v[{k, j}] = alpha_ * log_sin(j - k);
    return JastrowState(Graph::complete(n_), std::move(c), v);
  }

 private:
  double log_sin(std::size_t distance) const {
    return std::log(std::abs(std::sin(std::numbers::pi * static_cast<double>(distance) / static_cast<double>(n_))));
  }

  std::size_t n_;
  double alpha_;
};

}  // namespace cnqs

#endif  // CNQS_JASTROW_HPP
