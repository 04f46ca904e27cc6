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

#ifndef CNQS_STABILIZER_HPP
#define CNQS_STABILIZER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cnqs/bits.hpp"
#include "cnqs/errors.hpp"
#include "cnqs/graph.hpp"
#include "cnqs/jastrow.hpp"
#include "cnqs/nqs.hpp"

namespace cnqs {

/// i^phase times a tensor product of I, X, Y, Z. Per site the bits
/// (x, z) encode 00 -> I, 10 -> X, 11 -> Y, 01 -> Z.
struct PauliString {
  BitVector x;
  BitVector z;
  int phase = 0;  // exponent of i, mod 4

  PauliString() = default;
  explicit PauliString(std::size_t n) : x(n), z(n) {}

  std::size_t size() const { return x.size(); }

  /// Parses "+XZZI", "-YIZ", "XX" (sign optional).
  static PauliString parse(std::string_view text) {
    int phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      phase = text.front() == '-' ? 2 : 0;
      text.remove_prefix(1);
    }
    PauliString p(text.size());
    p.phase = phase;
    for (std::size_t j = 0; j < text.size(); ++j) {
      switch (text[j]) {
        case 'I': case '_': break;
        case 'X': p.x.set(j); break;
        case 'Y': p.x.set(j); p.z.set(j); break;
        case 'Z': p.z.set(j); break;
        default:
          throw ParseError(std::string("unexpected Pauli character '") + text[j] + "' in \"" + std::string(text) + "\"");
      }
    }
    return p;
  }

  char pauli(std::size_t j) const {
    static constexpr char table[4] = {'I', 'Z', 'X', 'Y'};
    return table[2 * x[j] + z[j]];
  }

  std::string str() const {
    std::string out;
    switch (phase & 3) {
      case 0: out = "+"; break;
      case 1: out = "+i"; break;
      case 2: out = "-"; break;
      default: out = "-i"; break;
    }
    for (std::size_t j = 0; j < size(); ++j) out += pauli(j);
    return out;
  }

  bool is_identity() const { return x.none() && z.none(); }

  /// Symplectic product: true when the two strings anticommute.
  friend bool anticommutes(const PauliString& a, const PauliString& b) { return dot(a.x, b.z) ^ dot(a.z, b.x); }

  /// Operator product a * b including the phase.
  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw ArgumentError("Pauli strings of different length");
    PauliString out = a;
    int phase = a.phase + b.phase;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const int x1 = a.x[j], z1 = a.z[j], x2 = b.x[j], z2 = b.z[j];
      if (x1 && z1) {
        phase += z2 - x2;
      } else if (x1) {
        phase += z2 * (2 * x2 - 1);
      } else if (z1) {
        phase += x2 * (1 - 2 * z2);
      }
    }
    out.x ^= b.x;
    out.z ^= b.z;
    out.phase = ((phase % 4) + 4) % 4;
    return out;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Stabilizer tableau: one Hermitian Pauli generator per row, the check
/// matrix [X | Z] plus sign bits s.
class CheckMatrix {
 public:
  CheckMatrix() = default;

  /// Tableau of |0...0>: generators Z_1, ..., Z_n.
  explicit CheckMatrix(std::size_t n) : n_(n) {
    for (std::size_t a = 0; a < n; ++a) {
      PauliString p(n);
      p.z.set(a);
      rows_.push_back(std::move(p));
    }
  }

  /// Rows taken as given; call validate() before treating the result as a state.
  explicit CheckMatrix(std::vector<PauliString> rows) : rows_(std::move(rows)) {
    n_ = rows_.empty() ? 0 : rows_.front().size();
    for (const auto& r : rows_) {
      if (r.size() != n_) throw ArgumentError("generators have inconsistent lengths");
      if (r.phase != 0 && r.phase != 2) throw ArgumentError("generator " + r.str() + " is not Hermitian");
    }
  }

  static CheckMatrix from_strings(std::span<const std::string> generators) {
    std::vector<PauliString> rows;
    for (const auto& g : generators) rows.push_back(PauliString::parse(g));
    return CheckMatrix(std::move(rows));
  }
  static CheckMatrix from_strings(std::initializer_list<std::string> generators) {
    return from_strings(std::span<const std::string>(generators.begin(), generators.size()));
  }

  /// Builds a tableau from an over-complete generating set, dropping rows
  /// that are products of earlier ones. Throws if a dependent row carries a
  /// sign incompatible with the earlier rows (the set would stabilize nothing).
  static CheckMatrix from_generators(std::span<const std::string> generators) {
    std::vector<PauliString> kept;
    std::vector<std::pair<std::size_t, PauliString>> basis;  // (pivot, reduced row)
    for (const auto& text : generators) {
      const PauliString original = PauliString::parse(text);
      PauliString reduced = original;
      for (const auto& [pivot, row] : basis)
        if (bit_at(reduced, pivot)) reduced = reduced * row;
      if (reduced.is_identity()) {
        if (reduced.phase != 0) throw ValidationError("generator " + text + " contradicts the earlier generators");
        continue;
      }
      const std::size_t pivot = first_bit(reduced);
      for (auto& [p, row] : basis)
        if (bit_at(row, pivot)) row = row * reduced;
      basis.emplace_back(pivot, reduced);
      kept.push_back(original);
    }
    return CheckMatrix(std::move(kept));
  }

  std::size_t qubits() const { return n_; }
  std::size_t rows() const { return rows_.size(); }
  const PauliString& row(std::size_t a) const { return rows_.at(a); }
  const std::vector<PauliString>& generators() const { return rows_; }

  bool xbit(std::size_t a, std::size_t j) const { return rows_.at(a).x[j]; }
  bool zbit(std::size_t a, std::size_t j) const { return rows_.at(a).z[j]; }
  bool sign(std::size_t a) const { return rows_.at(a).phase == 2; }

  /// Description of the first violated invariant, if any.
  std::optional<std::string> violation() const {
    if (rows_.size() != n_) {
      return "tableau has " + std::to_string(rows_.size()) + " generators for " + std::to_string(n_) + " qubits";
    }
    for (std::size_t a = 0; a < rows_.size(); ++a)
      for (std::size_t b = a + 1; b < rows_.size(); ++b)
        if (anticommutes(rows_[a], rows_[b])) {
          return "generators " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " anticommute";
        }
    if (rank() != rows_.size()) return "generators are linearly dependent";
    return std::nullopt;
  }
  bool is_valid() const { return !violation().has_value(); }
  void validate() const {
    if (auto why = violation()) throw ValidationError("invalid stabilizer tableau: " + *why);
  }

  /// GF(2) rank of the rows as length-2n vectors.
  std::size_t rank() const {
    std::vector<BitVector> rows;
    for (const auto& r : rows_) {
      BitVector v(2 * n_);
      for (std::size_t j = 0; j < n_; ++j) {
        v.set(j, r.x[j]);
        v.set(n_ + j, r.z[j]);
      }
      rows.push_back(std::move(v));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n_ && rank < rows.size(); ++col) {
      std::size_t p = rank;
      while (p < rows.size() && !rows[p][col]) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[rank], rows[p]);
      for (std::size_t a = 0; a < rows.size(); ++a)
        if (a != rank && rows[a][col]) rows[a] ^= rows[rank];
      ++rank;
    }
    return rank;
  }

  // Conjugation updates T -> U T U^dagger for every generator.

  void apply_h(std::size_t j) {
    check_qubit(j);
    for (auto& r : rows_) {
      if (r.x[j] && r.z[j]) r.phase ^= 2;
      const bool x = r.x[j];
      r.x.set(j, r.z[j]);
      r.z.set(j, x);
    }
  }
  void apply_s(std::size_t j) {
    check_qubit(j);
    for (auto& r : rows_) {
      if (r.x[j] && r.z[j]) r.phase ^= 2;
      if (r.x[j]) r.z.flip(j);
    }
  }
  void apply_s_dag(std::size_t j) {
    check_qubit(j);
    for (auto& r : rows_) {
      if (r.x[j] && !r.z[j]) r.phase ^= 2;
      if (r.x[j]) r.z.flip(j);
    }
  }
  void apply_z(std::size_t j) {
    check_qubit(j);
    for (auto& r : rows_)
      if (r.x[j]) r.phase ^= 2;
  }
  void apply_x(std::size_t j) {
    check_qubit(j);
    for (auto& r : rows_)
      if (r.z[j]) r.phase ^= 2;
  }
  void apply_cz(std::size_t j, std::size_t k) {
    check_qubit(j);
    check_qubit(k);
    if (j == k) throw ArgumentError("controlled-Z needs two distinct qubits");
    for (auto& r : rows_) {
      const bool xj = r.x[j], zj = r.z[j], xk = r.x[k], zk = r.z[k];
      if (xj && xk && (zj ^ zk)) r.phase ^= 2;
      if (xk) r.z.flip(j);
      if (xj) r.z.flip(k);
    }
  }

  /// Generator a becomes T_a T_b with its sign fixed by the Pauli algebra.
  void row_add(std::size_t a, std::size_t b) {
    if (a == b) throw ArgumentError("row_add needs two different rows");
    PauliString product = rows_.at(a) * rows_.at(b);
    if (product.phase & 1) {
      throw ValidationError("rows " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " anticommute");
    }
    rows_[a] = std::move(product);
  }

  void swap_rows(std::size_t a, std::size_t b) { std::swap(rows_.at(a), rows_.at(b)); }

  /// Relabels qubits: new qubit p is old qubit order[p].
  void permute_qubits(std::span<const std::size_t> order) {
    if (order.size() != n_) throw ArgumentError("permutation has the wrong length");
    for (auto& r : rows_) {
      PauliString q(n_);
      q.phase = r.phase;
      for (std::size_t p = 0; p < n_; ++p) {
        q.x.set(p, r.x[order[p]]);
        q.z.set(p, r.z[order[p]]);
      }
      r = std::move(q);
    }
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (const auto& r : rows_) out.push_back(r.str());
    return out;
  }

  friend bool operator==(const CheckMatrix& a, const CheckMatrix& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }

 private:
  static bool bit_at(const PauliString& p, std::size_t k) {
    const std::size_t n = p.size();
    return k < n ? p.x[k] : p.z[k - n];
  }
  static std::size_t first_bit(const PauliString& p) {
    for (std::size_t k = 0; k < 2 * p.size(); ++k)
      if (bit_at(p, k)) return k;
    return 2 * p.size();
  }
  void check_qubit(std::size_t j) const {
    if (j >= n_) throw ArgumentError("qubit " + std::to_string(j) + " out of range");
  }

  std::size_t n_ = 0;
  std::vector<PauliString> rows_;
};

inline CheckMatrix apply_h(CheckMatrix cm, std::size_t j) {
  cm.apply_h(j);
  return cm;
}
inline CheckMatrix apply_s(CheckMatrix cm, std::size_t j) {
  cm.apply_s(j);
  return cm;
}
inline CheckMatrix apply_cz(CheckMatrix cm, std::size_t j, std::size_t k) {
  cm.apply_cz(j, k);
  return cm;
}
inline CheckMatrix row_add(CheckMatrix cm, std::size_t a, std::size_t b) {
  cm.row_add(a, b);
  return cm;
}

// ---------------------------------------------------------------------------
// Reduction to a graph state.

namespace gates {
inline Mat2 h() {
  const double r = 1.0 / std::numbers::sqrt2;
  return Mat2::make(r, r, r, -r);
}
inline Mat2 s() { return Mat2::diagonal(1.0, Complex(0, 1)); }
inline Mat2 s_dag() { return Mat2::diagonal(1.0, Complex(0, -1)); }
inline Mat2 z() { return Mat2::diagonal(1.0, -1.0); }
inline Mat2 x() { return Mat2::make(0, 1, 1, 0); }
}  // namespace gates

struct CliffordGate {
  /// Product of gate names, rightmost applied first ("H Z" = Z then H).
  std::string name = "I";
  Mat2 matrix = Mat2::identity();
  bool is_identity() const { return name == "I"; }
};

/// Single-qubit Cliffords, one per qubit, plus the column permutation used
/// while reducing (permutation[p] = original qubit at reduced position p).
struct LocalCliffordLayer {
  std::vector<CliffordGate> gates;
  std::vector<std::size_t> permutation;
};

struct GraphStateForm {
  Graph graph;
  /// Gates taking the graph state to the input stabilizer state.
  LocalCliffordLayer inverse_layer;
  /// Qubits that received Hadamards; independent in `graph`.
  std::vector<Vertex> hadamard_sites;
  /// Rank of the X block.
  std::size_t x_rank = 0;
};

/// Maps a stabilizer tableau to a locally Clifford-equivalent graph state:
/// Gauss-Jordan on X (pivot columns first), elimination of the Z block of
/// the pure-Z rows, H on the non-pivot qubits, S where a Y sits on the
/// diagonal, Z to clear signs.
inline GraphStateForm to_graph_state(const CheckMatrix& input) {
  input.validate();
  CheckMatrix w = input;
  const std::size_t n = w.qubits();

  // Reduced row echelon form of the X block.
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free_columns;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = r;
    while (p < n && !w.xbit(p, col)) ++p;
    if (p == n) {
      free_columns.push_back(col);
      continue;
    }
    w.swap_rows(r, p);
    for (std::size_t a = 0; a < n; ++a)
      if (a != r && w.xbit(a, col)) w.row_add(a, r);
    pivots.push_back(col);
    ++r;
  }
  std::vector<std::size_t> order = pivots;
  order.insert(order.end(), free_columns.begin(), free_columns.end());
  w.permute_qubits(order);

  // Pure-Z rows r..n-1: make their trailing Z block the identity, then use
  // them to clear the trailing Z block of the first r rows.
  for (std::size_t c = r; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !w.zbit(p, c)) ++p;
    if (p == n) throw ValidationError("Z block of the pure-Z generators is singular");
    w.swap_rows(c, p);
    for (std::size_t a = r; a < n; ++a)
      if (a != c && w.zbit(a, c)) w.row_add(a, c);
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t c = r; c < n; ++c)
      if (w.zbit(a, c)) w.row_add(a, c);

  std::vector<bool> hadamard(n, false), phase(n, false), flip(n, false);
  for (std::size_t p = r; p < n; ++p) {
    w.apply_h(p);
    hadamard[p] = true;
  }
  for (std::size_t p = 0; p < r; ++p) {
    if (w.zbit(p, p)) {
      w.apply_s(p);
      phase[p] = true;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (w.sign(p)) {
      w.apply_z(p);
      flip[p] = true;
    }
  }

  // The result must be [1 | theta] with theta symmetric, zero diagonal, signs clear.
  for (std::size_t a = 0; a < n; ++a) {
    if (w.sign(a) || w.zbit(a, a)) throw std::logic_error("graph-state reduction left a sign or self-loop");
    for (std::size_t j = 0; j < n; ++j) {
      if (w.xbit(a, j) != (a == j) || w.zbit(a, j) != w.zbit(j, a)) {
        throw std::logic_error("graph-state reduction did not reach the [1 | theta] form");
      }
    }
  }

  GraphStateForm out;
  out.x_rank = r;
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (w.zbit(a, b)) edges.push_back(make_edge(order[a], order[b]));
  out.graph = Graph(n, edges);

  out.inverse_layer.permutation = order;
  out.inverse_layer.gates.assign(n, CliffordGate{});
  for (std::size_t p = 0; p < n; ++p) {
    // Forward gates on position p were H or S, then Z; the inverse applies
    // Z first, then S^dagger or H.
    std::string name;
    Mat2 m = Mat2::identity();
    if (hadamard[p]) {
      name = "H";
      m = gates::h();
    } else if (phase[p]) {
      name = "S†";
      m = gates::s_dag();
    }
    if (flip[p]) {
      name += name.empty() ? "Z" : " Z";
      m = m * gates::z();
    }
    if (!name.empty()) out.inverse_layer.gates[order[p]] = CliffordGate{name, m};
    if (hadamard[p]) out.hadamard_sites.push_back(order[p]);
  }
  std::sort(out.hadamard_sites.begin(), out.hadamard_sites.end());
  if (!is_independent_set(out.graph, out.hadamard_sites)) {
    throw std::logic_error("Hadamard sites are not independent in the extracted graph");
  }
  return out;
}

struct StabilizerNqs {
  GraphStateForm form;
  OrderedVertexCover cover;
  NqsNetwork nqs;
};

/// Graph state with Hadamard-type edge matrices built by graph2nqs, the
/// non-isolated Hadamard sites leading the ordered cover, then the inverse
/// local Cliffords absorbed site by site.
inline StabilizerNqs stabilizer_to_vmj(const CheckMatrix& cm, const SearchOptions& options = {}) {
  StabilizerNqs out;
  out.form = to_graph_state(cm);
  const Graph& g = out.form.graph;
  for (Vertex v : out.form.hadamard_sites)
    if (g.degree(v) > 0) out.cover.vertices.push_back(v);
  const Graph rest = g.without_vertices(out.form.hadamard_sites);
  const auto tail = best_effort_vertex_cover(rest, options);
  out.cover.vertices.insert(out.cover.vertices.end(), tail.vertices.begin(), tail.vertices.end());

  NqsNetwork nqs = graph2nqs(g, std::vector<DiagFactor>(g.order(), DiagFactor{1.0, 1.0}),
                             [](const Edge&) { return Mat2::hadamard_type(); }, out.cover);
  for (std::size_t q = 0; q < g.order(); ++q) {
    const auto& gate = out.form.inverse_layer.gates[q];
    if (!gate.is_identity()) nqs = absorb_gate(nqs, q, gate.matrix);
  }
  out.nqs = std::move(nqs);
  return out;
}

inline NqsNetwork stabilizer_to_vmj_nqs(const CheckMatrix& cm, const SearchOptions& options = {}) {
  return stabilizer_to_vmj(cm, options).nqs;
}

// ---------------------------------------------------------------------------
// Named states.

/// Steane code generators plus Y^{x7}: the state |0_L> - i|1_L>.
inline CheckMatrix steane_state() {
  return CheckMatrix::from_strings({"+IIIXXXX", "+IXXIIXX", "+XIXIXIX", "+IIIZZZZ", "+IZZIIZZ", "+ZIZIZIZ",
                                    "+YYYYYYY"});
}

/// [[5,1,3]] code generators plus logical Z: the state |0_L>.
inline CheckMatrix five_qubit_code_state() {
  return CheckMatrix::from_strings({"+XZZXI", "+IXZZX", "+XIXZZ", "+ZXIXZ", "+ZZZZZ"});
}

/// Shor code generators plus logical X (Z on every qubit): |0_L> + |1_L>.
inline CheckMatrix shor_state() {
  return CheckMatrix::from_strings({"+ZZIIIIIII", "+IZZIIIIII", "+IIIZZIIII", "+IIIIZZIII", "+IIIIIIZZI",
                                    "+IIIIIIIZZ", "+XXXXXXIII", "+IIIXXXXXX", "+ZZZZZZZZZ"});
}

/// Qubit labels of the 2L^2 bonds of an L x L periodic square lattice:
/// horizontal bond from vertex (x,y) is y*L + x, vertical bond is L^2 + y*L + x.
struct ToricLattice {
  std::size_t L;

  std::size_t qubits() const { return 2 * L * L; }
  std::size_t horizontal(std::size_t x, std::size_t y) const { return (y % L) * L + (x % L); }
  std::size_t vertical(std::size_t x, std::size_t y) const { return L * L + (y % L) * L + (x % L); }

  /// Four bonds meeting at vertex (x, y).
  std::array<std::size_t, 4> star(std::size_t x, std::size_t y) const {
    return {horizontal(x, y), horizontal(x + L - 1, y), vertical(x, y), vertical(x, y + L - 1)};
  }
  /// Four bonds around the plaquette with lower-left corner (x, y).
  std::array<std::size_t, 4> plaquette(std::size_t x, std::size_t y) const {
    return {horizontal(x, y), horizontal(x, y + 1), vertical(x, y), vertical(x + 1, y)};
  }
};

/// Equal superposition of all closed-loop configurations: Z stars, X
/// plaquettes and two X Wilson loops, with redundant rows removed.
inline CheckMatrix toric_state(std::size_t L) {
  if (L < 2) throw ArgumentError("toric lattice needs L >= 2");
  const ToricLattice lattice{L};
  const std::size_t n = lattice.qubits();
  std::vector<std::string> generators;
  auto make = [&](char pauli, auto sites) {
    std::string s(n, 'I');
    for (std::size_t q : sites) s[q] = pauli;
    generators.push_back("+" + s);
  };
  for (std::size_t y = 0; y < L; ++y)
    for (std::size_t x = 0; x < L; ++x) make('Z', lattice.star(x, y));
  for (std::size_t y = 0; y < L; ++y)
    for (std::size_t x = 0; x < L; ++x) make('X', lattice.plaquette(x, y));
  std::vector<std::size_t> loop_x, loop_y;
  for (std::size_t k = 0; k < L; ++k) {
    loop_x.push_back(lattice.horizontal(k, 0));
    loop_y.push_back(lattice.vertical(0, k));
  }
  make('X', loop_x);
  make('X', loop_y);
  return CheckMatrix::from_generators(generators);
}

/// One hidden unit per star with Hadamard-type couplings: each correlator
/// is 2 when the star has an even number of down spins and 0 otherwise.
inline NqsNetwork toric_direct_nqs(std::size_t L) {
  if (L < 2) throw ArgumentError("toric lattice needs L >= 2");
  const ToricLattice lattice{L};
  std::vector<HiddenUnit> hidden;
  for (std::size_t y = 0; y < L; ++y) {
    for (std::size_t x = 0; x < L; ++x) {
      HiddenUnit unit;
      for (std::size_t q : lattice.star(x, y)) unit.couplings.emplace(q, Mat2::hadamard_type());
      hidden.push_back(std::move(unit));
    }
  }
  return NqsNetwork(lattice.qubits(), std::move(hidden));
}

/// "steane", "513", "shor" or "toric:L".
inline CheckMatrix fixture(std::string_view name) {
  if (name == "steane") return steane_state();
  if (name == "513") return five_qubit_code_state();
  if (name == "shor") return shor_state();
  if (name.starts_with("toric:")) {
    const std::string digits(name.substr(6));
    std::size_t used = 0;
    unsigned long L = 0;
    try {
      L = std::stoul(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) throw ArgumentError("bad toric size in fixture name \"" + std::string(name) + "\"");
    return toric_state(L);
  }
  throw ArgumentError("unknown fixture \"" + std::string(name) + "\" (expected steane, 513, shor or toric:L)");
}

}  // namespace cnqs

#endif  // CNQS_STABILIZER_HPP
