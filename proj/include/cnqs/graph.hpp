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

#ifndef CNQS_GRAPH_HPP
#define CNQS_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnqs/bits.hpp"
#include "cnqs/errors.hpp"

namespace cnqs {

using Vertex = std::size_t;

/// Unordered vertex pair stored with first < second.
struct Edge {
  Vertex s;
  Vertex t;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Undirected simple graph over the label space {0, ..., order()-1}.
///
/// Vertices may be removed while keeping labels stable, so subgraphs
/// produced by pruning still refer to the labels of the parent graph.
/// Values are immutable once built.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n, std::span<const Edge> edges = {})
      : n_(n), present_(n), adjacency_(n, BitVector(n)) {
    for (Vertex v = 0; v < n; ++v) present_.set(v);
    std::set<Edge> unique;
    for (const Edge& e : edges) {
      if (e.s >= n || e.t >= n) {
        throw ArgumentError("edge (" + std::to_string(e.s) + "," + std::to_string(e.t) +
                            ") references a vertex outside [0," + std::to_string(n) + ")");
      }
      if (e.s == e.t) throw ArgumentError("self-loop on vertex " + std::to_string(e.s));
      unique.insert(make_edge(e.s, e.t));
    }
    edges_.assign(unique.begin(), unique.end());
    for (const Edge& e : edges_) {
      adjacency_[e.s].set(e.t);
      adjacency_[e.t].set(e.s);
    }
  }

  Graph(std::size_t n, std::initializer_list<Edge> edges)
      : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

  static Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b) edges.push_back({a, b});
    return Graph(n, edges);
  }
  static Graph path(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
    return Graph(n, edges);
  }
  static Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a < n; ++a) edges.push_back(make_edge(a, (a + 1) % n));
    return Graph(n, edges);
  }
  /// Star with centre 0 and leaves 1..n-1.
  static Graph star(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex a = 1; a < n; ++a) edges.push_back({0, a});
    return Graph(n, edges);
  }

  /// Size of the label space.
  std::size_t order() const { return n_; }
  std::size_t vertex_count() const { return present_.popcount(); }
  bool has_vertex(Vertex v) const { return v < n_ && present_[v]; }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n_; ++v)
      if (present_[v]) out.push_back(v);
    return out;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool adjacent(Vertex a, Vertex b) const {
    check_vertex(a);
    check_vertex(b);
    return adjacency_[a][b];
  }
  const BitVector& adjacency_row(Vertex v) const {
    check_vertex(v);
    return adjacency_[v];
  }
  std::size_t degree(Vertex v) const { return adjacency_row(v).popcount(); }

  /// Copy of this graph with the given vertices and their incident edges removed.
  Graph without_vertices(std::span<const Vertex> removed) const {
    BitVector drop(n_);
    for (Vertex v : removed) {
      check_vertex(v);
      drop.set(v);
    }
    std::vector<Edge> kept;
    for (const Edge& e : edges_)
      if (!drop[e.s] && !drop[e.t]) kept.push_back(e);
    Graph out(n_, kept);
    for (Vertex v = 0; v < n_; ++v)
      if (drop[v] || !present_[v]) out.present_.set(v, false);
    return out;
  }

  void check_vertex(Vertex v) const {
    if (!has_vertex(v)) {
      throw ArgumentError("vertex " + std::to_string(v) + " is not in the graph");
    }
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.present_ == b.present_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  BitVector present_;
  std::vector<BitVector> adjacency_;
  std::vector<Edge> edges_;
};

/// Ordered list of distinct vertices; the order matters to graph2nqs.
struct OrderedVertexCover {
  std::vector<Vertex> vertices;
  friend bool operator==(const OrderedVertexCover&, const OrderedVertexCover&) = default;
};

/// Returns the first edge of g not touched by `cover`, if any.
inline std::optional<Edge> uncovered_edge(const Graph& g, std::span<const Vertex> cover) {
  BitVector in_cover(g.order());
  for (Vertex v : cover) {
    g.check_vertex(v);
    in_cover.set(v);
  }
  for (const Edge& e : g.edges())
    if (!in_cover[e.s] && !in_cover[e.t]) return e;
  return std::nullopt;
}

inline bool is_vertex_cover(const Graph& g, std::span<const Vertex> cover) {
  return !uncovered_edge(g, cover).has_value();
}

inline bool is_independent_set(const Graph& g, std::span<const Vertex> set) {
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      if (set[a] == set[b] || g.adjacent(set[a], set[b])) return false;
  return true;
}

inline std::vector<Vertex> neighborhood(const Graph& g, Vertex v) {
  const BitVector& row = g.adjacency_row(v);
  std::vector<Vertex> out;
  for (Vertex u = 0; u < g.order(); ++u)
    if (row[u]) out.push_back(u);
  return out;
}

/// Degree-one vertices.
inline std::vector<Vertex> leaves(const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex v : g.vertices())
    if (g.degree(v) == 1) out.push_back(v);
  return out;
}

/// Removes the current leaves. A single pass by default; `iterate` keeps
/// pruning until no leaves remain.
inline Graph prune_leaves(const Graph& g, bool iterate = false) {
  Graph out = g;
  do {
    const auto current = leaves(out);
    if (current.empty()) break;
    out = out.without_vertices(current);
  } while (iterate);
  return out;
}

/// Connected components over the present vertices, each sorted ascending.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<std::vector<Vertex>> components;
  BitVector seen(g.order());
  for (Vertex root : g.vertices()) {
    if (seen[root]) continue;
    std::vector<Vertex> component{root};
    seen.set(root);
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (Vertex u : neighborhood(g, component[head])) {
        if (!seen[u]) {
          seen.set(u);
          component.push_back(u);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

struct SearchOptions {
  /// Largest vertex count handled by the exact branch-and-bound search.
  std::size_t exact_limit = 40;
};

namespace detail {

// Branch-and-bound maximum independent set over 64-bit vertex masks.
class IndependentSetSearch {
 public:
  explicit IndependentSetSearch(std::vector<std::uint64_t> adjacency)
      : adjacency_(std::move(adjacency)) {}

  /// Size of a maximum independent set inside `mask`. When `target` is
  /// given the search stops as soon as that size is reached.
  int max_size(std::uint64_t mask, int target = INT_MAX) {
    best_ = 0;
    target_ = target;
    search(mask, 0);
    return best_;
  }

 private:
  int degree_in(int v, std::uint64_t mask) const { return std::popcount(adjacency_[v] & mask); }

  void search(std::uint64_t mask, int current) {
    if (best_ >= target_) return;
    // Vertices of degree <= 1 belong to some maximum independent set.
    bool reduced = true;
    while (reduced && mask) {
      reduced = false;
      for (std::uint64_t m = mask; m; m &= m - 1) {
        const int v = std::countr_zero(m);
        if (degree_in(v, mask) <= 1) {
          ++current;
          mask &= ~((std::uint64_t{1} << v) | adjacency_[v]);
          reduced = true;
          break;
        }
      }
    }
    if (current + std::popcount(mask) <= best_) return;
    if (!mask) {
      best_ = std::max(best_, current);
      return;
    }
    int pivot = -1;
    int pivot_degree = -1;
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      const int d = degree_in(v, mask);
      if (d > pivot_degree) {
        pivot = v;
        pivot_degree = d;
      }
    }
    const std::uint64_t bit = std::uint64_t{1} << pivot;
    search(mask & ~(bit | adjacency_[pivot]), current + 1);
    search(mask & ~bit, current);
  }

  std::vector<std::uint64_t> adjacency_;
  int best_ = 0;
  int target_ = INT_MAX;
};

inline std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint64_t> masks(g.order(), 0);
  for (const Edge& e : g.edges()) {
    masks[e.s] |= std::uint64_t{1} << e.t;
    masks[e.t] |= std::uint64_t{1} << e.s;
  }
  return masks;
}

inline void require_exact(const Graph& g, const SearchOptions& options) {
  const std::size_t limit = std::min<std::size_t>(options.exact_limit, 64);
  if (g.vertex_count() > limit || g.order() > 64) {
    throw CapabilityError("exact independent-set search is limited to " + std::to_string(limit) +
                          " vertices (graph has " + std::to_string(g.vertex_count()) +
                          "); use greedy_vertex_cover instead");
  }
}

}  // namespace detail

/// Lexicographically smallest maximum independent set.
inline std::vector<Vertex> max_independent_set(const Graph& g, const SearchOptions& options = {}) {
  detail::require_exact(g, options);
  const auto adjacency = detail::adjacency_masks(g);
  detail::IndependentSetSearch search(adjacency);
  std::uint64_t available = 0;
  for (Vertex v : g.vertices()) available |= std::uint64_t{1} << v;
  int needed = search.max_size(available);

  std::vector<Vertex> chosen;
  for (Vertex v = 0; v < g.order() && needed > 0; ++v) {
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (!(available & bit)) continue;
    const std::uint64_t higher = v + 1 >= 64 ? 0 : ~((std::uint64_t{2} << v) - 1);
    const std::uint64_t rest = available & ~(bit | adjacency[v]) & higher;
    if (1 + search.max_size(rest, needed - 1) >= needed) {
      chosen.push_back(v);
      --needed;
      available = rest;
    } else {
      available &= ~bit;
    }
  }
  return chosen;
}

/// Complement of max_independent_set over the present vertices.
inline OrderedVertexCover min_vertex_cover(const Graph& g, const SearchOptions& options = {}) {
  const auto independent = max_independent_set(g, options);
  OrderedVertexCover cover;
  for (Vertex v : g.vertices())
    if (!std::binary_search(independent.begin(), independent.end(), v)) cover.vertices.push_back(v);
  return cover;
}

/// Result of the heuristic cover; `optimal` is always false.
struct GreedyCover {
  OrderedVertexCover cover;
  bool optimal = false;
};

/// Repeatedly moves the highest-degree vertex (smallest label on ties) into the cover.
inline GreedyCover greedy_vertex_cover(const Graph& g) {
  GreedyCover result;
  Graph remaining = g;
  while (remaining.edge_count() > 0) {
    Vertex pick = 0;
    std::size_t best = 0;
    for (Vertex v : remaining.vertices()) {
      const std::size_t d = remaining.degree(v);
      if (d > best) {
        best = d;
        pick = v;
      }
    }
    result.cover.vertices.push_back(pick);
    const Vertex removed[] = {pick};
    remaining = remaining.without_vertices(removed);
  }
  return result;
}

/// min_vertex_cover when the graph is small enough, the greedy cover otherwise.
inline OrderedVertexCover best_effort_vertex_cover(const Graph& g, const SearchOptions& options = {}) {
  if (g.vertex_count() <= std::min<std::size_t>(options.exact_limit, 64) && g.order() <= 64) {
    return min_vertex_cover(g, options);
  }
  return greedy_vertex_cover(g).cover;
}

struct UnivalencyCover {
  OrderedVertexCover cover;
  /// Leaves of g together with the independent prefix of the cover, sorted.
  std::vector<Vertex> univalent;
  /// Length of the independent prefix alpha(G').
  std::size_t prefix_size = 0;
};

/// Ordered cover {alpha(G'), beta(G'')} with G' the leaf-pruned graph and
/// G'' the graph with alpha(G') removed.
inline UnivalencyCover max_univalency_cover(const Graph& g, const SearchOptions& options = {}) {
  const Graph pruned = prune_leaves(g);
  const auto prefix = max_independent_set(pruned, options);
  const Graph rest = g.without_vertices(prefix);
  const auto tail = min_vertex_cover(rest, options);

  UnivalencyCover result;
  result.prefix_size = prefix.size();
  result.cover.vertices = prefix;
  result.cover.vertices.insert(result.cover.vertices.end(), tail.vertices.begin(), tail.vertices.end());
  result.univalent = leaves(g);
  result.univalent.insert(result.univalent.end(), prefix.begin(), prefix.end());
  std::sort(result.univalent.begin(), result.univalent.end());
  return result;
}

}  // namespace cnqs

#endif  // CNQS_GRAPH_HPP
