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

#include "cnqs/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "cnqs/jastrow.hpp"
#include "cnqs/oracle.hpp"
#include "support/oracles.hpp"

using namespace cnqs;

namespace {

// 1-2, 2-3, 2-4, 3-4, 4-5, 3-5 with 1-based labels.
Graph five_vertex_example() { return Graph(5, {{0, 1}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {2, 4}}); }

}  // namespace

TEST(Graph, DeduplicatesAndSortsEdges) {
  const Graph g(4, {{2, 1}, {1, 2}, {0, 3}});
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 3}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
  EXPECT_TRUE(g.adjacent(2, 1));
  EXPECT_FALSE(g.adjacent(0, 1));
  EXPECT_EQ(g.degree(1), 1u);
}

TEST(Graph, RejectsSelfLoopsAndOutOfRange) {
  EXPECT_THROW(Graph(3, {{1, 1}}), ArgumentError);
  EXPECT_THROW(Graph(3, {{0, 3}}), ArgumentError);
}

TEST(Graph, RemovingVerticesKeepsLabels) {
  const Graph g = Graph::path(4);
  const Vertex drop[] = {1};
  const Graph h = g.without_vertices(drop);
  EXPECT_EQ(h.order(), 4u);
  EXPECT_EQ(h.vertex_count(), 3u);
  EXPECT_FALSE(h.has_vertex(1));
  ASSERT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(h.edges()[0], (Edge{2, 3}));
}

TEST(Graph, Factories) {
  EXPECT_EQ(Graph::complete(5).edge_count(), 10u);
  EXPECT_EQ(Graph::cycle(5).edge_count(), 5u);
  EXPECT_EQ(Graph::star(5).degree(0), 4u);
  EXPECT_EQ(Graph::path(5).edge_count(), 4u);
}

TEST(Graph, LeavesAndPruning) {
  const Graph g = five_vertex_example();
  EXPECT_EQ(leaves(g), std::vector<Vertex>{0});
  const Graph pruned = prune_leaves(g);
  EXPECT_FALSE(pruned.has_vertex(0));
  EXPECT_EQ(pruned.edge_count(), 5u);
  // Iterated pruning strips a path completely.
  EXPECT_EQ(prune_leaves(Graph::path(6), true).edge_count(), 0u);
}

TEST(Graph, ConnectedComponents) {
  const Graph g(6, {{0, 1}, {1, 2}, {4, 5}});
  const auto parts = connected_components(g);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(parts[1], (std::vector<Vertex>{3}));
  EXPECT_EQ(parts[2], (std::vector<Vertex>{4, 5}));
}

TEST(Graph, CoverAndIndependencePredicates) {
  const Graph g = Graph::cycle(4);
  EXPECT_TRUE(is_vertex_cover(g, std::vector<Vertex>{0, 2}));
  EXPECT_FALSE(is_vertex_cover(g, std::vector<Vertex>{0, 1}));
  EXPECT_EQ(uncovered_edge(g, std::vector<Vertex>{0, 1}), (Edge{2, 3}));
  EXPECT_TRUE(is_independent_set(g, std::vector<Vertex>{1, 3}));
  EXPECT_FALSE(is_independent_set(g, std::vector<Vertex>{0, 1}));
}

TEST(Search, MaxIndependentSetMatchesExhaustiveEnumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const Graph g = random_graph(n, rng.uniform(0.1, 0.8), rng);
    const auto mis = max_independent_set(g);
    EXPECT_TRUE(is_independent_set(g, mis));
    EXPECT_EQ(mis, oracle::max_independent_set(g)) << "trial " << trial;
  }
}

TEST(Search, MinVertexCoverIsMinimal) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const Graph g = random_graph(n, rng.uniform(0.1, 0.8), rng);
    const auto cover = min_vertex_cover(g);
    EXPECT_TRUE(is_vertex_cover(g, cover.vertices));
    EXPECT_EQ(cover.vertices.size(), oracle::min_vertex_cover_size(g)) << "trial " << trial;
    // Complement of the maximum independent set.
    EXPECT_EQ(cover.vertices.size() + max_independent_set(g).size(), g.vertex_count());
  }
}

TEST(Search, KnownGraphs) {
  EXPECT_EQ(min_vertex_cover(Graph::complete(6)).vertices.size(), 5u);
  EXPECT_EQ(min_vertex_cover(Graph::star(7)).vertices, std::vector<Vertex>{0});
  EXPECT_EQ(max_independent_set(Graph::cycle(7)).size(), 3u);
  EXPECT_TRUE(min_vertex_cover(Graph(4)).vertices.empty());
}

TEST(Search, CapabilityLimitAndGreedyFallback) {
  Rng rng(13);
  const Graph g = random_connected_graph(20, 0.3, rng);
  SearchOptions tight;
  tight.exact_limit = 10;
  EXPECT_THROW(min_vertex_cover(g, tight), CapabilityError);
  const auto greedy = greedy_vertex_cover(g);
  EXPECT_FALSE(greedy.optimal);
  EXPECT_TRUE(is_vertex_cover(g, greedy.cover.vertices));
  EXPECT_EQ(best_effort_vertex_cover(g, tight), greedy.cover);
  EXPECT_GE(greedy.cover.vertices.size(), min_vertex_cover(g).vertices.size());
}

TEST(Search, UnivalencyCoverOnFiveVertexExample) {
  const Graph g = five_vertex_example();
  const auto result = max_univalency_cover(g);
  // alpha(G') = {2, 5}, then the cover of the rest is {4} (1-based).
  EXPECT_EQ(result.cover.vertices, (std::vector<Vertex>{1, 4, 3}));
  EXPECT_EQ(result.prefix_size, 2u);
  EXPECT_EQ(result.univalent, (std::vector<Vertex>{0, 1, 4}));
  const auto nqs = graph2nqs(JastrowState(g, {}), result.cover);
  const auto univalent = univalent_sites(nqs);
  EXPECT_EQ(nqs.hidden_count(), 3u);
  for (Vertex v : result.univalent) EXPECT_TRUE(std::binary_search(univalent.begin(), univalent.end(), v)) << v;
}

TEST(Search, UnivalencyCoverGuaranteesOnRandomGraphs) {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    const Graph g = random_connected_graph(n, 0.3, rng);
    const auto result = max_univalency_cover(g);
    EXPECT_TRUE(is_vertex_cover(g, result.cover.vertices));
    const std::vector<Vertex> prefix(result.cover.vertices.begin(),
                                     result.cover.vertices.begin() + static_cast<std::ptrdiff_t>(result.prefix_size));
    EXPECT_TRUE(is_independent_set(g, prefix));
    const auto nqs = graph2nqs(JastrowState(g, {}), result.cover);
    const auto univalent = univalent_sites(nqs);
    for (Vertex v : result.univalent) EXPECT_TRUE(std::binary_search(univalent.begin(), univalent.end(), v));
  }
}
