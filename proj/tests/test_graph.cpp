#include "tagnet/graph.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "support/oracles.hpp"
#include "tagnet/errors.hpp"

using namespace tagnet;

TEST(Graph, FirstInsertionGetsIdZero) {
    WeightedGraph g;
    EXPECT_EQ(g.add_vertex("nature", 5), 0u);
    EXPECT_EQ(g.vertex_count(), 1u);
    EXPECT_EQ(g.vertex(0).label, "nature");
    EXPECT_EQ(g.vertex(0).frequency, 5u);
}

TEST(Graph, DuplicateLabelRejected) {
    WeightedGraph g;
    g.add_vertex("nature", 1);
    try {
        g.add_vertex("nature", 2);
        FAIL() << "expected input_error";
    } catch (const input_error& e) {
        EXPECT_NE(std::string(e.what()).find("nature"), std::string::npos);
    }
}

TEST(Graph, IdsAreDense) {
    WeightedGraph g;
    for (int i = 0; i < 150; ++i) {
        EXPECT_EQ(g.add_vertex("tag" + std::to_string(i), 1), static_cast<VertexId>(i));
    }
    EXPECT_EQ(g.vertex_count(), 150u);
}

TEST(Graph, UpsertEdgeCreatesAndAccumulates) {
    WeightedGraph g;
    const VertexId a = g.add_vertex("a", 1);
    const VertexId b = g.add_vertex("b", 1);
    EXPECT_EQ(g.upsert_edge(a, b, 1), 1u);
    EXPECT_EQ(g.upsert_edge(a, b, 1), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.total_weight(), 2u);
}

TEST(Graph, SelfLoopRejected) {
    WeightedGraph g;
    const VertexId a = g.add_vertex("a", 1);
    EXPECT_THROW(g.upsert_edge(a, a, 1), input_error);
}

TEST(Graph, UnknownIdsRejected) {
    WeightedGraph g;
    g.add_vertex("a", 1);
    EXPECT_THROW(g.upsert_edge(0, 7, 1), input_error);
    EXPECT_THROW(g.strength(9), input_error);
    EXPECT_THROW(g.vertex(1), input_error);
}

TEST(Graph, StrengthTriangleAndStar) {
    WeightedGraph tri;
    for (const char* l : {"a", "b", "c"}) tri.add_vertex(l, 1);
    tri.upsert_edge(0, 1, 1);
    tri.upsert_edge(1, 2, 1);
    tri.upsert_edge(0, 2, 1);
    for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(tri.strength(v), 2u);

    WeightedGraph star;
    for (const char* l : {"hub", "l1", "l2", "l3"}) star.add_vertex(l, 1);
    for (VertexId leaf = 1; leaf <= 3; ++leaf) star.upsert_edge(0, leaf, 1);
    EXPECT_EQ(star.strength(0), 3u);
}

TEST(Graph, StrengthSumsIncidentWeights) {
    WeightedGraph g;
    for (const char* l : {"a", "b", "c"}) g.add_vertex(l, 1);
    g.upsert_edge(0, 1, 2);
    g.upsert_edge(1, 2, 5);
    EXPECT_EQ(g.strength(1), 7u);
}

TEST(Graph, AdjacencyIsSymmetric) {
    tagnet::DeterministicRng rng(11);
    const WeightedGraph g = oracle::random_graph(rng, 20, 0.2, {1, 2, 3});
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const Neighbor& nb : g.neighbors(u)) {
            bool back = false;
            for (const Neighbor& rev : g.neighbors(nb.to)) {
                if (rev.to == u && rev.edge == nb.edge) back = true;
            }
            EXPECT_TRUE(back) << "missing reverse adjacency " << u << "<->" << nb.to;
        }
    }
}

TEST(Graph, StrengthSumEqualsTwiceTotalWeight) {
    tagnet::DeterministicRng rng(3);
    const WeightedGraph g = oracle::random_graph(rng, 25, 0.15, {1, 2, 7});
    std::uint64_t sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sum += g.strength(v);
    EXPECT_EQ(sum, 2 * g.total_weight());
}

TEST(Graph, EdgeCountMatchesDistinctPairs) {
    tagnet::DeterministicRng rng(5);
    WeightedGraph g;
    for (int i = 0; i < 10; ++i) g.add_vertex("t" + std::to_string(i), 1);
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < 200; ++i) {
        const VertexId u = static_cast<VertexId>(rng.bounded(10));
        const VertexId v = static_cast<VertexId>(rng.bounded(10));
        if (u == v) continue;
        g.upsert_edge(u, v, 1);
        pairs.insert({std::min(u, v), std::max(u, v)});
    }
    EXPECT_EQ(g.edge_count(), pairs.size());
}

namespace {

// Recursive DFS component finder, used as the independent traversal oracle.
void dfs(const WeightedGraph& g, VertexId v, std::vector<int>& mark, int c) {
    mark[v] = c;
    for (const Neighbor& nb : g.neighbors(v)) {
        if (mark[nb.to] < 0) dfs(g, nb.to, mark, c);
    }
}

}  // namespace

TEST(ConnectedComponents, EmptyGraph) {
    WeightedGraph g;
    EXPECT_TRUE(connected_components(g).empty());
}

TEST(ConnectedComponents, TwoTriangles) {
    WeightedGraph g;
    for (int i = 0; i < 6; ++i) g.add_vertex("v" + std::to_string(i), 1);
    g.upsert_edge(0, 1, 1);
    g.upsert_edge(1, 2, 1);
    g.upsert_edge(0, 2, 1);
    g.upsert_edge(3, 4, 1);
    g.upsert_edge(4, 5, 1);
    g.upsert_edge(3, 5, 1);
    const auto comps = connected_components(g);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0], (std::vector<VertexId>{0, 1, 2}));
    EXPECT_EQ(comps[1], (std::vector<VertexId>{3, 4, 5}));
}

TEST(ConnectedComponents, MatchesDfsOracle) {
    tagnet::DeterministicRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedGraph g = oracle::random_graph(rng, 20, 0.1);
        std::vector<int> mark(g.vertex_count(), -1);
        int c = 0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (mark[v] < 0) dfs(g, v, mark, c++);
        }
        const auto comps = connected_components(g);
        EXPECT_EQ(comps.size(), static_cast<std::size_t>(c));

        // Same partition: two vertices share a set iff the oracle agrees.
        std::vector<int> from_lib(g.vertex_count(), -1);
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (VertexId v : comps[i]) from_lib[v] = static_cast<int>(i);
        }
        std::size_t covered = 0;
        for (const auto& comp : comps) covered += comp.size();
        EXPECT_EQ(covered, g.vertex_count());
        for (VertexId u = 0; u < g.vertex_count(); ++u) {
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                EXPECT_EQ(mark[u] == mark[v], from_lib[u] == from_lib[v]);
            }
        }
    }
}
