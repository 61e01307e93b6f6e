#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tagnet {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Vertex {
    std::string label;         // normalized hashtag text (lowercase, no '#')
    std::uint64_t frequency;   // number of posts containing the hashtag
};

struct Edge {
    VertexId u, v;             // u < v
    std::uint64_t weight;      // co-post count, >= 1
};

struct Neighbor {
    VertexId to;
    EdgeId edge;
};

// Undirected weighted simple graph over hashtags. Vertex ids are dense and
// assigned in insertion order; the label index gives O(1) lookup. The graph
// is append-only: build it single-threaded, then share it freely between
// read-only analyses.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // Adds a vertex and returns its dense id. Duplicate labels are rejected.
    VertexId add_vertex(std::string label, std::uint64_t frequency);

    // Creates the edge with weight=delta or adds delta to an existing edge.
    // Returns the resulting weight. Self-loops and unknown ids are rejected.
    std::uint64_t upsert_edge(VertexId u, VertexId v, std::uint64_t delta);

    // Sum of incident edge weights (weighted degree).
    std::uint64_t strength(VertexId v) const;

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    // Sum of all edge weights.
    std::uint64_t total_weight() const { return total_weight_; }

    const Vertex& vertex(VertexId v) const;
    const Edge& edge(EdgeId e) const;
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Neighbor> neighbors(VertexId v) const;

    std::optional<VertexId> find_vertex(std::string_view label) const;

    // Edge id for the unordered pair {u, v}, if present.
    std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

private:
    void check_vertex(VertexId v, const char* op) const;

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::unordered_map<std::string, VertexId> label_index_;
    std::uint64_t total_weight_ = 0;
};

// Partition of the vertices into connected components. Each component lists
// its vertices in ascending id order; components are ordered by their
// smallest member. Empty graph yields an empty list.
std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g);

}  // namespace tagnet
