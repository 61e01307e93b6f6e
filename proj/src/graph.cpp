#include "tagnet/graph.hpp"

#include <algorithm>
#include <deque>

#include "tagnet/errors.hpp"

namespace tagnet {

VertexId WeightedGraph::add_vertex(std::string label, std::uint64_t frequency) {
    if (label_index_.contains(label)) {
        throw input_error("duplicate vertex label: \"" + label + "\"");
    }
    VertexId id = static_cast<VertexId>(vertices_.size());
    label_index_.emplace(label, id);
    vertices_.push_back(Vertex{std::move(label), frequency});
    adjacency_.emplace_back();
    return id;
}

std::uint64_t WeightedGraph::upsert_edge(VertexId u, VertexId v, std::uint64_t delta) {
    check_vertex(u, "upsert_edge");
    check_vertex(v, "upsert_edge");
    if (u == v) {
        throw input_error("self-loop rejected on vertex \"" + vertices_[u].label + "\"");
    }
    if (delta < 1) {
        throw input_error("edge weight delta must be >= 1");
    }
    for (const Neighbor& n : adjacency_[u]) {
        if (n.to == v) {
            edges_[n.edge].weight += delta;
            total_weight_ += delta;
            return edges_[n.edge].weight;
        }
    }
    EdgeId eid = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{std::min(u, v), std::max(u, v), delta});
    adjacency_[u].push_back(Neighbor{v, eid});
    adjacency_[v].push_back(Neighbor{u, eid});
    total_weight_ += delta;
    return delta;
}

std::uint64_t WeightedGraph::strength(VertexId v) const {
    check_vertex(v, "strength");
    std::uint64_t sum = 0;
    for (const Neighbor& n : adjacency_[v]) sum += edges_[n.edge].weight;
    return sum;
}

const Vertex& WeightedGraph::vertex(VertexId v) const {
    check_vertex(v, "vertex");
    return vertices_[v];
}

const Edge& WeightedGraph::edge(EdgeId e) const {
    if (e >= edges_.size()) {
        throw input_error("unknown edge id " + std::to_string(e));
    }
    return edges_[e];
}

std::span<const Neighbor> WeightedGraph::neighbors(VertexId v) const {
    check_vertex(v, "neighbors");
    return adjacency_[v];
}

std::optional<VertexId> WeightedGraph::find_vertex(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeId> WeightedGraph::find_edge(VertexId u, VertexId v) const {
    check_vertex(u, "find_edge");
    check_vertex(v, "find_edge");
    for (const Neighbor& n : adjacency_[u]) {
        if (n.to == v) return n.edge;
    }
    return std::nullopt;
}

void WeightedGraph::check_vertex(VertexId v, const char* op) const {
    if (v >= vertices_.size()) {
        throw input_error(std::string(op) + ": unknown vertex id " + std::to_string(v));
    }
}

std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<VertexId>> components;
    std::vector<bool> seen(n, false);
    std::deque<VertexId> queue;
    for (VertexId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<VertexId> component;
        seen[start] = true;
        queue.push_back(start);
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            component.push_back(v);
            for (const Neighbor& nb : g.neighbors(v)) {
                if (!seen[nb.to]) {
                    seen[nb.to] = true;
                    queue.push_back(nb.to);
                }
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

}  // namespace tagnet
