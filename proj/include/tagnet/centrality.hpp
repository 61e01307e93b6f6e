#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "tagnet/errors.hpp"
#include "tagnet/graph.hpp"

namespace tagnet {

struct EigenvectorOptions {
    double tolerance = 1e-10;
    std::uint32_t max_iterations = 10000;
};

// Leading eigenvector of the weighted adjacency restricted to the largest
// connected component (ties between components broken by smallest contained
// vertex id), rescaled so the maximum score is 1. Vertices outside that
// component score 0, as does everything when the largest component is a
// single vertex. Computed by power iteration from the uniform positive
// vector; convergence is successive-iterate max-norm difference < tolerance.
// Throws convergence_error when max_iterations is exhausted.
std::vector<double> eigenvector_centrality(const WeightedGraph& g,
                                           const EigenvectorOptions& opts = {});

// Brandes betweenness. Weighted mode treats edge distance as 1/weight
// (counts are tie strengths, not costs). Scores are unnormalized and each
// unordered pair {s,t} is counted once. Per-source sweeps run in parallel
// with a fixed reduction order, so results do not depend on worker count.
std::vector<double> vertex_betweenness(const WeightedGraph& g, bool use_weights);

// Same sweep accumulated per edge; the endpoint pair itself counts.
std::vector<double> edge_betweenness(const WeightedGraph& g, bool use_weights);

struct BetweennessScores {
    std::vector<double> vertex;
    std::vector<double> edge;
};

// Both accumulations from a single set of shortest-path sweeps.
BetweennessScores betweenness(const WeightedGraph& g, bool use_weights);

namespace detail {

// Parallel driver with an explicit worker count (0 = hardware default).
// Results are identical for every worker count; the tests hold the library
// to that.
BetweennessScores betweenness_with_workers(const WeightedGraph& g, bool use_weights,
                                           std::size_t workers);

// One Brandes source sweep: shortest-path DAG from s by BFS (unweighted) or
// Dijkstra over 1/weight distances, then dependency accumulation into the
// per-vertex and per-edge tallies. Acc only needs field arithmetic; the
// tests instantiate it with exact rationals to pin down unweighted scores.
template <class Acc>
void brandes_source(const WeightedGraph& g, VertexId s, bool use_weights,
                    std::vector<Acc>& vertex_acc, std::vector<Acc>& edge_acc) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint64_t> sigma(n, 0);
    std::vector<std::vector<Neighbor>> preds(n);
    std::vector<VertexId> order;  // non-decreasing distance from s
    order.reserve(n);

    if (!use_weights) {
        std::vector<std::int64_t> dist(n, -1);
        dist[s] = 0;
        sigma[s] = 1;
        std::size_t head = 0;
        order.push_back(s);
        while (head < order.size()) {
            VertexId v = order[head++];
            for (const Neighbor& nb : g.neighbors(v)) {
                if (dist[nb.to] < 0) {
                    dist[nb.to] = dist[v] + 1;
                    order.push_back(nb.to);
                }
                if (dist[nb.to] == dist[v] + 1) {
                    sigma[nb.to] += sigma[v];
                    preds[nb.to].push_back(Neighbor{v, nb.edge});
                }
            }
        }
    } else {
        constexpr double kUnreached = -1.0;
        std::vector<double> dist(n, kUnreached);
        std::vector<bool> settled(n, false);
        using QueueItem = std::pair<double, VertexId>;
        std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
        dist[s] = 0.0;
        sigma[s] = 1;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            auto [d, v] = queue.top();
            queue.pop();
            if (settled[v]) continue;
            settled[v] = true;
            order.push_back(v);
            for (const Neighbor& nb : g.neighbors(v)) {
                const std::uint64_t w = g.edge(nb.edge).weight;
                if (w == 0) {
                    throw input_error("weighted betweenness: non-positive weight on edge {" +
                                      g.vertex(g.edge(nb.edge).u).label + ", " +
                                      g.vertex(g.edge(nb.edge).v).label + "}");
                }
                const double cand = d + 1.0 / static_cast<double>(w);
                if (settled[nb.to]) continue;
                if (dist[nb.to] == kUnreached || cand < dist[nb.to]) {
                    dist[nb.to] = cand;
                    sigma[nb.to] = sigma[v];
                    preds[nb.to].assign(1, Neighbor{v, nb.edge});
                    queue.emplace(cand, nb.to);
                } else if (cand == dist[nb.to]) {
                    sigma[nb.to] += sigma[v];
                    preds[nb.to].push_back(Neighbor{v, nb.edge});
                }
            }
        }
    }

    // Dependency accumulation, farthest vertices first.
    std::vector<Acc> delta(n, Acc(0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        VertexId w = *it;
        for (const Neighbor& p : preds[w]) {
            Acc contribution = Acc(sigma[p.to]) / Acc(sigma[w]) * (Acc(1) + delta[w]);
            edge_acc[p.edge] = edge_acc[p.edge] + contribution;
            delta[p.to] = delta[p.to] + contribution;
        }
        if (w != s) vertex_acc[w] = vertex_acc[w] + delta[w];
    }
}

// Sequential driver over all sources; pair {s,t} ends up counted twice, so
// halve at the end. This is the reference path the parallel double driver
// must agree with bit for bit.
template <class Acc>
struct BasicBetweenness {
    std::vector<Acc> vertex;
    std::vector<Acc> edge;
};

template <class Acc>
BasicBetweenness<Acc> betweenness_accumulate(const WeightedGraph& g, bool use_weights) {
    const std::size_t n = g.vertex_count();
    BasicBetweenness<Acc> out;
    out.vertex.assign(n, Acc(0));
    out.edge.assign(g.edge_count(), Acc(0));
    for (VertexId s = 0; s < n; ++s) {
        brandes_source(g, s, use_weights, out.vertex, out.edge);
    }
    const Acc half = Acc(1) / Acc(2);
    for (auto& x : out.vertex) x = x * half;
    for (auto& x : out.edge) x = x * half;
    return out;
}

}  // namespace detail

}  // namespace tagnet
