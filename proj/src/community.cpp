#include "tagnet/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include "tagnet/errors.hpp"

namespace tagnet {

double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& assignment) {
    const std::size_t n = g.vertex_count();
    if (assignment.size() != n) {
        throw input_error("modularity: assignment covers " + std::to_string(assignment.size()) +
                          " vertices, graph has " + std::to_string(n));
    }
    constexpr std::uint32_t kUnassigned = 0xffffffffu;
    std::uint32_t communities = 0;
    for (VertexId v = 0; v < n; ++v) {
        const std::uint32_t c = assignment[v];
        if (c == kUnassigned || c >= n) {
            throw input_error("modularity: vertex \"" + g.vertex(v).label +
                              "\" (id " + std::to_string(v) + ") has no valid community");
        }
        communities = std::max(communities, c + 1);
    }
    const double total = static_cast<double>(g.total_weight());
    if (total == 0.0) return 0.0;

    std::vector<double> intra(communities, 0.0);
    std::vector<double> strength_sum(communities, 0.0);
    for (const Edge& e : g.edges()) {
        if (assignment[e.u] == assignment[e.v]) {
            intra[assignment[e.u]] += static_cast<double>(e.weight);
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        strength_sum[assignment[v]] += static_cast<double>(g.strength(v));
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < communities; ++c) {
        const double fraction = strength_sum[c] / (2.0 * total);
        q += intra[c] / total - fraction * fraction;
    }
    return q;
}

namespace {

// Heap entry for the best-gain pair. Stale entries are skipped on pop by
// re-deriving the current gain and requiring an exact match.
struct PairGain {
    double gain;
    std::uint32_t low, high;

    bool operator<(const PairGain& other) const {
        if (gain != other.gain) return gain < other.gain;
        if (low != other.low) return low > other.low;
        return high > other.high;
    }
};

}  // namespace

Dendrogram fast_greedy(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw input_error("fast_greedy: graph has no vertices");

    Dendrogram dendrogram;
    dendrogram.vertex_count = n;

    const double total = static_cast<double>(g.total_weight());
    if (total == 0.0) return dendrogram;  // nothing to merge, Q stays 0

    // Community state. a[c] = S_c / 2W, the strength fraction; neighbor maps
    // hold inter-community weight fractions w_cd / 2W. Gain for merging c,d
    // is 2*(w_cd/2W - a_c*a_d).
    std::vector<bool> alive(n, true);
    std::vector<double> a(n, 0.0);
    std::vector<std::map<std::uint32_t, double>> links(n);
    double q = 0.0;
    for (VertexId v = 0; v < n; ++v) {
        a[v] = static_cast<double>(g.strength(v)) / (2.0 * total);
        q -= a[v] * a[v];
        for (const Neighbor& nb : g.neighbors(v)) {
            links[v][nb.to] = static_cast<double>(g.edge(nb.edge).weight) / (2.0 * total);
        }
    }
    dendrogram.initial_modularity = q;

    auto gain_of = [&](std::uint32_t low, std::uint32_t high) {
        return 2.0 * (links[low].at(high) - a[low] * a[high]);
    };

    std::priority_queue<PairGain> heap;
    for (std::uint32_t v = 0; v < n; ++v) {
        for (const auto& [to, w] : links[v]) {
            if (v < to) heap.push(PairGain{2.0 * (w - a[v] * a[to]), v, to});
        }
    }

    std::uint32_t step = 0;
    while (!heap.empty()) {
        const PairGain top = heap.top();
        heap.pop();
        const std::uint32_t low = top.low, high = top.high;
        if (!alive[low] || !alive[high]) continue;
        auto it = links[low].find(high);
        if (it == links[low].end()) continue;
        if (gain_of(low, high) != top.gain) continue;  // superseded entry

        // Merge high into low.
        alive[high] = false;
        links[low].erase(high);
        links[high].erase(low);
        for (const auto& [to, w] : links[high]) {
            links[to].erase(high);
            links[low][to] += w;
            links[to][low] = links[low][to];
        }
        links[high].clear();
        a[low] += a[high];
        q += top.gain;

        for (const auto& [to, w] : links[low]) {
            const std::uint32_t lo = std::min(low, to), hi = std::max(low, to);
            heap.push(PairGain{2.0 * (w - a[lo] * a[hi]), lo, hi});
        }

        ++step;
        dendrogram.merges.push_back(Merge{step, low, high, low, q});
    }
    return dendrogram;
}

Partition cut_at_max_modularity(const Dendrogram& d, const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (d.vertex_count != n) {
        throw input_error("cut_at_max_modularity: dendrogram built over " +
                          std::to_string(d.vertex_count) + " vertices, graph has " +
                          std::to_string(n));
    }
    Partition partition;
    if (n == 0) return partition;

    std::size_t best_step = 0;
    double best_q = d.initial_modularity;
    for (const Merge& m : d.merges) {
        if (m.modularity_after > best_q) {
            best_q = m.modularity_after;
            best_step = m.step;
        }
    }

    // Replay merges up to the cut with union-find.
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (std::size_t i = 0; i < best_step; ++i) {
        const Merge& m = d.merges[i];
        parent[find(m.high)] = find(m.low);
    }

    // Dense community ids in order of smallest member.
    constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t> dense(n, kUnset);
    std::uint32_t next = 0;
    partition.assignment.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        const std::uint32_t root = find(v);
        if (dense[root] == kUnset) dense[root] = next++;
        partition.assignment[v] = dense[root];
    }
    partition.community_count = next;
    partition.q = modularity(g, partition.assignment);
    return partition;
}

}  // namespace tagnet
