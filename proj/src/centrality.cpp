#include "tagnet/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace tagnet {

namespace {

// Fixed decomposition of sources into blocks of 64. Every block gets its own
// accumulator and the block partials are folded in block order, so the result
// is a pure function of the graph no matter how many workers run the sweeps.
constexpr std::size_t kSourceBlock = 64;

BetweennessScores betweenness_parallel(const WeightedGraph& g, bool use_weights,
                                       std::size_t worker_override) {
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    BetweennessScores out;
    out.vertex.assign(n, 0.0);
    out.edge.assign(m, 0.0);
    if (n == 0) return out;

    const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
    std::vector<std::vector<double>> block_vertex(blocks);
    std::vector<std::vector<double>> block_edge(blocks);

    std::atomic<std::size_t> next_block{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= blocks || failed.load()) return;
            try {
                auto& vacc = block_vertex[b];
                auto& eacc = block_edge[b];
                vacc.assign(n, 0.0);
                eacc.assign(m, 0.0);
                const VertexId lo = static_cast<VertexId>(b * kSourceBlock);
                const VertexId hi = static_cast<VertexId>(std::min(n, (b + 1) * kSourceBlock));
                for (VertexId s = lo; s < hi; ++s) {
                    detail::brandes_source(g, s, use_weights, vacc, eacc);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::size_t workers = worker_override > 0 ? worker_override
                                              : std::thread::hardware_concurrency();
    workers = std::min(workers, blocks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(error);

    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t v = 0; v < n; ++v) out.vertex[v] += block_vertex[b][v];
        for (std::size_t e = 0; e < m; ++e) out.edge[e] += block_edge[b][e];
    }
    // Each unordered pair was seen from both endpoints.
    for (double& x : out.vertex) x *= 0.5;
    for (double& x : out.edge) x *= 0.5;
    return out;
}

}  // namespace

std::vector<double> eigenvector_centrality(const WeightedGraph& g,
                                           const EigenvectorOptions& opts) {
    if (opts.tolerance <= 0.0) throw input_error("eigenvector tolerance must be > 0");
    if (opts.max_iterations < 1) throw input_error("eigenvector max_iterations must be >= 1");

    const std::size_t n = g.vertex_count();
    std::vector<double> scores(n, 0.0);
    if (n == 0) return scores;

    auto components = connected_components(g);
    const auto largest = std::max_element(
        components.begin(), components.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a.front() > b.front();  // prefer the smaller leading id
        });
    if (largest->size() < 2) return scores;  // no edges anywhere

    const std::vector<VertexId>& comp = *largest;
    const std::size_t k = comp.size();
    std::vector<std::uint32_t> local(n, 0);
    for (std::size_t i = 0; i < k; ++i) local[comp[i]] = static_cast<std::uint32_t>(i);

    // Power iteration on A + cI. The shift keeps the leading eigenvector
    // dominant on bipartite components and leaves eigenvectors untouched;
    // c is the mean strength, so behavior is invariant under weight scaling.
    double strength_sum = 0.0;
    for (VertexId v : comp) strength_sum += static_cast<double>(g.strength(v));
    const double shift = strength_sum / static_cast<double>(k);

    std::vector<double> x(k, 1.0), next(k, 0.0);
    double residual = 0.0;
    for (std::uint32_t iter = 1; iter <= opts.max_iterations; ++iter) {
        for (std::size_t i = 0; i < k; ++i) {
            double acc = shift * x[i];
            for (const Neighbor& nb : g.neighbors(comp[i])) {
                acc += static_cast<double>(g.edge(nb.edge).weight) * x[local[nb.to]];
            }
            next[i] = acc;
        }
        const double max_entry = *std::max_element(next.begin(), next.end());
        if (!(max_entry > 0.0) || !std::isfinite(max_entry)) {
            throw analysis_error("power iteration degenerated (max entry " +
                                 std::to_string(max_entry) + ")");
        }
        residual = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            next[i] /= max_entry;
            residual = std::max(residual, std::abs(next[i] - x[i]));
        }
        x.swap(next);
        if (residual < opts.tolerance) {
            for (std::size_t i = 0; i < k; ++i) scores[comp[i]] = x[i];
            return scores;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "eigenvector centrality did not converge in %u iterations (residual %.3e)",
                  opts.max_iterations, residual);
    throw convergence_error(buf, opts.max_iterations, residual);
}

std::vector<double> vertex_betweenness(const WeightedGraph& g, bool use_weights) {
    return betweenness_parallel(g, use_weights, 0).vertex;
}

std::vector<double> edge_betweenness(const WeightedGraph& g, bool use_weights) {
    return betweenness_parallel(g, use_weights, 0).edge;
}

BetweennessScores betweenness(const WeightedGraph& g, bool use_weights) {
    return betweenness_parallel(g, use_weights, 0);
}

namespace detail {

BetweennessScores betweenness_with_workers(const WeightedGraph& g, bool use_weights,
                                           std::size_t workers) {
    return betweenness_parallel(g, use_weights, workers);
}

}  // namespace detail

}  // namespace tagnet
