// Dense eigen-decomposition reference for eigenvector centrality, kept
// independent of the power-iteration code it checks.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tagnet/graph.hpp"

namespace oracle {

// Leading eigenvector of the weighted adjacency on the largest component
// (ties by smallest contained vertex id), rescaled to max 1; zeros
// elsewhere.
inline std::vector<double> dense_eigenvector(const tagnet::WeightedGraph& g) {
    using tagnet::VertexId;
    const std::size_t n = g.vertex_count();
    std::vector<double> scores(n, 0.0);
    if (n == 0) return scores;

    auto components = tagnet::connected_components(g);
    std::size_t best = 0;
    for (std::size_t i = 1; i < components.size(); ++i) {
        if (components[i].size() > components[best].size()) best = i;
    }
    const auto& comp = components[best];
    if (comp.size() < 2) return scores;

    const std::size_t k = comp.size();
    std::vector<std::size_t> local(n, 0);
    for (std::size_t i = 0; i < k; ++i) local[comp[i]] = i;

    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (const tagnet::Neighbor& nb : g.neighbors(comp[i])) {
            adjacency(i, local[nb.to]) = static_cast<double>(g.edge(nb.edge).weight);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
    Eigen::VectorXd leading = solver.eigenvectors().col(k - 1);  // eigenvalues ascending

    // Perron vector: orient positive, rescale to max 1.
    double extreme = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (std::abs(leading(i)) > std::abs(extreme)) extreme = leading(i);
    }
    for (std::size_t i = 0; i < k; ++i) scores[comp[i]] = leading(i) / extreme;
    return scores;
}

}  // namespace oracle
