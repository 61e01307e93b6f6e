#pragma once

#include <cstdint>
#include <vector>

#include "tagnet/graph.hpp"

namespace tagnet {

struct Merge {
    std::uint32_t step;        // 1-based merge index
    std::uint32_t low, high;   // merged community pair, low < high
    std::uint32_t result;      // surviving community id (== low)
    double modularity_after;
};

// Full agglomeration history. Community ids start out equal to vertex ids;
// a merge keeps the smaller id alive. For a graph with C connected
// components there are exactly |V| - C merges.
struct Dendrogram {
    std::size_t vertex_count = 0;
    double initial_modularity = 0.0;  // all-singletons partition
    std::vector<Merge> merges;
};

struct Partition {
    std::vector<std::uint32_t> assignment;  // dense community ids, 0..count-1
    std::size_t community_count = 0;
    double q = 0.0;
};

// Weighted modularity: Q = sum_c [ W_c/W - (S_c/2W)^2 ] with W the total
// edge weight, W_c the intra-community weight and S_c the community strength
// sum. A graph with no edges has Q = 0 by convention. Every vertex must be
// assigned.
double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& assignment);

// Fast-greedy agglomeration: start from singletons and repeatedly merge the
// connected community pair with the largest modularity gain, negative gains
// included, until no inter-community edge remains. Ties go to the smallest
// (low, high) pair, so the result is deterministic.
Dendrogram fast_greedy(const WeightedGraph& g);

// Partition at the merge step with the highest recorded modularity (the
// untouched singleton state counts as step 0; earliest step wins ties).
// Community ids are re-numbered by smallest member vertex id.
Partition cut_at_max_modularity(const Dendrogram& d, const WeightedGraph& g);

}  // namespace tagnet
