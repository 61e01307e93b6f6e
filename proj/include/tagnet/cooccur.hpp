#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagnet/graph.hpp"
#include "tagnet/ingest.hpp"

namespace tagnet {

struct AreaNetwork {
    std::string area_name;
    WeightedGraph graph;     // vertices ordered by frequency desc, label asc
    std::uint32_t k_used = 0;
    double coverage = 0.0;   // coverage_stat over the selected top set
};

struct MergedNetwork {
    WeightedGraph graph;
    std::uint64_t pair_budget = 0;
    std::vector<std::string> area_of;  // dominant contributing area per vertex
    double weight_coverage = 0.0;      // retained / total pair weight
};

// Network over the k most frequent hashtags (frequency ties broken by
// ascending label). Every unordered pair of top-k tags in a post adds 1 to
// that edge; tags outside the top set are ignored. Isolated top-k vertices
// stay in the graph. Corpora with fewer than two distinct hashtags are
// rejected.
AreaNetwork build_network(const Corpus& corpus, std::uint32_t k = 150);

// Of all (post, tag) occurrences with tag in top_set, the fraction whose
// post contains at least one other member of top_set.
double coverage_stat(const Corpus& corpus, const std::set<std::string>& top_set);

// Pools the posts of all corpora (hashtag text unifies vertices across
// areas), keeps the pair_budget heaviest co-occurrence pairs (weight ties
// broken by the lexicographically smaller pair) and induces the graph from
// the retained pairs. Every vertex is attributed to the area contributing
// most of its occurrences. By default every cleaned post contributes all
// its pairs; restrict_to_top_k instead counts only pairs whose tags are
// both in the contributing corpus's own top-k set, i.e. a merge of the
// per-area networks rather than of the raw data.
MergedNetwork merge_networks(const std::vector<Corpus>& corpora,
                             std::uint64_t pair_budget = 1400,
                             std::optional<std::uint32_t> restrict_to_top_k = std::nullopt);

}  // namespace tagnet
