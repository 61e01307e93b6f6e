#include "tagnet/cooccur.hpp"

#include <algorithm>
#include <unordered_map>

#include "tagnet/errors.hpp"

namespace tagnet {

namespace {

// Pair counting key: two dense 32-bit ids packed low/high.
std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

AreaNetwork build_network(const Corpus& corpus, std::uint32_t k) {
    if (k < 2) throw input_error("build_network: k must be >= 2");
    const auto frequencies = hashtag_frequencies(corpus);
    if (frequencies.size() < 2) {
        throw input_error("build_network: corpus \"" + corpus.area_name + "\" has " +
                          std::to_string(frequencies.size()) +
                          " distinct hashtags, need at least 2");
    }

    std::vector<std::pair<std::string, std::uint64_t>> ranked(frequencies.begin(),
                                                              frequencies.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    AreaNetwork net;
    net.area_name = corpus.area_name;
    net.k_used = static_cast<std::uint32_t>(ranked.size());

    std::unordered_map<std::string, std::uint32_t> id_of;
    id_of.reserve(ranked.size());
    for (const auto& [label, freq] : ranked) {
        id_of.emplace(label, net.graph.add_vertex(label, freq));
    }

    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    std::vector<std::uint32_t> members;
    for (const CleanPost& post : corpus.posts) {
        members.clear();
        for (const std::string& tag : post.tags) {
            if (auto it = id_of.find(tag); it != id_of.end()) members.push_back(it->second);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                ++pair_counts[pack_pair(members[i], members[j])];
            }
        }
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs(pair_counts.begin(),
                                                               pair_counts.end());
    std::sort(pairs.begin(), pairs.end());  // edge insertion in (u, v) order
    for (const auto& [key, count] : pairs) {
        net.graph.upsert_edge(static_cast<std::uint32_t>(key >> 32),
                              static_cast<std::uint32_t>(key & 0xffffffffu), count);
    }

    std::set<std::string> top_set;
    for (const auto& [label, _] : ranked) top_set.insert(label);
    net.coverage = coverage_stat(corpus, top_set);
    return net;
}

double coverage_stat(const Corpus& corpus, const std::set<std::string>& top_set) {
    if (top_set.empty()) throw input_error("coverage_stat: empty top set");
    std::uint64_t occurrences = 0;
    std::uint64_t paired = 0;
    for (const CleanPost& post : corpus.posts) {
        std::uint32_t in_top = 0;
        for (const std::string& tag : post.tags) {
            if (top_set.contains(tag)) ++in_top;
        }
        occurrences += in_top;
        if (in_top >= 2) paired += in_top;
    }
    if (occurrences == 0) return 0.0;
    return static_cast<double>(paired) / static_cast<double>(occurrences);
}

MergedNetwork merge_networks(const std::vector<Corpus>& corpora, std::uint64_t pair_budget,
                             std::optional<std::uint32_t> restrict_to_top_k) {
    if (corpora.size() < 2) throw input_error("merge_networks: need at least 2 corpora");
    if (pair_budget < 1) throw input_error("merge_networks: pair budget must be >= 1");

    // In restricted mode each corpus only contributes pairs from its own
    // top-k vocabulary (the per-area network view of the merge).
    std::vector<std::set<std::string>> top_sets;
    if (restrict_to_top_k) {
        if (*restrict_to_top_k < 2) {
            throw input_error("merge_networks: top-k restriction must be >= 2");
        }
        for (const Corpus& corpus : corpora) {
            const auto frequencies = hashtag_frequencies(corpus);
            std::vector<std::pair<std::string, std::uint64_t>> ranked(frequencies.begin(),
                                                                      frequencies.end());
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
            });
            if (ranked.size() > *restrict_to_top_k) ranked.resize(*restrict_to_top_k);
            std::set<std::string> top;
            for (const auto& [label, _] : ranked) top.insert(label);
            top_sets.push_back(std::move(top));
        }
    }

    // Dense ids over the pooled vocabulary, then a single pair-count pass.
    std::unordered_map<std::string, std::uint32_t> id_of;
    std::vector<std::string> labels;
    std::vector<std::uint64_t> frequency;
    // occurrences[tag][area] for the dominant-area attribution
    std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> per_area_count;

    auto intern = [&](const std::string& tag) {
        auto [it, inserted] = id_of.emplace(tag, static_cast<std::uint32_t>(labels.size()));
        if (inserted) {
            labels.push_back(tag);
            frequency.push_back(0);
            per_area_count.emplace_back();
        }
        return it->second;
    };

    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    std::uint64_t total_posts = 0;
    std::vector<std::uint32_t> members;
    for (std::uint32_t area = 0; area < corpora.size(); ++area) {
        for (const CleanPost& post : corpora[area].posts) {
            ++total_posts;
            members.clear();
            for (const std::string& tag : post.tags) {
                if (restrict_to_top_k && !top_sets[area].contains(tag)) continue;
                const std::uint32_t id = intern(tag);
                ++frequency[id];
                ++per_area_count[id][area];
                members.push_back(id);
            }
            for (std::size_t i = 0; i < members.size(); ++i) {
                for (std::size_t j = i + 1; j < members.size(); ++j) {
                    ++pair_counts[pack_pair(members[i], members[j])];
                }
            }
        }
    }
    if (total_posts == 0 || labels.empty()) {
        throw input_error("merge_networks: no posts in any corpus");
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // (key, count)
    pairs.reserve(pair_counts.size());
    std::uint64_t total_pair_weight = 0;
    for (const auto& [key, count] : pair_counts) {
        pairs.emplace_back(key, count);
        total_pair_weight += count;
    }
    auto label_pair = [&](std::uint64_t key) {
        const std::string& x = labels[static_cast<std::uint32_t>(key >> 32)];
        const std::string& y = labels[static_cast<std::uint32_t>(key & 0xffffffffu)];
        return std::minmax(x, y);
    };
    std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return label_pair(a.first) < label_pair(b.first);
    });
    if (pairs.size() > pair_budget) pairs.resize(pair_budget);

    MergedNetwork merged;
    merged.pair_budget = pair_budget;

    std::uint64_t retained_weight = 0;
    // Vertices induced by the retained pairs, ordered frequency desc / label asc.
    std::set<std::uint32_t> used;
    for (const auto& [key, count] : pairs) {
        used.insert(static_cast<std::uint32_t>(key >> 32));
        used.insert(static_cast<std::uint32_t>(key & 0xffffffffu));
        retained_weight += count;
    }
    std::vector<std::uint32_t> order(used.begin(), used.end());
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (frequency[a] != frequency[b]) return frequency[a] > frequency[b];
        return labels[a] < labels[b];
    });
    std::unordered_map<std::uint32_t, std::uint32_t> vertex_of;
    for (std::uint32_t id : order) {
        vertex_of.emplace(id, merged.graph.add_vertex(labels[id], frequency[id]));
        std::uint32_t best_area = 0;
        std::uint64_t best_count = 0;
        for (const auto& [area, count] : per_area_count[id]) {
            if (count > best_count ||
                (count == best_count &&
                 corpora[area].area_name < corpora[best_area].area_name)) {
                best_area = area;
                best_count = count;
            }
        }
        merged.area_of.push_back(corpora[best_area].area_name);
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    edges.reserve(pairs.size());
    for (const auto& [key, count] : pairs) {
        const std::uint32_t u = vertex_of.at(static_cast<std::uint32_t>(key >> 32));
        const std::uint32_t v = vertex_of.at(static_cast<std::uint32_t>(key & 0xffffffffu));
        edges.emplace_back(pack_pair(u, v), count);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [key, count] : edges) {
        merged.graph.upsert_edge(static_cast<std::uint32_t>(key >> 32),
                                 static_cast<std::uint32_t>(key & 0xffffffffu), count);
    }

    merged.weight_coverage = total_pair_weight == 0
                                 ? 1.0
                                 : static_cast<double>(retained_weight) /
                                       static_cast<double>(total_pair_weight);
    return merged;
}

}  // namespace tagnet
