#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tagnet/community.hpp"
#include "tagnet/graph.hpp"

namespace tagnet {

// Cultural ecosystem service classes as term sets. Matching is exact over
// normalized hashtags; a class is attached to a community only when at least
// min_overlap of its members appear in the class term set.
struct CesLexicon {
    std::map<std::string, std::set<std::string>> classes;
    std::uint32_t min_overlap = 2;

    static CesLexicon from_json_text(const std::string& text);
    static CesLexicon from_json_file(const std::string& path);
};

// The starter lexicon shipped with the library (data/ces_lexicon.json,
// embedded at build time) and its raw JSON text.
const std::string& default_ces_lexicon_json();
CesLexicon default_ces_lexicon();

struct ClassHit {
    std::string class_name;
    std::uint32_t hits;
};

struct CommunityLabel {
    std::uint32_t community;
    std::uint32_t size;                // member count
    std::vector<ClassHit> classes;     // hits desc, then class name asc
    bool unmatched;
};

// Labels every community of the partition. Hit counts are plain set
// intersections between community member labels and class term sets.
std::vector<CommunityLabel> classify(const Partition& partition, const WeightedGraph& g,
                                     const CesLexicon& lexicon);

}  // namespace tagnet
