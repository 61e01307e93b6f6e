#include "tagnet/ces.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tagnet/errors.hpp"
#include "tagnet/ingest.hpp"

namespace tagnet {

using nlohmann::json;

CesLexicon CesLexicon::from_json_text(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("lexicon: invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("classes") || !obj.at("classes").is_object()) {
        throw input_error("lexicon: expected an object with a \"classes\" object");
    }
    CesLexicon lexicon;
    for (const auto& [name, terms] : obj.at("classes").items()) {
        if (!terms.is_array()) {
            throw input_error("lexicon: class \"" + name + "\" must map to a term array");
        }
        std::set<std::string> normalized;
        for (const json& term : terms) {
            if (!term.is_string()) {
                throw input_error("lexicon: class \"" + name + "\" has a non-string term");
            }
            std::string t = normalize_hashtag(term.get<std::string>());
            if (!t.empty()) normalized.insert(std::move(t));
        }
        if (normalized.empty()) {
            throw input_error("lexicon: class \"" + name + "\" has no usable terms");
        }
        lexicon.classes.emplace(name, std::move(normalized));
    }
    if (obj.contains("min_overlap")) {
        if (!obj.at("min_overlap").is_number_unsigned() ||
            obj.at("min_overlap").get<std::uint64_t>() < 1) {
            throw input_error("lexicon: \"min_overlap\" must be a positive integer");
        }
        lexicon.min_overlap = obj.at("min_overlap").get<std::uint32_t>();
    }
    return lexicon;
}

CesLexicon CesLexicon::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open lexicon file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return from_json_text(buffer.str());
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

std::vector<CommunityLabel> classify(const Partition& partition, const WeightedGraph& g,
                                     const CesLexicon& lexicon) {
    if (lexicon.classes.empty()) throw input_error("classify: lexicon has no classes");
    if (partition.assignment.size() != g.vertex_count()) {
        throw input_error("classify: partition covers " +
                          std::to_string(partition.assignment.size()) +
                          " vertices, graph has " + std::to_string(g.vertex_count()));
    }

    std::vector<std::vector<VertexId>> members(partition.community_count);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        members[partition.assignment[v]].push_back(v);
    }

    std::vector<CommunityLabel> labels;
    labels.reserve(members.size());
    for (std::uint32_t c = 0; c < members.size(); ++c) {
        CommunityLabel label;
        label.community = c;
        label.size = static_cast<std::uint32_t>(members[c].size());
        for (const auto& [name, terms] : lexicon.classes) {
            std::uint32_t hits = 0;
            for (VertexId v : members[c]) {
                if (terms.contains(g.vertex(v).label)) ++hits;
            }
            if (hits >= lexicon.min_overlap) label.classes.push_back(ClassHit{name, hits});
        }
        std::sort(label.classes.begin(), label.classes.end(),
                  [](const ClassHit& a, const ClassHit& b) {
                      if (a.hits != b.hits) return a.hits > b.hits;
                      return a.class_name < b.class_name;
                  });
        label.unmatched = label.classes.empty();
        labels.push_back(std::move(label));
    }
    return labels;
}

}  // namespace tagnet
