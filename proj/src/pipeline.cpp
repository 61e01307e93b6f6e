#include "tagnet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "tagnet/centrality.hpp"
#include "tagnet/errors.hpp"

namespace fs = std::filesystem;

namespace tagnet {

namespace {

using nlohmann::json;

[[noreturn]] void stage_fail(const std::string& area, const char* stage,
                             const std::exception& e, bool analysis) {
    const std::string message = "[" + area + "/" + stage + "] " + e.what();
    if (analysis) throw analysis_error(message);
    throw input_error(message);
}

template <class F>
auto stage(const std::string& area, const char* name, F&& f) {
    try {
        return f();
    } catch (const analysis_error& e) {
        stage_fail(area, name, e, true);
    } catch (const std::exception& e) {
        stage_fail(area, name, e, false);
    }
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path.string());
    out << content;
    if (!out) throw input_error("write failed: " + path.string());
}

json community_json(const WeightedGraph& g, const Partition& partition,
                    const std::vector<CommunityLabel>& labels) {
    std::vector<std::vector<std::string>> members(partition.community_count);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        members[partition.assignment[v]].push_back(g.vertex(v).label);
    }
    json communities = json::array();
    for (std::uint32_t c = 0; c < partition.community_count; ++c) {
        json entry;
        entry["id"] = c;
        entry["size"] = members[c].size();
        entry["small"] = members[c].size() < 3;  // flagged, never hidden
        entry["members"] = members[c];
        json classes = json::array();
        if (c < labels.size()) {
            for (const ClassHit& hit : labels[c].classes) {
                classes.push_back({{"class", hit.class_name}, {"hits", hit.hits}});
            }
        }
        entry["ces_classes"] = std::move(classes);
        communities.push_back(std::move(entry));
    }
    return communities;
}

std::string partition_csv(const WeightedGraph& g, const Partition& partition,
                          const std::vector<CommunityLabel>& labels) {
    std::ostringstream out;
    out << "label,community,ces_classes\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const std::uint32_t c = partition.assignment[v];
        out << g.vertex(v).label << ',' << c << ',';
        std::string joined;
        if (c < labels.size()) {
            for (const ClassHit& hit : labels[c].classes) {
                if (!joined.empty()) joined += "; ";
                joined += hit.class_name;
            }
        }
        if (joined.find_first_of(",\"") != std::string::npos) {
            out << '"';
            for (char ch : joined) {
                if (ch == '"') out << "\"\"";
                else out << ch;
            }
            out << '"';
        } else {
            out << joined;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<CommunityLabel> maybe_classify(const RunConfig& config, const std::string& area,
                                           const Partition& partition,
                                           const WeightedGraph& graph) {
    if (config.lexicon_file.empty()) return {};
    return stage(area, "classify", [&] {
        const CesLexicon lexicon = CesLexicon::from_json_file(config.lexicon_file);
        return classify(partition, graph, lexicon);
    });
}

}  // namespace

void RunConfig::validate() const {
    if (k_top < 2) throw input_error("config: k_top must be >= 2");
    if (pair_budget < 1) throw input_error("config: pair_budget must be >= 1");
    if (eigenvector_tolerance <= 0.0) throw input_error("config: tolerance must be > 0");
    if (eigenvector_max_iterations < 1) {
        throw input_error("config: eigenvector_max_iterations must be >= 1");
    }
    std::set<std::string> names;
    for (const AreaConfig& area : areas) {
        if (area.name.empty()) throw input_error("config: area with empty name");
        if (!names.insert(area.name).second) {
            throw input_error("config: duplicate area name \"" + area.name + "\"");
        }
        if (area.inputs.empty()) {
            throw input_error("config: area \"" + area.name + "\" has no input files");
        }
    }
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config file: " + path);
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error(path + ": invalid JSON: " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        fs::path candidate(p);
        return candidate.is_absolute() ? p : (base / candidate).string();
    };

    RunConfig config;
    auto get = [&](const char* key, auto& field) {
        if (obj.contains(key)) obj.at(key).get_to(field);
    };
    get("k_top", config.k_top);
    get("pair_budget", config.pair_budget);
    get("weighted_betweenness", config.weighted_betweenness);
    get("merge_top_k_only", config.merge_top_k_only);
    get("eigenvector_tolerance", config.eigenvector_tolerance);
    get("eigenvector_max_iterations", config.eigenvector_max_iterations);
    get("seed", config.seed);
    std::string lexicon, outdir;
    get("lexicon", lexicon);
    get("output_dir", outdir);
    config.lexicon_file = resolve(lexicon);
    config.output_dir = resolve(outdir);
    if (obj.contains("areas")) {
        if (!obj.at("areas").is_array()) throw input_error(path + ": \"areas\" must be an array");
        for (const json& a : obj.at("areas")) {
            AreaConfig area;
            area.name = a.value("name", "");
            if (a.contains("inputs")) {
                for (const json& f : a.at("inputs")) {
                    area.inputs.push_back(resolve(f.get<std::string>()));
                }
            }
            area.rules_file = resolve(a.value("rules", ""));
            config.areas.push_back(std::move(area));
        }
    }
    config.validate();
    return config;
}

AreaReport analyze_corpus(const RunConfig& config, const Corpus& corpus,
                          const CleaningSummary& cleaning) {
    const std::string& area = corpus.area_name;
    AreaReport report;
    report.area_name = area;
    report.cleaning = cleaning;

    report.network = stage(area, "build_network",
                           [&] { return build_network(corpus, config.k_top); });
    const WeightedGraph& graph = report.network.graph;

    report.annotations.eigenvector = stage(area, "eigenvector", [&] {
        return eigenvector_centrality(
            graph, EigenvectorOptions{config.eigenvector_tolerance,
                                      config.eigenvector_max_iterations});
    });
    BetweennessScores scores = stage(area, "betweenness", [&] {
        return betweenness(graph, config.weighted_betweenness);
    });
    report.annotations.vertex_betweenness = std::move(scores.vertex);
    report.annotations.edge_betweenness = std::move(scores.edge);

    report.partition = stage(area, "fast_greedy", [&] {
        return cut_at_max_modularity(fast_greedy(graph), graph);
    });
    report.annotations.community = report.partition.assignment;
    report.ces_labels = maybe_classify(config, area, report.partition, graph);
    return report;
}

AreaReport run_area(const RunConfig& config, const AreaConfig& area) {
    const std::vector<RawPost> posts =
        stage(area.name, "ingest", [&] { return load_posts(area.inputs); });
    const CleaningRules rules = stage(area.name, "rules", [&] {
        return area.rules_file.empty() ? CleaningRules{}
                                       : CleaningRules::from_json_file(area.rules_file);
    });
    CleaningSummary summary;
    const Corpus corpus =
        stage(area.name, "clean", [&] { return clean(area.name, posts, rules, &summary); });
    return analyze_corpus(config, corpus, summary);
}

MergedReport analyze_merged(const RunConfig& config, const std::vector<Corpus>& corpora) {
    MergedReport report;
    report.network = stage("merged", "merge_networks", [&] {
        return merge_networks(corpora, config.pair_budget,
                              config.merge_top_k_only
                                  ? std::optional<std::uint32_t>(config.k_top)
                                  : std::nullopt);
    });
    const WeightedGraph& graph = report.network.graph;

    report.annotations.area = report.network.area_of;
    report.annotations.eigenvector = stage("merged", "eigenvector", [&] {
        return eigenvector_centrality(
            graph, EigenvectorOptions{config.eigenvector_tolerance,
                                      config.eigenvector_max_iterations});
    });
    BetweennessScores scores = stage("merged", "betweenness", [&] {
        return betweenness(graph, config.weighted_betweenness);
    });
    report.annotations.vertex_betweenness = std::move(scores.vertex);
    report.annotations.edge_betweenness = std::move(scores.edge);
    report.partition = stage("merged", "fast_greedy", [&] {
        return cut_at_max_modularity(fast_greedy(graph), graph);
    });
    report.annotations.community = report.partition.assignment;
    report.ces_labels = maybe_classify(config, "merged", report.partition, graph);
    return report;
}

MergedReport run_merged(const RunConfig& config) {
    if (config.areas.size() < 2) {
        throw input_error("merged run needs at least 2 configured areas");
    }
    std::vector<Corpus> corpora;
    corpora.reserve(config.areas.size());
    for (const AreaConfig& area : config.areas) {
        const std::vector<RawPost> posts =
            stage(area.name, "ingest", [&] { return load_posts(area.inputs); });
        const CleaningRules rules = stage(area.name, "rules", [&] {
            return area.rules_file.empty() ? CleaningRules{}
                                           : CleaningRules::from_json_file(area.rules_file);
        });
        corpora.push_back(
            stage(area.name, "clean", [&] { return clean(area.name, posts, rules); }));
    }
    return analyze_merged(config, corpora);
}

namespace {

void write_graph_bundle(const fs::path& dir, const WeightedGraph& graph,
                        const GraphAnnotations& ann) {
    std::ostringstream graphml, dot, edges, centrality, graph_json;
    write_graphml(graphml, graph, ann);
    write_dot(dot, graph, ann);
    write_edge_csv(edges, graph, ann);
    write_centrality_csv(centrality, graph, ann);
    write_graph_json(graph_json, graph, ann);
    write_text_file(dir / "graph.graphml", graphml.str());
    write_text_file(dir / "graph.dot", dot.str());
    write_text_file(dir / "edges.csv", edges.str());
    write_text_file(dir / "centrality.csv", centrality.str());
    write_text_file(dir / "graph.json", graph_json.str());
}

}  // namespace

void write_area_outputs(const AreaReport& report, const std::string& directory) {
    const fs::path dir(directory);
    fs::create_directories(dir);
    write_text_file(dir / "cleaning_summary.json", report.cleaning.to_json_text());
    write_graph_bundle(dir, report.network.graph, report.annotations);
    write_text_file(dir / "partition.csv",
                    partition_csv(report.network.graph, report.partition, report.ces_labels));

    json doc;
    doc["area"] = report.area_name;
    doc["network"] = {{"vertices", report.network.graph.vertex_count()},
                      {"edges", report.network.graph.edge_count()},
                      {"total_weight", report.network.graph.total_weight()},
                      {"k_used", report.network.k_used},
                      {"coverage", report.network.coverage}};
    doc["modularity"] = report.partition.q;
    doc["communities"] =
        community_json(report.network.graph, report.partition, report.ces_labels);
    doc["cleaning"] = json::parse(report.cleaning.to_json_text());
    write_text_file(dir / "report.json", doc.dump(2) + "\n");
}

void write_merged_outputs(const MergedReport& report, const std::string& directory) {
    const fs::path dir(directory);
    fs::create_directories(dir);
    write_graph_bundle(dir, report.network.graph, report.annotations);
    write_text_file(dir / "partition.csv",
                    partition_csv(report.network.graph, report.partition, report.ces_labels));

    json doc;
    doc["area"] = "merged";
    doc["network"] = {{"vertices", report.network.graph.vertex_count()},
                      {"edges", report.network.graph.edge_count()},
                      {"total_weight", report.network.graph.total_weight()},
                      {"pair_budget", report.network.pair_budget},
                      {"weight_coverage", report.network.weight_coverage}};
    doc["modularity"] = report.partition.q;
    doc["communities"] =
        community_json(report.network.graph, report.partition, report.ces_labels);
    write_text_file(dir / "report.json", doc.dump(2) + "\n");
}

std::vector<AreaReport> run_all(const RunConfig& config, bool include_merged) {
    config.validate();
    if (config.output_dir.empty()) throw input_error("config: output_dir not set");
    fs::create_directories(config.output_dir);

    // Cleaning is shared between the per-area runs and the merged network.
    std::vector<Corpus> corpora(config.areas.size());
    std::vector<CleaningSummary> summaries(config.areas.size());
    std::vector<AreaReport> reports(config.areas.size());

    std::vector<std::future<void>> jobs;
    jobs.reserve(config.areas.size());
    for (std::size_t i = 0; i < config.areas.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const AreaConfig& area = config.areas[i];
            const std::vector<RawPost> posts =
                stage(area.name, "ingest", [&] { return load_posts(area.inputs); });
            const CleaningRules rules = stage(area.name, "rules", [&] {
                return area.rules_file.empty()
                           ? CleaningRules{}
                           : CleaningRules::from_json_file(area.rules_file);
            });
            corpora[i] = stage(area.name, "clean",
                               [&] { return clean(area.name, posts, rules, &summaries[i]); });
            reports[i] = analyze_corpus(config, corpora[i], summaries[i]);
            write_area_outputs(reports[i],
                               (fs::path(config.output_dir) / area.name).string());
        }));
    }
    for (auto& job : jobs) job.get();

    if (include_merged && config.areas.size() >= 2) {
        const MergedReport merged = analyze_merged(config, corpora);
        write_merged_outputs(merged, (fs::path(config.output_dir) / "merged").string());
    }
    return reports;
}

}  // namespace tagnet
