// tagnet: hashtag co-occurrence network analysis pipeline.
//
// Subcommands: clean, build, analyze, merge, classify, export, synth.
// Exit codes: 0 ok, 1 input/config error, 2 analysis error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tagnet/centrality.hpp"
#include "tagnet/ces.hpp"
#include "tagnet/community.hpp"
#include "tagnet/cooccur.hpp"
#include "tagnet/errors.hpp"
#include "tagnet/graph_io.hpp"
#include "tagnet/ingest.hpp"
#include "tagnet/pipeline.hpp"
#include "tagnet/synthetic.hpp"

namespace fs = std::filesystem;
using namespace tagnet;

namespace {

struct GlobalOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> k_top;
    std::optional<std::uint64_t> pair_budget;
    std::optional<bool> weighted_betweenness;
    bool merge_top_k_only = false;
};

RunConfig load_config(const GlobalOptions& opts) {
    if (opts.config.empty()) throw input_error("missing --config");
    RunConfig config = RunConfig::from_json_file(opts.config);
    if (!opts.out.empty()) config.output_dir = opts.out;
    if (opts.seed) config.seed = *opts.seed;
    if (opts.k_top) config.k_top = *opts.k_top;
    if (opts.pair_budget) config.pair_budget = *opts.pair_budget;
    if (opts.weighted_betweenness) config.weighted_betweenness = *opts.weighted_betweenness;
    if (opts.merge_top_k_only) config.merge_top_k_only = true;
    return config;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path.string());
    out << content;
}

int cmd_clean(const GlobalOptions& opts, const std::vector<std::string>& inputs,
              const std::string& rules_path, const std::string& area) {
    if (opts.out.empty()) throw input_error("clean: missing --out directory");
    const CleaningRules rules =
        rules_path.empty() ? CleaningRules{} : CleaningRules::from_json_file(rules_path);
    const std::vector<RawPost> posts = load_posts(inputs);
    CleaningSummary summary;
    const Corpus corpus = clean(area, posts, rules, &summary);

    fs::create_directories(opts.out);
    std::ostringstream body;
    write_corpus_jsonl(body, corpus);
    write_file(fs::path(opts.out) / "corpus.jsonl", body.str());
    write_file(fs::path(opts.out) / "cleaning_summary.json", summary.to_json_text());
    std::cout << "cleaned " << summary.input_posts << " posts -> " << summary.retained_posts
              << " retained (" << opts.out << ")\n";
    return 0;
}

int cmd_build(const GlobalOptions& opts, const std::string& input, const std::string& area) {
    if (opts.out.empty()) throw input_error("build: missing --out directory");
    std::ifstream in(input);
    if (!in) throw input_error("cannot open corpus file: " + input);
    const Corpus corpus = read_corpus_jsonl(in, area);
    const AreaNetwork net = build_network(corpus, opts.k_top.value_or(150));

    fs::create_directories(opts.out);
    std::ostringstream graphml, edges, dot;
    write_graphml(graphml, net.graph);
    write_edge_csv(edges, net.graph);
    write_dot(dot, net.graph);
    write_file(fs::path(opts.out) / "graph.graphml", graphml.str());
    write_file(fs::path(opts.out) / "edges.csv", edges.str());
    write_file(fs::path(opts.out) / "graph.dot", dot.str());
    std::cout << "network: " << net.graph.vertex_count() << " vertices, "
              << net.graph.edge_count() << " edges, k_used=" << net.k_used
              << ", coverage=" << format_double(net.coverage) << "\n";
    return 0;
}

int cmd_analyze(const GlobalOptions& opts, bool with_merged) {
    const RunConfig config = load_config(opts);
    const auto reports = run_all(config, with_merged);
    for (const AreaReport& report : reports) {
        std::cout << report.area_name << ": |V|=" << report.network.graph.vertex_count()
                  << " |E|=" << report.network.graph.edge_count()
                  << " Q=" << format_double(report.partition.q)
                  << " communities=" << report.partition.community_count << "\n";
    }
    return 0;
}

int cmd_merge(const GlobalOptions& opts) {
    const RunConfig config = load_config(opts);
    if (config.output_dir.empty()) throw input_error("config: output_dir not set");
    const MergedReport report = run_merged(config);
    write_merged_outputs(report, (fs::path(config.output_dir) / "merged").string());
    std::cout << "merged: |V|=" << report.network.graph.vertex_count()
              << " |E|=" << report.network.graph.edge_count()
              << " weight_coverage=" << format_double(report.network.weight_coverage) << "\n";
    return 0;
}

int cmd_classify(const std::string& partition_path, const std::string& lexicon_path,
                 const std::string& out_path) {
    // partition.csv rows: label,community[,...]; labels plus community ids
    // are all the classifier needs.
    std::ifstream in(partition_path);
    if (!in) throw input_error("cannot open partition file: " + partition_path);
    const CesLexicon lexicon = lexicon_path.empty()
                                   ? default_ces_lexicon()
                                   : CesLexicon::from_json_file(lexicon_path);

    WeightedGraph graph;
    std::vector<std::uint32_t> assignment;
    std::string line;
    std::size_t line_no = 0;
    std::uint32_t max_community = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line_no == 1) continue;  // header
        const auto comma1 = line.find(',');
        if (comma1 == std::string::npos) {
            throw input_error(partition_path + " line " + std::to_string(line_no) +
                              ": expected label,community");
        }
        const auto comma2 = line.find(',', comma1 + 1);
        const std::string label = line.substr(0, comma1);
        const std::string community =
            line.substr(comma1 + 1, comma2 == std::string::npos ? std::string::npos
                                                                : comma2 - comma1 - 1);
        char* end = nullptr;
        const unsigned long c = std::strtoul(community.c_str(), &end, 10);
        if (end == community.c_str() || *end != '\0') {
            throw input_error(partition_path + " line " + std::to_string(line_no) +
                              ": bad community id \"" + community + "\"");
        }
        graph.add_vertex(label, 0);
        assignment.push_back(static_cast<std::uint32_t>(c));
        max_community = std::max(max_community, static_cast<std::uint32_t>(c));
    }
    Partition partition;
    partition.assignment = std::move(assignment);
    partition.community_count = partition.assignment.empty() ? 0 : max_community + 1;

    const auto labels = classify(partition, graph, lexicon);
    std::ostringstream out;
    out << "community,size,classes\n";
    for (const CommunityLabel& label : labels) {
        out << label.community << ',' << label.size << ',';
        if (label.unmatched) {
            out << "(unmatched)";
        } else {
            std::string joined;
            for (const ClassHit& hit : label.classes) {
                if (!joined.empty()) joined += "; ";
                joined += hit.class_name + " (" + std::to_string(hit.hits) + ")";
            }
            out << '"' << joined << '"';
        }
        out << '\n';
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        write_file(out_path, out.str());
    }
    return 0;
}

int cmd_export(const std::string& input, const std::string& format,
               const std::string& out_path) {
    std::ifstream in(input);
    if (!in) throw input_error("cannot open graph file: " + input);
    ImportedGraph imported;
    if (input.size() >= 8 && input.substr(input.size() - 8) == ".graphml") {
        imported = read_graphml(in);
    } else {
        imported = read_edge_csv(in);
    }
    std::ostringstream out;
    if (format == "graphml") {
        write_graphml(out, imported.graph, imported.annotations);
    } else if (format == "dot") {
        write_dot(out, imported.graph, imported.annotations);
    } else if (format == "edge-csv") {
        write_edge_csv(out, imported.graph, imported.annotations);
    } else if (format == "report-json") {
        write_graph_json(out, imported.graph, imported.annotations);
    } else {
        throw input_error("unknown export format: " + format +
                          " (expected graphml, dot, edge-csv or report-json)");
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        write_file(out_path, out.str());
    }
    return 0;
}

int cmd_synth(const GlobalOptions& opts, const std::string& plan_path, bool suite,
              std::uint32_t areas, std::uint32_t posts) {
    if (opts.out.empty()) throw input_error("synth: missing --out directory");
    fs::create_directories(opts.out);

    std::vector<SyntheticPlan> plans;
    if (suite) {
        plans = make_benchmark_plans(areas, posts, opts.seed.value_or(1));
    } else {
        if (plan_path.empty()) throw input_error("synth: need --plan or --suite");
        SyntheticPlan plan = SyntheticPlan::from_json_file(plan_path);
        if (opts.seed) plan.seed = *opts.seed;
        plans.push_back(std::move(plan));
    }

    RunConfig config;  // emitted alongside the corpora for a one-shot analyze
    for (const SyntheticPlan& plan : plans) {
        const SyntheticCorpus corpus = generate_synthetic(plan);
        std::ostringstream posts_body, ledger_body;
        write_posts_jsonl(posts_body, corpus.posts);
        write_ledger_json(ledger_body, corpus.truth);
        write_file(fs::path(opts.out) / (plan.area_name + ".jsonl"), posts_body.str());
        write_file(fs::path(opts.out) / (plan.area_name + ".ledger.json"), ledger_body.str());
        AreaConfig area;
        area.name = plan.area_name;
        area.inputs = {plan.area_name + ".jsonl"};
        config.areas.push_back(std::move(area));
        std::cout << plan.area_name << ": " << corpus.posts.size() << " posts, "
                  << corpus.truth.frequencies.size() << " distinct tags\n";
    }

    // Ship the starter lexicon with the corpora so the emitted config is
    // self-contained.
    write_file(fs::path(opts.out) / "lexicon.json", default_ces_lexicon_json());

    nlohmann::json cfg;
    cfg["k_top"] = opts.k_top.value_or(150);
    cfg["pair_budget"] = opts.pair_budget.value_or(1400);
    cfg["weighted_betweenness"] = opts.weighted_betweenness.value_or(true);
    cfg["lexicon"] = "lexicon.json";
    cfg["output_dir"] = "analysis";
    cfg["seed"] = opts.seed.value_or(1);
    cfg["areas"] = nlohmann::json::array();
    for (const AreaConfig& area : config.areas) {
        cfg["areas"].push_back({{"name", area.name}, {"inputs", area.inputs}});
    }
    write_file(fs::path(opts.out) / "config.json", cfg.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hashtag co-occurrence network analysis"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config, "run configuration file")->expected(1);
    app.add_option("--out", opts.out, "output directory or file");
    app.add_option("--seed", opts.seed, "random seed override");
    app.add_option("--k-top", opts.k_top, "top-k hashtags per area network");
    app.add_option("--pair-budget", opts.pair_budget, "merged network pair budget");
    app.add_option("--weighted-betweenness", opts.weighted_betweenness,
                   "use 1/weight distances for betweenness");
    app.add_flag("--merge-top-k-only", opts.merge_top_k_only,
                 "merge per-area top-k views instead of all cleaned posts");

    auto* clean_cmd = app.add_subcommand("clean", "clean raw post files into a corpus");
    std::vector<std::string> clean_inputs;
    std::string clean_rules, clean_area = "corpus";
    clean_cmd->add_option("--input", clean_inputs, "post files (jsonl)")->required();
    clean_cmd->add_option("--rules", clean_rules, "cleaning rules file");
    clean_cmd->add_option("--area", clean_area, "area name");

    auto* build_cmd = app.add_subcommand("build", "build the top-k network from a corpus");
    std::string build_input, build_area = "corpus";
    build_cmd->add_option("--input", build_input, "cleaned corpus (jsonl)")->required();
    build_cmd->add_option("--area", build_area, "area name");

    auto* analyze_cmd = app.add_subcommand("analyze", "full per-area analysis runs");
    bool analyze_merged = false;
    analyze_cmd->add_flag("--with-merged", analyze_merged, "also build the merged network");

    app.add_subcommand("merge", "merged cross-area network");

    auto* classify_cmd = app.add_subcommand("classify", "CES classes for a partition table");
    std::string classify_partition, classify_lexicon;
    classify_cmd->add_option("--partition", classify_partition, "partition.csv")->required();
    classify_cmd->add_option("--lexicon", classify_lexicon,
                             "lexicon file (default: built-in starter lexicon)");

    auto* export_cmd = app.add_subcommand("export", "re-export a graph file");
    std::string export_input, export_format = "graphml";
    export_cmd->add_option("--input", export_input, "graph file (.graphml or edge csv)")
        ->required();
    export_cmd->add_option("--format", export_format,
                           "graphml | dot | edge-csv | report-json");

    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic corpora");
    std::string synth_plan;
    bool synth_suite = false;
    std::uint32_t synth_areas = 14, synth_posts = 10000;
    synth_cmd->add_option("--plan", synth_plan, "synthetic plan file");
    synth_cmd->add_flag("--suite", synth_suite, "emit the 14-area benchmark suite");
    synth_cmd->add_option("--areas", synth_areas, "suite: number of areas");
    synth_cmd->add_option("--posts", synth_posts, "suite: posts per area");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("clean")) return cmd_clean(opts, clean_inputs, clean_rules,
                                                          clean_area);
        if (app.got_subcommand("build")) return cmd_build(opts, build_input, build_area);
        if (app.got_subcommand("analyze")) return cmd_analyze(opts, analyze_merged);
        if (app.got_subcommand("merge")) return cmd_merge(opts);
        if (app.got_subcommand("classify"))
            return cmd_classify(classify_partition, classify_lexicon, opts.out);
        if (app.got_subcommand("export"))
            return cmd_export(export_input, export_format, opts.out);
        if (app.got_subcommand("synth"))
            return cmd_synth(opts, synth_plan, synth_suite, synth_areas, synth_posts);
    } catch (const analysis_error& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
