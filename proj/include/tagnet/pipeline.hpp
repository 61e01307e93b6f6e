#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tagnet/ces.hpp"
#include "tagnet/community.hpp"
#include "tagnet/cooccur.hpp"
#include "tagnet/graph_io.hpp"
#include "tagnet/ingest.hpp"

namespace tagnet {

struct AreaConfig {
    std::string name;
    std::vector<std::string> inputs;  // post files, concatenated with id dedup
    std::string rules_file;           // optional; empty = identity rules
};

struct RunConfig {
    std::vector<AreaConfig> areas;
    std::uint32_t k_top = 150;
    std::uint64_t pair_budget = 1400;
    bool weighted_betweenness = true;
    bool merge_top_k_only = false;  // merge per-area top-k views instead of raw posts
    double eigenvector_tolerance = 1e-10;
    std::uint32_t eigenvector_max_iterations = 10000;
    std::string lexicon_file;  // optional; empty = skip CES labels
    std::string output_dir;
    std::uint64_t seed = 0;

    void validate() const;

    // Relative paths inside the file resolve against its directory.
    static RunConfig from_json_file(const std::string& path);
};

struct AreaReport {
    std::string area_name;
    CleaningSummary cleaning;
    AreaNetwork network;
    GraphAnnotations annotations;
    Partition partition;
    std::vector<CommunityLabel> ces_labels;
};

struct MergedReport {
    MergedNetwork network;
    GraphAnnotations annotations;
    Partition partition;
    std::vector<CommunityLabel> ces_labels;
};

// ingest -> clean -> top-k network -> centralities -> fast-greedy cut ->
// CES labels. Stage failures are rethrown with the stage and area name.
AreaReport run_area(const RunConfig& config, const AreaConfig& area);

// Same analysis on an already cleaned corpus (used by run_area and by the
// synthetic end-to-end tests).
AreaReport analyze_corpus(const RunConfig& config, const Corpus& corpus,
                          const CleaningSummary& cleaning);

// Pools every area's cleaned posts into the pair-budget merged network with
// eigenvector influence and dominant-area attribution.
MergedReport run_merged(const RunConfig& config);
MergedReport analyze_merged(const RunConfig& config, const std::vector<Corpus>& corpora);

// Report + export bundle, one directory per area (and "merged").
void write_area_outputs(const AreaReport& report, const std::string& directory);
void write_merged_outputs(const MergedReport& report, const std::string& directory);

// Full run: all areas concurrently, then the merged network, everything
// written under config.output_dir. Returns the per-area reports.
std::vector<AreaReport> run_all(const RunConfig& config, bool include_merged = true);

}  // namespace tagnet
